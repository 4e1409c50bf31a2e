#include <doctest.h>

#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>

#include "frex/cli.hpp"
#include "frex/conllu.hpp"
#include "frex/embedding.hpp"
#include "frex/io.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using frex::test::data_path;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run frex_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = frex::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("frex-cli-" + std::to_string(std::rand()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(frex_run({}).code == 2);
  const auto unknown = frex_run({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK_FALSE(unknown.err.empty());
  CHECK(frex_run({"beta", "--a-t", "1"}).code == 2);
  CHECK(frex_run({"beta", "--a-t", "1", "--a-small-t", "1", "--bogus"}).code == 2);
  CHECK(frex_run({"score", "--gold", "/nonexistent", "--pred", "/nonexistent"}).code == 2);
}

TEST_CASE("help and version go to stdout") {
  const auto help = frex_run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("transfer") != std::string::npos);
  const auto version = frex_run({"--version"});
  CHECK(version.code == 0);
  CHECK(version.out.find(frex::kVersion) != std::string::npos);
}

TEST_CASE("beta prints the recall weight") {
  const auto r = frex_run({"beta", "--a-t", "28.29", "--a-small-t", "11.86"});
  CHECK(r.code == 0);
  CHECK(r.out == "2.385\n");
  CHECK(frex_run({"beta", "--a-t", "0", "--a-small-t", "1"}).code == 1);
}

TEST_CASE("transfer then score on the worked example") {
  TempDir tmp;
  const auto t = frex_run({"transfer", "--corpus", data_path("todo_unlabeled.conllu").string(), "--features",
                           data_path("todo_features.tsv").string(), "--out", tmp / "labeled.conllu", "--report",
                           tmp / "report.json"});
  REQUIRE(t.code == 0);
  CHECK(frex::read_file(tmp / "labeled.conllu") == frex::read_file(data_path("todo_labeled.conllu")));
  CHECK(nlohmann::json::parse(frex::read_file(tmp / "report.json"))["annotations_made"] == 1);

  const auto manifest = nlohmann::json::parse(frex::read_file(tmp / "labeled.conllu.manifest.json"));
  CHECK(manifest["command"] == "transfer");
  CHECK(manifest["inputs"].size() == 2);
  CHECK(manifest["outputs"][0]["sha256"] == frex::sha256_hex(frex::read_file(tmp / "labeled.conllu")));

  const auto s = frex_run({"score", "--gold", data_path("todo_labeled.conllu").string(), "--pred",
                           tmp / "labeled.conllu", "--level", "token", "--beta", "2.385"});
  REQUIRE(s.code == 0);
  const auto report = nlohmann::json::parse(s.out)["token"];
  CHECK(report["level"] == "token");
  CHECK(report["f_beta"] == 1.0);
  CHECK(report["counts"]["tp"] == 3);

  // unlabeled prediction misses all three feature tokens
  const auto miss = frex_run({"score", "--gold", data_path("todo_labeled.conllu").string(), "--pred",
                              data_path("todo_unlabeled.conllu").string(), "--level", "span"});
  REQUIRE(miss.code == 0);
  CHECK(nlohmann::json::parse(miss.out)["span"]["counts"]["fn"] == 1);
}

TEST_CASE("parse errors exit 1 with the line number") {
  TempDir tmp;
  frex::write_atomic(tmp / "bad.conllu", "# review_id = r\n# app_id = a\n# category = PR\n1\tx\n\n");
  const auto r = frex_run({"validate", "--corpus", tmp / "bad.conllu"});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 4") != std::string::npos);

  frex::write_atomic(tmp / "orphan.conllu",
                     "# review_id = r\n# app_id = a\n# category = PR\n1\tx\tx\tX\t_\t_\t_\t_\t_\tner=I-feature\n\n");
  CHECK(frex_run({"validate", "--corpus", tmp / "orphan.conllu"}).code == 1);

  const auto ok = frex_run({"validate", "--corpus", data_path("todo_labeled.conllu").string()});
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok: 1 reviews, 1 categories\n");
}

TEST_CASE("select names a review without an embedding") {
  TempDir tmp;
  frex::write_atomic(tmp / "empty.jsonl", "{\"review_id\": \"other\", \"vector\": [1.0, 0.0]}\n");
  const auto r = frex_run({"select", "--corpus", data_path("todo_labeled.conllu").string(), "--features",
                           data_path("todo_features.tsv").string(), "--embeddings", tmp / "empty.jsonl", "--out",
                           tmp / "plan.json"});
  CHECK(r.code == 1);
  CHECK(r.err.find("r1") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp / "plan.json"));
}

TEST_CASE("mock-embed, select and split round through files") {
  TempDir tmp;
  const std::string corpus = data_path("three_reviews_golden.conllu").string();
  REQUIRE(frex_run({"mock-embed", "--corpus", corpus, "--dim", "16", "--out", tmp / "emb.jsonl"}).code == 0);
  const auto store = frex::read_embeddings(tmp / "emb.jsonl");
  CHECK(store.size() == 3);
  CHECK(store.dim() == 16);

  frex::write_atomic(tmp / "features.tsv", "app_id\tfeature_phrase\ncom.example.notes\tdark mode\n");
  const auto sel = frex_run({"select", "--corpus", corpus, "--features", tmp / "features.tsv", "--embeddings",
                             tmp / "emb.jsonl", "--out", tmp / "plan.json", "--audit", tmp / "audit.tsv",
                             "--fractions", "0.5,1"});
  REQUIRE(sel.code == 0);
  const auto plan = nlohmann::json::parse(frex::read_file(tmp / "plan.json"));
  CHECK(plan.contains("0.5"));
  CHECK(plan.contains("1"));

  const auto split = frex_run({"--seed", "7", "split", "--corpus", corpus, "--mode", "out-of-domain", "--out",
                               tmp / "folds.json"});
  REQUIRE(split.code == 0);
  const auto folds = nlohmann::json::parse(frex::read_file(tmp / "folds.json"));
  CHECK(folds["mode"] == "out-of-domain");

  const auto in = frex_run({"split", "--seed", "7", "--corpus", corpus, "--k", "2", "--out", tmp / "in.json"});
  REQUIRE(in.code == 0);
  CHECK(nlohmann::json::parse(frex::read_file(tmp / "in.json"))["seed"] == 7);

  const auto fold_score = frex_run({"score", "--gold", corpus, "--pred", corpus, "--level", "both", "--folds", tmp / "in.json"});
  REQUIRE(fold_score.code == 0);
  const auto by_fold = nlohmann::json::parse(fold_score.out);
  CHECK(by_fold["token"]["folds"].size() == 2);
  CHECK(by_fold["span"]["summary"]["mean"]["f_beta"] == 1.0);
}

TEST_CASE("stats and humaneval") {
  const auto st = frex_run({"stats", "--corpus", data_path("todo_labeled.conllu").string()});
  CHECK(st.code == 0);
  CHECK(st.out.rfind("metric\tPR\tTotal\n", 0) == 0);

  TempDir tmp;
  std::string tsv = "task_id\tannotator_id\treview_id\tfeature_phrase\tanswer\tis_control\tcontrol_correct\n";
  for (int a = 0; a < 5; ++a) {
    for (int c = 0; c < 5; ++c) tsv += "t\tann" + std::to_string(a) + "\tc" + std::to_string(c) + "\tx\tyes\t1\t1\n";
    tsv += "t\tann" + std::to_string(a) + "\tr1\tto do list\tyes\t0\t\n";
  }
  frex::write_atomic(tmp / "records.tsv", tsv);
  const auto he = frex_run({"humaneval", "--records", tmp / "records.tsv", "--corpus",
                            data_path("todo_labeled.conllu").string()});
  REQUIRE(he.code == 0);
  const auto doc = nlohmann::json::parse(he.out);
  CHECK(doc["summary"]["total"]["yes"] == 100.0);
}

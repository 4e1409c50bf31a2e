#include "frex/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "frex/conllu.hpp"
#include "frex/embedding.hpp"
#include "frex/error.hpp"
#include "frex/human_eval.hpp"
#include "frex/instance_select.hpp"
#include "frex/io.hpp"
#include "frex/metrics.hpp"
#include "frex/report_json.hpp"
#include "frex/splitter.hpp"
#include "frex/stats.hpp"
#include "frex/transfer.hpp"

namespace frex::cli {
namespace {

namespace fs = std::filesystem;

enum class Verbosity { Quiet, Error, Warn, Info, Debug };

Verbosity verbosity_from_env() {
  const char* raw = std::getenv("FREX_LOG");
  if (raw == nullptr) return Verbosity::Warn;
  const std::string v(raw);
  if (v == "quiet" || v == "off") return Verbosity::Quiet;
  if (v == "error") return Verbosity::Error;
  if (v == "info") return Verbosity::Info;
  if (v == "debug" || v == "trace") return Verbosity::Debug;
  return Verbosity::Warn;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(verbosity_from_env()) {}

  void error(std::string_view msg) const { emit(Verbosity::Error, "error", msg); }
  void warn(std::string_view msg) const { emit(Verbosity::Warn, "warning", msg); }
  void info(std::string_view msg) const { emit(Verbosity::Info, "info", msg); }

 private:
  void emit(Verbosity at, std::string_view tag, std::string_view msg) const {
    if (level_ >= at) err_ << "frex: " << tag << ": " << msg << '\n';
  }

  std::ostream& err_;
  Verbosity level_;
};

// Collects inputs, configuration and outputs of one run and writes
// <primary output>.manifest.json next to the primary output.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void input(const std::string& role, const fs::path& path) {
    inputs_.push_back({{"role", role}, {"path", path.string()}, {"sha256", sha256_file(path)}});
  }
  template <typename T>
  void config(const std::string& key, const T& value) {
    config_[key] = value;
  }
  void output(const fs::path& path, std::string_view content) {
    write_atomic(path, content);
    outputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(content)}});
    if (primary_.empty()) primary_ = path;
  }
  void finish() const {
    if (primary_.empty()) return;
    Json doc{{"tool", "frex"},           {"version", kVersion}, {"command", command_},
             {"config", config_},        {"inputs", inputs_},   {"outputs", outputs_}};
    write_atomic(fs::path(primary_.string() + ".manifest.json"), doc.dump(2) + "\n");
  }

 private:
  std::string command_;
  Json config_ = Json::object();
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
  fs::path primary_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

template <typename Fn>
std::string render(Fn fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

// Writes to path through the manifest, or to out when path is empty.
void emit(Manifest& m, const std::string& path, std::string_view content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    m.output(path, content);
  }
}

const std::map<std::string, MatchOn> kMatchOn{{"lemma", MatchOn::Lemma}, {"surface", MatchOn::Surface}};
const std::map<std::string, OccurrenceMode> kOccurrence{{"first", OccurrenceMode::First},
                                                        {"all", OccurrenceMode::AllNonOverlapping},
                                                        {"all-non-overlapping", OccurrenceMode::AllNonOverlapping}};
const std::map<std::string, OverwriteMode> kOverwrite{{"skip-conflicts", OverwriteMode::SkipConflicts},
                                                      {"literal-overwrite", OverwriteMode::LiteralOverwrite}};
const std::map<std::string, RankOrder> kOrder{{"farthest-first", RankOrder::FarthestFirst},
                                              {"nearest-first", RankOrder::NearestFirst}};
const std::map<std::string, SplitMode> kSplitMode{{"in-domain", SplitMode::InDomain},
                                                  {"out-of-domain", SplitMode::OutOfDomain}};

struct Options {
  std::uint64_t seed = kDefaultSeed;

  // transfer
  std::string corpus, features, out, report;
  std::string match_on = "lemma", occurrence = "first", overwrite = "skip-conflicts";
  // select
  std::string embeddings, audit, order = "farthest-first", folds, fold;
  std::vector<double> fractions{0.125, 0.25, 0.50, 0.75};
  // split
  std::string mode = "in-domain";
  std::size_t k = kDefaultFolds;
  // score
  std::string gold, pred, level = "token", text;
  double beta = kDefaultBeta;
  // beta
  double a_t = 0.0, a_small_t = 0.0;
  // humaneval
  std::string records;
  std::size_t controls_per_task = kAssessmentPolicy.controls_per_task;
  std::size_t min_correct = kAssessmentPolicy.min_correct;
  std::size_t min_annotators = kMinAnnotators;
  // stats
  std::string json;
  // mock-embed
  std::size_t dim = 64;
};

int cmd_transfer(const Options& o, std::ostream& out, const Log& log) {
  Manifest m("transfer");
  m.input("corpus", o.corpus);
  m.input("features", o.features);
  TransferConfig config{kMatchOn.at(o.match_on), kOccurrence.at(o.occurrence), kOverwrite.at(o.overwrite)};
  m.config("match_on", o.match_on);
  m.config("occurrence", o.occurrence);
  m.config("overwrite", o.overwrite);

  const auto features = read_features(o.features);
  if (features.duplicates_dropped() > 0) {
    log.warn(fmt::format("{} duplicate feature records dropped", features.duplicates_dropped()));
  }
  auto result = transfer_annotations(read_corpus(o.corpus), features, config);
  log.info(fmt::format("{} annotations over {} reviews, {} conflicts skipped", result.report.annotations_made,
                       result.report.reviews_touched, result.report.conflicts_skipped));
  emit(m, o.out, serialize_corpus(result.corpus), out);
  if (!o.report.empty()) m.output(o.report, dump(to_json(result.report)));
  m.finish();
  return kSuccess;
}

std::optional<FoldPlan> load_folds(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path));
  return read_fold_plan(in);
}

int cmd_select(const Options& o, std::ostream& out, const Log& log) {
  Manifest m("select");
  m.input("corpus", o.corpus);
  m.input("features", o.features);
  m.input("embeddings", o.embeddings);
  m.config("fractions", o.fractions);
  m.config("order", o.order);

  AnnotatedCorpus corpus = read_corpus(o.corpus);
  if (const auto plan = load_folds(o.folds)) {
    m.input("folds", o.folds);
    m.config("fold", o.fold);
    const auto it = std::find_if(plan->folds.begin(), plan->folds.end(), [&](const Fold& f) { return f.name == o.fold; });
    if (it == plan->folds.end()) throw ValidationError(fmt::format("fold '{}' not found in {}", o.fold, o.folds));
    std::vector<Review> train;
    for (const auto& id : plan->train_ids(corpus, static_cast<std::size_t>(it - plan->folds.begin()))) {
      train.push_back(*corpus.find(id));
    }
    log.info(fmt::format("selecting from {} training reviews of fold {}", train.size(), o.fold));
    corpus = AnnotatedCorpus(std::move(train));
  }

  SelectionConfig config;
  config.fractions = o.fractions;
  config.order = kOrder.at(o.order);
  const auto plan = select_instances(corpus, read_features(o.features), read_embeddings(o.embeddings), config);
  for (std::size_t i = 0; i < plan.fractions.size(); ++i) {
    log.info(fmt::format("fraction {}: {} reviews", format_fraction(plan.fractions[i]), plan.per_fraction[i].size()));
  }
  emit(m, o.out, render([&](std::ostream& s) { write_plan_json(plan, s); }), out);
  if (!o.audit.empty()) m.output(o.audit, render([&](std::ostream& s) { write_audit_tsv(plan, s); }));
  m.finish();
  return kSuccess;
}

int cmd_split(const Options& o, std::ostream& out, const Log& log) {
  Manifest m("split");
  m.input("corpus", o.corpus);
  m.config("mode", o.mode);
  const auto corpus = read_corpus(o.corpus);
  FoldPlan plan;
  if (kSplitMode.at(o.mode) == SplitMode::InDomain) {
    m.config("k", o.k);
    m.config("seed", o.seed);
    plan = split_in_domain(corpus, o.k, o.seed);
  } else {
    plan = split_out_of_domain(corpus);
  }
  for (const auto& w : plan.warnings) log.warn(w);
  emit(m, o.out, render([&](std::ostream& s) { write_fold_plan(plan, s); }), out);
  m.finish();
  return kSuccess;
}

int cmd_score(const Options& o, std::ostream& out, const Log& log) {
  Manifest m("score");
  m.input("gold", o.gold);
  m.input("pred", o.pred);
  m.config("level", o.level);
  m.config("beta", o.beta);

  const auto gold = read_corpus(o.gold);
  const auto pred = read_corpus(o.pred);
  std::vector<Level> levels;
  if (o.level == "token" || o.level == "both") levels.push_back(Level::Token);
  if (o.level == "span" || o.level == "both") levels.push_back(Level::Span);

  const auto plan = load_folds(o.folds);
  if (plan) m.input("folds", o.folds);

  Json doc = Json::object();
  std::string text;
  for (Level level : levels) {
    if (!plan) {
      const auto rep = score(level, gold, pred, o.beta);
      if (rep.repairs > 0) log.warn(fmt::format("{} orphan I-feature tokens in prediction read as B-feature", rep.repairs));
      doc[std::string(to_string(level))] = to_json(rep);
      text += format_report_text(rep);
      continue;
    }
    std::vector<MetricReport> reports;
    Json folds = Json::array();
    for (const Fold& f : plan->folds) {
      reports.push_back(score_subset(level, gold, pred, f.test, o.beta));
      Json j = to_json(reports.back());
      j["fold"] = f.name;
      folds.push_back(std::move(j));
    }
    const auto summary = aggregate_folds(reports);
    doc[std::string(to_string(level))] = {{"folds", folds}, {"summary", to_json(summary)}};
    text += format_summary_text(summary);
  }
  emit(m, o.out, dump(doc), out);
  if (!o.text.empty()) m.output(o.text, text);
  m.finish();
  return kSuccess;
}

int cmd_beta(const Options& o, std::ostream& out) {
  const double beta = compute_beta({o.a_t, o.a_small_t});
  out << fmt::format("{:.3f}\n", beta);
  if (!o.out.empty()) {
    Manifest m("beta");
    m.config("a_t", o.a_t);
    m.config("a_small_t", o.a_small_t);
    m.output(o.out, dump({{"a_t", o.a_t}, {"a_small_t", o.a_small_t}, {"beta", beta}}));
    m.finish();
  }
  return kSuccess;
}

int cmd_humaneval(const Options& o, std::ostream& out, const Log& log) {
  Manifest m("humaneval");
  m.input("records", o.records);
  m.config("controls_per_task", o.controls_per_task);
  m.config("min_correct", o.min_correct);
  m.config("min_annotators", o.min_annotators);

  std::map<std::string, std::string> categories;
  if (!o.corpus.empty()) {
    m.input("corpus", o.corpus);
    const auto corpus = read_corpus(o.corpus);
    for (const Review& r : corpus.reviews()) categories.emplace(r.review_id, r.category);
  }
  const auto records = read_annotation_records(o.records);
  const auto result =
      evaluate_annotations(records, {o.controls_per_task, o.min_correct}, o.min_annotators, categories);
  for (const auto& r : result.filter.rejected) {
    log.info(fmt::format("rejected annotator {} on task {} ({}/{} controls)", r.who.second, r.who.first, r.correct,
                         o.controls_per_task));
  }
  if (!result.coverage.insufficient.empty()) {
    log.warn(fmt::format("{} of {} items had fewer than {} valid annotators", result.coverage.insufficient.size(),
                         result.coverage.items, o.min_annotators));
  }
  emit(m, o.out, dump(to_json(result)), out);
  if (!o.text.empty() && !result.items.empty()) m.output(o.text, format_summary_table(result.summary));
  m.finish();
  return kSuccess;
}

int cmd_stats(const Options& o, std::ostream& out) {
  Manifest m("stats");
  m.input("corpus", o.corpus);
  FeatureSet features;
  if (!o.features.empty()) {
    m.input("features", o.features);
    features = read_features(o.features);
  }
  const auto stats = compute_stats(read_corpus(o.corpus), features);
  emit(m, o.out, render([&](std::ostream& s) { write_stats_tsv(stats, s); }), out);
  if (!o.json.empty()) m.output(o.json, dump(to_json(stats)));
  m.finish();
  return kSuccess;
}

int cmd_mock_embed(const Options& o, std::ostream& out) {
  Manifest m("mock-embed");
  m.input("corpus", o.corpus);
  m.config("dim", o.dim);
  const auto store = mock_embed_corpus(read_corpus(o.corpus), o.dim);
  emit(m, o.out, render([&](std::ostream& s) { save_embeddings(store, s); }), out);
  m.finish();
  return kSuccess;
}

int cmd_validate(const Options& o, std::ostream& out, const Log& log) {
  const auto corpus = read_corpus(o.corpus);
  std::vector<std::string> issues;
  for (const Review& r : corpus.reviews()) {
    for (auto& v : bio_violations(r)) issues.push_back(std::move(v));
  }
  std::map<std::string, std::set<std::string>> categories_by_app;
  for (const Review& r : corpus.reviews()) categories_by_app[r.app_id].insert(r.category);
  for (const auto& [app, cats] : categories_by_app) {
    if (cats.size() > 1) log.warn(fmt::format("app {} has reviews in {} categories", app, cats.size()));
  }
  if (!o.features.empty()) {
    const auto features = read_features(o.features);
    if (features.duplicates_dropped() > 0) {
      log.warn(fmt::format("{} duplicate feature records", features.duplicates_dropped()));
    }
  }
  for (const auto& issue : issues) out << issue << '\n';
  if (!issues.empty()) {
    log.error(fmt::format("{} BIO violations", issues.size()));
    return kInvalidInput;
  }
  out << fmt::format("ok: {} reviews, {} categories\n", corpus.size(), corpus.categories().size());
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Log log(err);
  Options o;
  CLI::App app{"Feature extraction corpus toolkit: transfer, selection, splits and scoring"};
  app.name("frex");
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Seed for all randomness")->capture_default_str();
  app.set_version_flag("--version", std::string(kVersion));

  const auto existing = CLI::ExistingFile;

  auto* transfer = app.add_subcommand("transfer", "Project feature annotations onto review tokens");
  transfer->add_option("--corpus", o.corpus, "Unlabeled CoNLL-U corpus")->required()->check(existing);
  transfer->add_option("--features", o.features, "Feature TSV (app_id, feature_phrase[, feature_lemmas])")
      ->required()
      ->check(existing);
  transfer->add_option("--out", o.out, "Labeled CoNLL-U output")->required();
  transfer->add_option("--report", o.report, "Transfer report JSON");
  transfer->add_option("--match-on", o.match_on)->check(CLI::IsMember({"lemma", "surface"}))->capture_default_str();
  transfer->add_option("--occurrence", o.occurrence)
      ->check(CLI::IsMember({"first", "all", "all-non-overlapping"}))
      ->capture_default_str();
  transfer->add_option("--overwrite", o.overwrite)
      ->check(CLI::IsMember({"skip-conflicts", "literal-overwrite"}))
      ->capture_default_str();

  auto* select = app.add_subcommand("select", "Instance selection partitions by distance to feature centroids");
  select->add_option("--corpus", o.corpus, "Gold CoNLL-U corpus")->required()->check(existing);
  select->add_option("--features", o.features, "Feature TSV")->required()->check(existing);
  select->add_option("--embeddings", o.embeddings, "Embedding JSON Lines")->required()->check(existing);
  select->add_option("--out", o.out, "Partition plan JSON")->required();
  select->add_option("--audit", o.audit, "Ranking audit TSV");
  select->add_option("--fractions", o.fractions)->delimiter(',')->capture_default_str();
  select->add_option("--order", o.order)->check(CLI::IsMember({"farthest-first", "nearest-first"}))->capture_default_str();
  auto* folds_opt = select->add_option("--folds", o.folds, "Fold plan JSON; select from one fold's training set")
                        ->check(existing);
  select->add_option("--fold", o.fold, "Fold name within --folds")->needs(folds_opt);
  folds_opt->needs(select->get_option("--fold"));

  auto* split = app.add_subcommand("split", "Cross-validation fold plans");
  split->add_option("--corpus", o.corpus)->required()->check(existing);
  split->add_option("--mode", o.mode)->check(CLI::IsMember({"in-domain", "out-of-domain"}))->capture_default_str();
  split->add_option("--k", o.k, "Number of folds (in-domain)")->capture_default_str();
  split->add_option("--out", o.out, "Fold plan JSON")->required();
  split->fallthrough();

  auto* score_cmd = app.add_subcommand("score", "Score predicted labels against gold");
  score_cmd->add_option("--gold", o.gold)->required()->check(existing);
  score_cmd->add_option("--pred", o.pred)->required()->check(existing);
  score_cmd->add_option("--level", o.level)->check(CLI::IsMember({"token", "span", "both"}))->capture_default_str();
  score_cmd->add_option("--beta", o.beta)->check(CLI::PositiveNumber)->capture_default_str();
  score_cmd->add_option("--folds", o.folds, "Fold plan JSON: score each test fold and average")->check(existing);
  score_cmd->add_option("--out", o.out, "Report JSON (stdout when omitted)");
  score_cmd->add_option("--text", o.text, "Plaintext report");

  auto* beta = app.add_subcommand("beta", "Recall weight from timing study");
  beta->add_option("--a-t", o.a_t, "Mean manual extraction time per feature (s)")->required();
  beta->add_option("--a-small-t", o.a_small_t, "Mean validity check time per feature (s)")->required();
  beta->add_option("--out", o.out, "JSON output");

  auto* humaneval = app.add_subcommand("humaneval", "Aggregate questionnaire answers");
  humaneval->add_option("--records", o.records, "Annotation TSV")->required()->check(existing);
  humaneval->add_option("--controls-per-task", o.controls_per_task)->capture_default_str();
  humaneval->add_option("--min-correct", o.min_correct)->capture_default_str();
  humaneval->add_option("--min-annotators", o.min_annotators)->capture_default_str();
  humaneval->add_option("--corpus", o.corpus, "CoNLL-U corpus for review categories")->check(existing);
  humaneval->add_option("--out", o.out, "Summary JSON (stdout when omitted)");
  humaneval->add_option("--text", o.text, "Plaintext table");

  auto* stats = app.add_subcommand("stats", "Dataset overview per category");
  stats->add_option("--corpus", o.corpus)->required()->check(existing);
  stats->add_option("--features", o.features, "Restrict distinct features to this table")->check(existing);
  stats->add_option("--out", o.out, "TSV table (stdout when omitted)");
  stats->add_option("--json", o.json, "JSON output");

  auto* mock = app.add_subcommand("mock-embed", "Deterministic hashed bag-of-lemmas embeddings");
  mock->add_option("--corpus", o.corpus)->required()->check(existing);
  mock->add_option("--dim", o.dim)->check(CLI::PositiveNumber)->capture_default_str();
  mock->add_option("--out", o.out, "Embedding JSON Lines")->required();

  auto* validate = app.add_subcommand("validate", "Check corpus invariants");
  validate->add_option("--corpus", o.corpus)->required()->check(existing);
  validate->add_option("--features", o.features)->check(existing);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kUsage;
  }

  try {
    if (*transfer) return cmd_transfer(o, out, log);
    if (*select) return cmd_select(o, out, log);
    if (*split) return cmd_split(o, out, log);
    if (*score_cmd) return cmd_score(o, out, log);
    if (*beta) return cmd_beta(o, out);
    if (*humaneval) return cmd_humaneval(o, out, log);
    if (*stats) return cmd_stats(o, out);
    if (*mock) return cmd_mock_embed(o, out);
    if (*validate) return cmd_validate(o, out, log);
  } catch (const Error& e) {
    log.error(e.what());
    return kInvalidInput;
  } catch (const std::exception& e) {
    log.error(e.what());
    return kInvalidInput;
  }
  return kUsage;
}

}  // namespace frex::cli

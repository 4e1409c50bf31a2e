// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 if
// anything failed. Tolerances and time budgets are fixed below.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "frex/conllu.hpp"
#include "frex/embedding.hpp"
#include "frex/human_eval.hpp"
#include "frex/instance_select.hpp"
#include "frex/io.hpp"
#include "frex/metrics.hpp"
#include "frex/splitter.hpp"
#include "frex/stats.hpp"
#include "frex/transfer.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace frex;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

Outcome fail(std::string why) { return {Status::Fail, std::move(why)}; }

int failures = 0;

void criterion(const std::string& name, double budget_ms, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result = fail(fmt::format("exception: {}", e.what()));
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (result.status == Status::Pass && ms >= budget_ms) {
    result = fail(fmt::format("{} (over time budget)", result.detail));
  }
  const char* tag = result.status == Status::Pass ? "PASS" : result.status == Status::Skip ? "SKIP" : "FAIL";
  if (result.status == Status::Fail) ++failures;
  fmt::print("{} {:<24} {:.3f} ms (< {} ms)  {}\n", tag, name, ms, budget_ms, result.detail);
}

fs::path data(const std::string& name) { return fs::path(FREX_TEST_DATA) / name; }

// Mean of a group computed directly, with no shared code.
Vector plain_mean(const std::vector<const Vector*>& vs) {
  Vector m(vs.front()->size(), 0.0);
  for (const Vector* v : vs) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += (*v)[i];
  }
  for (double& x : m) x /= static_cast<double>(vs.size());
  return m;
}

double plain_distance(const Vector& a, const Vector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct SyntheticSelection {
  AnnotatedCorpus corpus;
  FeatureSet features;
  std::map<std::string, std::set<std::string>> members;  // phrase -> review ids, as generated
};

// 1,000 reviews over 5 apps; every app owns 4 of the 20 features and each
// review mentions one or two of its app's features.
SyntheticSelection synthetic_selection(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> heads{"dark", "video", "cloud", "voice", "photo"};
  const std::vector<std::string> tails{"mode", "calling", "sync", "notes"};
  const std::vector<std::string> filler{"the", "app", "is", "great", "but", "crashes", "when", "i", "open", "it"};

  std::vector<Feature> feats;
  std::vector<std::vector<std::vector<std::string>>> by_app(5);
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t t = 0; t < 4; ++t) {
      std::vector<std::string> words{heads[a], tails[t]};
      if (t == 3) words = {heads[a]};
      if ((a + t) % 4 == 0) words.push_back("feature");
      Feature f;
      f.app_id = "app" + std::to_string(a);
      for (const auto& w : words) f.phrase.push_back({w, w});
      feats.push_back(f);
      by_app[a].push_back(words);
    }
  }

  SyntheticSelection out;
  std::vector<Review> reviews;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t a = rng() % 5;
    Review r;
    r.review_id = fmt::format("rev{:04}", i);
    r.app_id = "app" + std::to_string(a);
    r.category = std::string(1, static_cast<char>('A' + a % 3));
    Sentence s;
    const std::size_t mentions = 1 + rng() % 2;
    for (std::size_t m = 0; m < mentions; ++m) {
      for (std::size_t k = 0, n = 1 + rng() % 6; k < n; ++k) {
        const auto& w = filler[rng() % filler.size()];
        s.push_back({w, w, "", Label::O, {}});
      }
      const auto& words = by_app[a][rng() % 4];
      for (std::size_t k = 0; k < words.size(); ++k) s.push_back({words[k], words[k], "", k == 0 ? Label::B : Label::I, {}});
      std::string phrase;
      for (const auto& w : words) phrase += (phrase.empty() ? "" : " ") + w;
      out.members[phrase].insert(r.review_id);
    }
    s.push_back({"ok", "ok", "", Label::O, {}});
    r.sentences.push_back(std::move(s));
    reviews.push_back(std::move(r));
  }
  out.corpus = AnnotatedCorpus(std::move(reviews));
  out.features = FeatureSet(std::move(feats));
  return out;
}

bool same_plan(const PartitionPlan& a, const PartitionPlan& b) {
  if (a.per_fraction != b.per_fraction) return false;
  if (a.per_feature_rank.size() != b.per_feature_rank.size()) return false;
  for (const auto& [phrase, ranked] : a.per_feature_rank) {
    const auto it = b.per_feature_rank.find(phrase);
    if (it == b.per_feature_rank.end() || it->second.size() != ranked.size()) return false;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (ranked[i].review_id != it->second[i].review_id || ranked[i].distance != it->second[i].distance) return false;
    }
  }
  return true;
}

AnnotatedCorpus sized_corpus(const std::vector<std::pair<std::string, std::size_t>>& sizes) {
  std::vector<Review> reviews;
  for (const auto& [cat, n] : sizes) {
    for (std::size_t i = 0; i < n; ++i) {
      reviews.push_back({fmt::format("{}-{:03}", cat, i), "app-" + cat, cat, {{{"ok", "ok", "", Label::O, {}}}}});
    }
  }
  return AnnotatedCorpus(std::move(reviews));
}

}  // namespace

int main() {
  criterion("beta-derivation", 1.0, [] {
    const double beta = compute_beta({28.29, 11.86});
    if (std::abs(beta - 2.385) > 0.001) return fail(fmt::format("beta = {}", beta));
    return Outcome{Status::Pass, fmt::format("beta = {:.6f}, |beta - 2.385| <= 0.001", beta)};
  });

  criterion("f-beta-identities", 1000.0, [] {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double worst_fixed = 0.0;
    double worst_limit = 0.0;
    for (int i = 1; i <= 100; ++i) {
      for (int j = 1; j <= 100; ++j) {
        const double p = i / 100.0, r = j / 100.0;
        if (f_beta(p, r, 1.0) != 2 * p * r / (p + r)) return fail(fmt::format("beta = 1 at p={} r={}", p, r));
      }
      const double p = i / 100.0;
      for (double beta : {0.5, 1.0, 2.385, 10.0}) {
        worst_fixed = std::max(worst_fixed, std::abs(f_beta(p, p, beta) - p) / (eps * p));
      }
    }
    if (worst_fixed > 4.0) return fail(fmt::format("p = r fixed point off by {} ulp", worst_fixed));
    for (int i = 10; i <= 90; ++i) {
      for (int j = 10; j <= 90; ++j) {
        const double p = i / 100.0, r = j / 100.0;
        worst_limit = std::max(worst_limit, std::abs(f_beta(p, r, 100.0) - r));
      }
    }
    if (worst_limit >= 0.02) return fail(fmt::format("beta = 100: max |f - r| = {}", worst_limit));
    return Outcome{Status::Pass, fmt::format("beta=1 exact on 100x100; p=r within {:.0f} ulp; beta=100 max |f-r| = {:.5f}",
                                             worst_fixed, worst_limit)};
  });

  criterion("worked-example", 1000.0, [] {
    const auto corpus = read_corpus(data("todo_unlabeled.conllu"));
    const auto features = read_features(data("todo_features.tsv"));
    const auto result = transfer_annotations(corpus, features);
    std::string labels;
    for (const auto& t : result.corpus.reviews().at(0).sentences.at(0)) labels += t.label == Label::B ? 'B' : t.label == Label::I ? 'I' : 'O';
    if (labels != "BIIOOOO") return fail("labels " + labels);
    if (serialize_corpus(result.corpus) != read_file(data("todo_labeled.conllu"))) return fail("serialized bytes differ");
    return Outcome{Status::Pass, "labels BIIOOOO, output byte-identical"};
  });

  criterion("scorers-vs-oracles", 10000.0, [] {
    std::mt19937_64 rng(2024);
    frex::test::CorpusShape shape;
    shape.max_sentences = 3;
    shape.max_tokens = 8;
    shape.rich_columns = false;
    std::size_t tokens = 0;
    for (int iter = 0; iter < 1000; ++iter) {
      shape.reviews = 1 + rng() % 8;  // at most 8 * 3 * 8 = 192 tokens
      const auto gold = frex::test::random_corpus(rng, shape);
      const auto pred = frex::test::relabel(rng, gold, iter % 2 == 0);
      for (const auto& r : gold.reviews()) tokens += r.token_count();
      const auto tok = score_tokens(gold, pred).counts;
      const auto tok_o = frex::test::token_confusion_oracle(gold, pred);
      if (tok != ConfusionCounts{tok_o.tp, tok_o.fp, tok_o.fn}) return fail(fmt::format("token mismatch on corpus {}", iter));
      const auto span = score_spans(gold, pred).counts;
      const auto span_o = frex::test::span_confusion_oracle(gold, pred);
      if (span != ConfusionCounts{span_o.tp, span_o.fp, span_o.fn}) return fail(fmt::format("span mismatch on corpus {}", iter));
    }
    return Outcome{Status::Pass, fmt::format("1000 corpora, {} tokens, exact agreement", tokens)};
  });

  criterion("instance-selection", 5000.0, [] {
    const auto synth = synthetic_selection(77);
    const auto store = mock_embed_corpus(synth.corpus, 64);
    const SelectionConfig config;
    const auto plan = select_instances(synth.corpus, synth.features, store, config);
    if (synth.members.size() != 20) return fail("generator produced fewer than 20 features");

    const std::pair<std::size_t, std::size_t> exact[] = {{1, 8}, {1, 4}, {1, 2}, {3, 4}};
    for (const auto& [phrase, ids] : synth.members) {
      const auto& ranked = plan.per_feature_rank.at(phrase);
      if (ranked.size() != ids.size()) return fail(fmt::format("group '{}' has {} members, expected {}", phrase, ranked.size(), ids.size()));
      std::vector<const Vector*> vs;
      for (const auto& id : ids) vs.push_back(store.find(id));
      const Vector c = plain_mean(vs);
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (!ids.contains(ranked[i].review_id)) return fail("ranked non-member");
        if (std::abs(plain_distance(*store.find(ranked[i].review_id), c) - ranked[i].distance) > 1e-9) return fail("distance mismatch");
        if (i > 0 && (ranked[i - 1].distance < ranked[i].distance ||
                      (ranked[i - 1].distance == ranked[i].distance && ranked[i - 1].review_id > ranked[i].review_id))) {
          return fail(fmt::format("group '{}' not farthest-first", phrase));
        }
      }
    }
    for (std::size_t fi = 0; fi < 4; ++fi) {
      std::set<std::string> expected;
      for (const auto& [phrase, ranked] : plan.per_feature_rank) {
        const std::size_t len = frex::test::ceil_fraction(exact[fi].first, exact[fi].second, ranked.size());
        for (std::size_t i = 0; i < len; ++i) expected.insert(ranked[i].review_id);
      }
      if (plan.per_fraction[fi] != expected) return fail(fmt::format("partition {} is not the union of ceil(d n) prefixes", config.fractions[fi]));
      if (fi > 0 && !std::includes(plan.per_fraction[fi].begin(), plan.per_fraction[fi].end(), plan.per_fraction[fi - 1].begin(),
                                   plan.per_fraction[fi - 1].end())) {
        return fail("nesting violated");
      }
    }

    std::mt19937_64 rng(5);
    std::vector<Review> shuffled = synth.corpus.reviews();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<Feature> feats = synth.features.features();
    std::shuffle(feats.begin(), feats.end(), rng);
    const auto rerun = select_instances(AnnotatedCorpus(std::move(shuffled)), FeatureSet(std::move(feats)), store, config);
    if (!same_plan(plan, rerun)) return fail("permuted input changed the plan");

    return Outcome{Status::Pass, fmt::format("1000 reviews x 20 features, dim 64; sizes {}/{}/{}/{}; nested; permutation-stable",
                                             plan.per_fraction[0].size(), plan.per_fraction[1].size(), plan.per_fraction[2].size(),
                                             plan.per_fraction[3].size())};
  });

  criterion("stratified-split", 1000.0, [] {
    const auto fixed = sized_corpus({{"A", 60}, {"B", 40}});
    const auto plan = split_in_domain(fixed, 10, kDefaultSeed);
    for (const auto& f : plan.folds) {
      std::size_t a = 0;
      for (const auto& id : f.test) a += fixed.find(id)->category == "A";
      if (a != 6 || f.test.size() != 10) return fail(fmt::format("{} has {} A + {} B", f.name, a, f.test.size() - a));
    }
    std::mt19937_64 rng(31);
    double worst = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      std::vector<std::pair<std::string, std::size_t>> sizes;
      for (std::size_t c = 0, n = 1 + rng() % 6; c < n; ++c) sizes.emplace_back(std::string(1, static_cast<char>('A' + c)), 1 + rng() % 50);
      const auto corpus = sized_corpus(sizes);
      const std::size_t k = 2 + rng() % 9;
      const auto p = split_in_domain(corpus, k, rng());
      std::multiset<std::string> seen;
      for (const auto& f : p.folds) {
        seen.insert(f.test.begin(), f.test.end());
        std::map<std::string, std::size_t> counts;
        for (const auto& id : f.test) ++counts[corpus.find(id)->category];
        for (const auto& [cat, n] : sizes) {
          worst = std::max(worst, std::abs(static_cast<double>(counts[cat]) - static_cast<double>(n) / static_cast<double>(k)));
        }
      }
      if (seen.size() != corpus.size() || std::set<std::string>(seen.begin(), seen.end()).size() != corpus.size()) {
        return fail("test sets are not a partition");
      }
      const auto ood = split_out_of_domain(corpus.categories().size() > 1 ? corpus : fixed);
      std::size_t total = 0;
      for (const auto& f : ood.folds) total += f.test.size();
      if (total != (corpus.categories().size() > 1 ? corpus.size() : fixed.size())) return fail("out-of-domain folds do not cover the corpus");
    }
    if (worst > 1.0) return fail(fmt::format("max deviation from proportionality {}", worst));
    return Outcome{Status::Pass, fmt::format("60/40 -> 6+4 in all 10 folds; 200 random corpora, max deviation {:.2f}", worst)};
  });

  criterion("human-eval-weighting", 1.0, [] {
    const std::vector<CategoryRates> rows{{"PR", 206, 57.8, 35.4, 6.8}, {"CO", 228, 68.0, 25.9, 6.1}, {"TO", 260, 60.0, 34.6, 5.4},
                                          {"SO", 102, 71.6, 22.5, 5.9}, {"HE", 282, 53.2, 38.7, 8.2}, {"PE", 8, 87.5, 12.5, 0.0},
                                          {"TR", 93, 51.6, 43.0, 5.4},  {"MA", 46, 54.3, 41.3, 4.3},  {"LI", 35, 88.6, 8.6, 2.9},
                                          {"WE", 60, 63.3, 33.3, 3.4}};
    const auto t = weighted_summary(rows).total;
    const bool ok = std::abs(t.yes - 60.8) <= 0.1 && std::abs(t.no - 33.1) <= 0.1 && std::abs(t.idk - 6.1) <= 0.1;
    const auto detail = fmt::format("n = {}, totals {:.3f} / {:.3f} / {:.3f} vs 60.8 / 33.1 / 6.1 (+-0.1)", t.n, t.yes, t.no, t.idk);
    return ok ? Outcome{Status::Pass, detail} : fail(detail);
  });

  criterion("dataset-statistics", 60000.0, [] {
    const char* env = std::getenv("FREX_TFREX_DATASET");
    fs::path path = env != nullptr ? fs::path(env) : data("tfrex/tfrex.conllu");
    if (!fs::exists(path)) return Outcome{Status::Skip, "published dataset not supplied (set FREX_TFREX_DATASET to its CoNLL-U file)"};
    FeatureSet features;
    if (const char* f = std::getenv("FREX_TFREX_FEATURES")) features = read_features(f);
    const auto t = compute_stats(read_corpus(path), features).total;
    const bool ok = t.reviews == 23816 && t.tokens == 475382 && t.b_feature == 29383 && t.i_feature == 2841 && t.o == 443158 &&
                    t.distinct_features == 198;
    const auto detail = fmt::format("reviews {} tokens {} B {} I {} O {} distinct {}", t.reviews, t.tokens, t.b_feature, t.i_feature,
                                    t.o, t.distinct_features);
    return ok ? Outcome{Status::Pass, detail} : fail(detail);
  });

  criterion("conllu-round-trip", 10000.0, [] {
    std::mt19937_64 rng(99);
    frex::test::CorpusShape shape;
    for (int i = 0; i < 500; ++i) {
      shape.reviews = rng() % 10;
      const auto corpus = frex::test::random_corpus(rng, shape);
      const auto text = serialize_corpus(corpus);
      const auto back = parse_corpus(text);
      if (!(back == corpus) || serialize_corpus(back) != text) return fail(fmt::format("round trip broke on corpus {}", i));
    }
    for (const char* name : {"todo_labeled.conllu", "three_reviews_golden.conllu"}) {
      const auto text = read_file(data(name));
      if (serialize_corpus(parse_corpus(text)) != text) return fail(fmt::format("{} not byte-identical", name));
    }
    if (serialize_corpus(read_corpus(data("three_reviews_input.conllu"))) != read_file(data("three_reviews_golden.conllu"))) {
      return fail("golden fixture mismatch");
    }
    return Outcome{Status::Pass, "500 generated corpora and golden files byte-identical"};
  });

  fmt::print("{}\n", failures == 0 ? "all criteria met" : fmt::format("{} criteria failed", failures));
  return failures == 0 ? 0 : 1;
}

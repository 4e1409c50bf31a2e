#include "frex/report_json.hpp"

namespace frex {
namespace {

Json counts_json(const ConfusionCounts& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}}; }

Json category_json(const CategoryStats& c) {
  return {{"apps", c.apps},
          {"reviews", c.reviews},
          {"sentences", c.sentences},
          {"tokens", c.tokens},
          {"B-feature", c.b_feature},
          {"I-feature", c.i_feature},
          {"O", c.o},
          {"features", c.features},
          {"distinct_features", c.distinct_features}};
}

Json rates_json(const CategoryRates& r) {
  return {{"category", r.category}, {"n", r.n}, {"yes", r.yes}, {"no", r.no}, {"idk", r.idk}};
}

}  // namespace

Json to_json(const MetricReport& rep) {
  Json j{{"level", to_string(rep.level)}, {"counts", counts_json(rep.counts)},
         {"p", rep.p},                    {"r", rep.r},
         {"f1", rep.f1},                  {"f_beta", rep.f_beta},
         {"beta", rep.beta},              {"p_undefined", rep.p_undefined},
         {"r_undefined", rep.r_undefined}};
  if (rep.level == Level::Span) j["repairs"] = rep.repairs;
  return j;
}

Json to_json(const FoldSummary& s) {
  return {{"level", to_string(s.level)},
          {"beta", s.beta},
          {"folds", s.folds},
          {"mean", {{"p", s.p}, {"r", s.r}, {"f1", s.f1}, {"f_beta", s.f_beta}}},
          {"f_beta_of_means", s.f_beta_of_means},
          {"micro", to_json(s.micro)}};
}

Json to_json(const TransferReport& rep) {
  Json per_feature = Json::array();
  for (const auto& [key, count] : rep.per_feature_counts) {
    const auto tab = key.find('\t');
    per_feature.push_back({{"app_id", key.substr(0, tab)}, {"feature", key.substr(tab + 1)}, {"count", count}});
  }
  return {{"annotations_made", rep.annotations_made},
          {"reviews_touched", rep.reviews_touched},
          {"conflicts_skipped", rep.conflicts_skipped},
          {"per_feature_counts", per_feature}};
}

Json to_json(const CorpusStats& stats) {
  Json per = Json::object();
  for (const auto& [category, c] : stats.per_category) per[category] = category_json(c);
  return {{"per_category", per}, {"total", category_json(stats.total)}, {"apps_additive", stats.apps_additive}};
}

Json to_json(const EvalSummary& s) {
  Json rows = Json::array();
  for (const auto& r : s.per_category) rows.push_back(rates_json(r));
  return {{"per_category", rows}, {"total", rates_json(s.total)}};
}

Json to_json(const HumanEvalResult& result) {
  Json rejected = Json::array();
  for (const auto& r : result.filter.rejected) {
    rejected.push_back({{"task_id", r.who.first}, {"annotator_id", r.who.second}, {"correct", r.correct},
                        {"required", r.required}});
  }
  Json insufficient = Json::array();
  for (const auto& [review, feature] : result.coverage.insufficient) {
    insufficient.push_back({{"review_id", review}, {"feature_phrase", feature}});
  }
  Json j{{"valid_assignments", result.filter.valid.size()},
         {"rejected_assignments", rejected},
         {"coverage", {{"items", result.coverage.items}, {"voted", result.coverage.voted}, {"insufficient", insufficient}}}};
  if (!result.items.empty()) j["summary"] = to_json(result.summary);
  return j;
}

}  // namespace frex

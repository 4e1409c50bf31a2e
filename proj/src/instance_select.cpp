#include "frex/instance_select.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>

#include "frex/error.hpp"

namespace frex {

void SelectionConfig::validate() const {
  if (fractions.empty()) throw ValidationError("at least one selection fraction is required");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double d = fractions[i];
    if (!(d > 0.0 && d <= 1.0)) throw ValidationError(fmt::format("fraction {} outside (0, 1]", d));
    if (i > 0 && !(d > fractions[i - 1])) throw ValidationError("fractions must be strictly increasing");
  }
}

FeatureGroups build_feature_groups(const AnnotatedCorpus& corpus, const FeatureSet& features) {
  FeatureGroups groups;
  for (const std::string& phrase : features.distinct_phrases()) groups.emplace(phrase, std::vector<std::string>{});

  for (const Review& review : corpus.reviews()) {
    for (const Span& span : extract_spans(review)) {
      const auto it = groups.find(join(span_keys(review, span), " "));
      if (it == groups.end()) continue;
      auto& members = it->second;
      if (members.empty() || members.back() != review.review_id) members.push_back(review.review_id);
    }
  }
  for (auto& [phrase, members] : groups) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  return groups;
}

const std::set<std::string>& PartitionPlan::at(double fraction) const {
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (fractions[i] == fraction) return per_fraction[i];
  }
  throw ValidationError(fmt::format("fraction {} not in plan", fraction));
}

std::size_t prefix_length(double fraction, std::size_t n) {
  const double exact = fraction * static_cast<double>(n);
  const double nearest = std::nearbyint(exact);
  double len = std::ceil(exact);
  if (std::fabs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) len = nearest;
  return std::min(n, static_cast<std::size_t>(std::max(0.0, len)));
}

PartitionPlan select_instances(const AnnotatedCorpus& corpus, const FeatureSet& features,
                               const EmbeddingStore& store, const SelectionConfig& config) {
  config.validate();
  if (features.empty()) throw ValidationError("feature set is empty");

  const FeatureGroups groups = build_feature_groups(corpus, features);
  for (const auto& [phrase, members] : groups) {
    for (const auto& id : members) {
      if (!store.contains(id)) {
        throw ValidationError(fmt::format("review {} (feature \"{}\") has no embedding", id, phrase));
      }
    }
  }

  PartitionPlan plan;
  plan.fractions = config.fractions;
  plan.per_fraction.resize(config.fractions.size());

  for (const auto& [phrase, members] : groups) {
    auto& ranked = plan.per_feature_rank[phrase];
    if (members.empty()) continue;

    // members are sorted by id, so the centroid sum order does not depend on input order
    std::vector<const Vector*> vectors;
    vectors.reserve(members.size());
    for (const auto& id : members) vectors.push_back(store.find(id));
    const Vector c = centroid(std::span<const Vector* const>(vectors));

    ranked.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) ranked.push_back({members[i], euclidean(*vectors[i], c)});
    const bool farthest = config.order == RankOrder::FarthestFirst;
    std::sort(ranked.begin(), ranked.end(), [farthest](const RankedMember& a, const RankedMember& b) {
      if (a.distance != b.distance) return farthest ? a.distance > b.distance : a.distance < b.distance;
      return a.review_id < b.review_id;
    });

    for (std::size_t fi = 0; fi < plan.fractions.size(); ++fi) {
      const std::size_t len = prefix_length(plan.fractions[fi], ranked.size());
      for (std::size_t i = 0; i < len; ++i) plan.per_fraction[fi].insert(ranked[i].review_id);
    }
  }
  return plan;
}

std::string format_fraction(double fraction) { return fmt::format("{}", fraction); }

void write_plan_json(const PartitionPlan& plan, std::ostream& out) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < plan.fractions.size(); ++i) {
    doc[format_fraction(plan.fractions[i])] =
        std::vector<std::string>(plan.per_fraction[i].begin(), plan.per_fraction[i].end());
  }
  out << doc.dump(2) << '\n';
}

void write_audit_tsv(const PartitionPlan& plan, std::ostream& out) {
  out << "feature\treview_id\tdistance\trank\n";
  for (const auto& [phrase, ranked] : plan.per_feature_rank) {
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      out << fmt::format("{}\t{}\t{}\t{}\n", phrase, ranked[i].review_id, ranked[i].distance, i);
    }
  }
}

}  // namespace frex

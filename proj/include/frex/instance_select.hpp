#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "frex/corpus.hpp"
#include "frex/embedding.hpp"

namespace frex {

// Central density-based instance selection (CDIS) over feature groups.
//
// Each distinct feature phrase f defines a group D[f] of reviews with a
// labeled span equal to f. Members are ranked by Euclidean distance to the
// group centroid and every fraction d keeps the first ceil(d * |D[f]|)
// members of each group; a partition is the union of those prefixes.

enum class RankOrder { FarthestFirst, NearestFirst };

struct SelectionConfig {
  std::vector<double> fractions{0.125, 0.25, 0.50, 0.75};
  RankOrder order = RankOrder::FarthestFirst;

  // Throws ValidationError unless fractions are strictly increasing in (0, 1].
  void validate() const;
};

// Distinct lemma phrase -> review ids (sorted, unique) whose gold spans match it.
using FeatureGroups = std::map<std::string, std::vector<std::string>>;

FeatureGroups build_feature_groups(const AnnotatedCorpus& corpus, const FeatureSet& features);

struct RankedMember {
  std::string review_id;
  double distance = 0.0;
};

struct PartitionPlan {
  std::vector<double> fractions;
  // fraction index (parallel to fractions) -> selected review ids.
  std::vector<std::set<std::string>> per_fraction;
  // feature phrase -> members in selection order.
  std::map<std::string, std::vector<RankedMember>> per_feature_rank;

  const std::set<std::string>& at(double fraction) const;
};

// ceil(fraction * n), snapping products within 1e-9 of an integer
// (0.1 * 30 is 3, not 4).
std::size_t prefix_length(double fraction, std::size_t n);

PartitionPlan select_instances(const AnnotatedCorpus& corpus, const FeatureSet& features,
                               const EmbeddingStore& store, const SelectionConfig& config = {});

// {"0.125": [ids...], ...} with ids sorted.
void write_plan_json(const PartitionPlan& plan, std::ostream& out);
// feature, review_id, distance, rank (0-based) per ranked member.
void write_audit_tsv(const PartitionPlan& plan, std::ostream& out);

std::string format_fraction(double fraction);

}  // namespace frex

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "frex/corpus.hpp"

namespace frex {

struct CategoryStats {
  std::size_t apps = 0;
  std::size_t reviews = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t b_feature = 0;
  std::size_t i_feature = 0;
  std::size_t o = 0;
  std::size_t features = 0;  // feature mentions, one per B-feature token
  std::size_t distinct_features = 0;

  bool operator==(const CategoryStats&) const = default;
};

// Dataset overview per category and in total. The total counts distinct
// apps and distinct feature phrases globally, so a phrase present in two
// categories counts once there.
struct CorpusStats {
  std::map<std::string, CategoryStats> per_category;
  CategoryStats total;
  // false when some app has reviews in more than one category; apps then do not add up.
  bool apps_additive = true;
};

// A distinct feature is the normalized lemma phrase of a gold span. When
// features is non-empty only phrases present in it are counted.
CorpusStats compute_stats(const AnnotatedCorpus& corpus, const FeatureSet& features = {});

// Rows are metrics, columns are categories followed by Total.
void write_stats_tsv(const CorpusStats& stats, std::ostream& out);

}  // namespace frex

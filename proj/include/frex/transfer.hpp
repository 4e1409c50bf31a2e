#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "frex/corpus.hpp"

namespace frex {

// Reads the crowdsourced feature table: UTF-8 TSV with a header naming
// app_id, feature_phrase and optionally feature_lemmas. Phrases and lemmas
// are space-separated token lists of equal length.
FeatureSet parse_features(std::istream& in);
FeatureSet parse_features(std::string_view text);
FeatureSet read_features(const std::filesystem::path& path);

enum class OccurrenceMode { First, AllNonOverlapping };
enum class OverwriteMode { SkipConflicts, LiteralOverwrite };

struct TransferConfig {
  MatchOn match_on = MatchOn::Lemma;
  OccurrenceMode occurrence = OccurrenceMode::First;
  OverwriteMode overwrite = OverwriteMode::SkipConflicts;
};

struct TransferReport {
  std::size_t annotations_made = 0;
  std::size_t reviews_touched = 0;
  std::size_t conflicts_skipped = 0;
  // Keyed by "app_id<TAB>lemma phrase".
  std::map<std::string, std::size_t> per_feature_counts;
};

struct TransferResult {
  AnnotatedCorpus corpus;
  TransferReport report;
};

// Start indices of left-to-right greedy, non-overlapping occurrences of
// phrase inside sentence. Both sides are already-normalized keys.
std::vector<std::size_t> find_matches(const std::vector<std::string>& sentence,
                                      const std::vector<std::string>& phrase);

// Token-level convenience overload; normalizes both sides per match_on.
std::vector<std::size_t> find_matches(const Sentence& sentence, const Feature& feature, MatchOn match_on);

// Projects app-level feature annotations onto review tokens as B/I labels.
// Features of the review's app are applied longest phrase first, then by
// lemma phrase, then by app_id.
TransferResult transfer_annotations(const AnnotatedCorpus& corpus, const FeatureSet& features,
                                    const TransferConfig& config = {});

}  // namespace frex

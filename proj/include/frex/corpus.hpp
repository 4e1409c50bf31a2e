#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace frex {

// Token classes for feature extraction: the closed set {O, B-feature, I-feature}.
enum class Label : std::uint8_t { O, B, I };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;
inline bool is_feature(Label label) noexcept { return label != Label::O; }

// CoNLL-U columns the toolkit carries but does not interpret. Empty means "_".
struct SyntaxColumns {
  std::string xpos;
  std::string feats;
  std::string head;
  std::string deprel;
  std::string deps;
  std::vector<std::string> misc;  // MISC entries other than ner=

  bool operator==(const SyntaxColumns&) const = default;
};

struct Token {
  std::string surface;
  std::string lemma;  // empty when the source had none; matching falls back to surface
  std::string pos;
  Label label = Label::O;
  SyntaxColumns syntax;

  bool operator==(const Token&) const = default;
};

using Sentence = std::vector<Token>;

// Which token field drives phrase matching.
enum class MatchOn : std::uint8_t { Lemma, Surface };

// Normalized comparison key of a token under the given matching mode.
std::string token_key(const Token& token, MatchOn match_on = MatchOn::Lemma);

struct Review {
  std::string review_id;
  std::string app_id;
  std::string category;
  std::vector<Sentence> sentences;

  std::size_t token_count() const noexcept;
  bool operator==(const Review&) const = default;
};

// A contiguous B I* run inside one sentence; end is inclusive.
struct Span {
  std::size_t sentence = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start + 1; }
  auto operator<=>(const Span&) const = default;
};

// Maximal feature spans of a review in positional order. Throws
// ValidationError on an I-feature that does not follow B-feature/I-feature.
std::vector<Span> extract_spans(const Review& review);

// Same as extract_spans, but an orphan I-feature opens a new span instead of
// failing. repairs is incremented once per orphan.
std::vector<Span> extract_spans_repaired(const Review& review, std::size_t& repairs);

// Human-readable BIO violations ("review r1 sentence 0 token 3: ..."), empty when well formed.
std::vector<std::string> bio_violations(const Review& review);

// Normalized key sequence of the tokens covered by a span.
std::vector<std::string> span_keys(const Review& review, const Span& span,
                                   MatchOn match_on = MatchOn::Lemma);

// Reviews plus the set of categories they belong to. Construction enforces
// unique review ids, at least one non-empty sentence per review, and
// non-empty token surfaces.
class AnnotatedCorpus {
 public:
  AnnotatedCorpus() = default;
  explicit AnnotatedCorpus(std::vector<Review> reviews);

  const std::vector<Review>& reviews() const noexcept { return reviews_; }
  const std::set<std::string>& categories() const noexcept { return categories_; }
  std::size_t size() const noexcept { return reviews_.size(); }
  bool empty() const noexcept { return reviews_.empty(); }

  const Review* find(std::string_view review_id) const;

  bool operator==(const AnnotatedCorpus& other) const { return reviews_ == other.reviews_; }

 private:
  std::vector<Review> reviews_;
  std::set<std::string> categories_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct FeatureToken {
  std::string surface;
  std::string lemma;

  bool operator==(const FeatureToken&) const = default;
};

// One crowdsourced annotation: phrase f was voted as a feature of app_id.
struct Feature {
  std::string app_id;
  std::vector<FeatureToken> phrase;

  // Normalized per-token keys, same rules as token_key.
  std::vector<std::string> keys(MatchOn match_on = MatchOn::Lemma) const;
  // Space-joined normalized lemma keys; the identity of a distinct feature.
  std::string lemma_phrase() const;
  std::string surface_text() const;

  bool operator==(const Feature&) const = default;
};

// Feature annotations, deduplicated on (app_id, normalized lemma sequence).
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::vector<Feature> features);

  const std::vector<Feature>& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  // Number of input records dropped as duplicates.
  std::size_t duplicates_dropped() const noexcept { return duplicates_; }
  // Distinct lemma phrases across all apps, sorted.
  std::vector<std::string> distinct_phrases() const;

 private:
  std::vector<Feature> features_;
  std::size_t duplicates_ = 0;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace frex

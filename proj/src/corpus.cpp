#include "frex/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "frex/error.hpp"
#include "frex/normalize.hpp"

namespace frex {

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::B:
      return "B-feature";
    case Label::I:
      return "I-feature";
    case Label::O:
      break;
  }
  return "O";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "O") return Label::O;
  if (text == "B-feature") return Label::B;
  if (text == "I-feature") return Label::I;
  return std::nullopt;
}

std::string token_key(const Token& token, MatchOn match_on) {
  if (match_on == MatchOn::Surface || token.lemma.empty()) return normalize_key(token.surface);
  return normalize_key(token.lemma);
}

std::size_t Review::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

namespace {

std::vector<Span> scan_spans(const Review& review, std::size_t* repairs) {
  std::vector<Span> spans;
  for (std::size_t si = 0; si < review.sentences.size(); ++si) {
    const Sentence& sentence = review.sentences[si];
    bool open = false;
    for (std::size_t ti = 0; ti < sentence.size(); ++ti) {
      switch (sentence[ti].label) {
        case Label::B:
          spans.push_back({si, ti, ti});
          open = true;
          break;
        case Label::I:
          if (open) {
            spans.back().end = ti;
          } else if (repairs != nullptr) {
            ++*repairs;
            spans.push_back({si, ti, ti});
            open = true;
          } else {
            throw ValidationError(fmt::format(
                "review {}: orphan I-feature at sentence {} token {}", review.review_id, si, ti));
          }
          break;
        case Label::O:
          open = false;
          break;
      }
    }
  }
  return spans;
}

}  // namespace

std::vector<Span> extract_spans(const Review& review) { return scan_spans(review, nullptr); }

std::vector<Span> extract_spans_repaired(const Review& review, std::size_t& repairs) {
  return scan_spans(review, &repairs);
}

std::vector<std::string> bio_violations(const Review& review) {
  std::vector<std::string> out;
  for (std::size_t si = 0; si < review.sentences.size(); ++si) {
    Label prev = Label::O;
    const Sentence& sentence = review.sentences[si];
    for (std::size_t ti = 0; ti < sentence.size(); ++ti) {
      if (sentence[ti].label == Label::I && prev == Label::O) {
        out.push_back(fmt::format("review {} sentence {} token {}: I-feature without preceding B-feature",
                                  review.review_id, si, ti));
      }
      prev = sentence[ti].label;
    }
  }
  return out;
}

std::vector<std::string> span_keys(const Review& review, const Span& span, MatchOn match_on) {
  std::vector<std::string> keys;
  keys.reserve(span.length());
  const Sentence& sentence = review.sentences.at(span.sentence);
  for (std::size_t i = span.start; i <= span.end; ++i) keys.push_back(token_key(sentence.at(i), match_on));
  return keys;
}

AnnotatedCorpus::AnnotatedCorpus(std::vector<Review> reviews) : reviews_(std::move(reviews)) {
  index_.reserve(reviews_.size());
  for (std::size_t i = 0; i < reviews_.size(); ++i) {
    const Review& r = reviews_[i];
    if (r.review_id.empty()) throw ValidationError("review with empty review_id");
    if (!index_.emplace(r.review_id, i).second) {
      throw ValidationError(fmt::format("duplicate review_id {}", r.review_id));
    }
    if (r.sentences.empty()) throw ValidationError(fmt::format("review {} has no sentences", r.review_id));
    for (std::size_t si = 0; si < r.sentences.size(); ++si) {
      if (r.sentences[si].empty()) {
        throw ValidationError(fmt::format("review {} sentence {} is empty", r.review_id, si));
      }
      for (std::size_t ti = 0; ti < r.sentences[si].size(); ++ti) {
        if (r.sentences[si][ti].surface.empty()) {
          throw ValidationError(
              fmt::format("review {} sentence {} token {} has empty surface", r.review_id, si, ti));
        }
      }
    }
    categories_.insert(r.category);
  }
}

const Review* AnnotatedCorpus::find(std::string_view review_id) const {
  auto it = index_.find(std::string(review_id));
  return it == index_.end() ? nullptr : &reviews_[it->second];
}

std::vector<std::string> Feature::keys(MatchOn match_on) const {
  std::vector<std::string> out;
  out.reserve(phrase.size());
  for (const auto& t : phrase) {
    const std::string& text = (match_on == MatchOn::Surface || t.lemma.empty()) ? t.surface : t.lemma;
    out.push_back(normalize_key(text));
  }
  return out;
}

std::string Feature::lemma_phrase() const { return join(keys(MatchOn::Lemma), " "); }

std::string Feature::surface_text() const {
  std::string out;
  for (const auto& t : phrase) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

FeatureSet::FeatureSet(std::vector<Feature> features) {
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& f : features) {
    if (f.phrase.empty()) throw ValidationError(fmt::format("feature for app {} has an empty phrase", f.app_id));
    for (const auto& t : f.phrase) {
      if (t.surface.empty()) throw ValidationError(fmt::format("feature for app {} has an empty token", f.app_id));
    }
    if (!seen.emplace(f.app_id, f.lemma_phrase()).second) {
      ++duplicates_;
      continue;
    }
    features_.push_back(std::move(f));
  }
}

std::vector<std::string> FeatureSet::distinct_phrases() const {
  std::set<std::string> phrases;
  for (const auto& f : features_) phrases.insert(f.lemma_phrase());
  return {phrases.begin(), phrases.end()};
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace frex

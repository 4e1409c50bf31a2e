#include "frex/transfer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "frex/error.hpp"

namespace frex {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find('\t', pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

struct OrderedFeature {
  const Feature* feature;
  std::vector<std::string> keys;
  std::string lemma_phrase;
  std::string report_key;
};

}  // namespace

FeatureSet parse_features(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) header = split_tabs(line);
  }
  if (header.empty()) return FeatureSet{};

  auto column_of = [&](std::string_view name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto app_col = column_of("app_id");
  const auto phrase_col = column_of("feature_phrase");
  const auto lemma_col = column_of("feature_lemmas");
  if (app_col < 0 || phrase_col < 0) {
    throw ParseError("feature table header must name app_id and feature_phrase", line_no);
  }

  std::vector<Feature> features;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("expected {} columns, found {}", header.size(), fields.size()), line_no);
    }
    Feature f;
    f.app_id = fields[static_cast<std::size_t>(app_col)];
    if (f.app_id.empty()) throw ParseError("empty app_id", line_no);
    const auto surfaces = split_words(fields[static_cast<std::size_t>(phrase_col)]);
    if (surfaces.empty()) throw ParseError("empty feature_phrase", line_no);
    std::vector<std::string> lemmas;
    if (lemma_col >= 0) {
      const std::string& raw = fields[static_cast<std::size_t>(lemma_col)];
      if (!raw.empty() && raw != "_") {
        lemmas = split_words(raw);
        if (lemmas.size() != surfaces.size()) {
          throw ParseError(fmt::format("feature_lemmas has {} tokens but feature_phrase has {}", lemmas.size(),
                                       surfaces.size()),
                           line_no);
        }
      }
    }
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
      f.phrase.push_back({surfaces[i], lemmas.empty() ? std::string() : lemmas[i]});
    }
    features.push_back(std::move(f));
  }
  return FeatureSet(std::move(features));
}

FeatureSet parse_features(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_features(in);
}

FeatureSet read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  return parse_features(in);
}

std::vector<std::size_t> find_matches(const std::vector<std::string>& sentence,
                                      const std::vector<std::string>& phrase) {
  std::vector<std::size_t> starts;
  if (phrase.empty() || phrase.size() > sentence.size()) return starts;
  std::size_t i = 0;
  while (i + phrase.size() <= sentence.size()) {
    if (std::equal(phrase.begin(), phrase.end(), sentence.begin() + static_cast<std::ptrdiff_t>(i))) {
      starts.push_back(i);
      i += phrase.size();
    } else {
      ++i;
    }
  }
  return starts;
}

std::vector<std::size_t> find_matches(const Sentence& sentence, const Feature& feature, MatchOn match_on) {
  std::vector<std::string> keys;
  keys.reserve(sentence.size());
  for (const auto& t : sentence) keys.push_back(token_key(t, match_on));
  return find_matches(keys, feature.keys(match_on));
}

TransferResult transfer_annotations(const AnnotatedCorpus& corpus, const FeatureSet& features,
                                    const TransferConfig& config) {
  if (features.empty()) throw ValidationError("feature set is empty");
  for (const Review& r : corpus.reviews()) {
    for (std::size_t si = 0; si < r.sentences.size(); ++si) {
      for (std::size_t ti = 0; ti < r.sentences[si].size(); ++ti) {
        if (r.sentences[si][ti].label != Label::O) {
          throw ValidationError(fmt::format("review {} sentence {} token {} is already labeled {}; transfer expects "
                                            "an unlabeled corpus",
                                            r.review_id, si, ti, to_string(r.sentences[si][ti].label)));
        }
      }
    }
  }

  std::vector<OrderedFeature> ordered;
  ordered.reserve(features.size());
  for (const Feature& f : features.features()) {
    OrderedFeature of{&f, f.keys(config.match_on), f.lemma_phrase(), {}};
    of.report_key = f.app_id + '\t' + of.lemma_phrase;
    ordered.push_back(std::move(of));
  }
  std::sort(ordered.begin(), ordered.end(), [](const OrderedFeature& a, const OrderedFeature& b) {
    if (a.keys.size() != b.keys.size()) return a.keys.size() > b.keys.size();
    if (a.lemma_phrase != b.lemma_phrase) return a.lemma_phrase < b.lemma_phrase;
    return a.feature->app_id < b.feature->app_id;
  });
  std::unordered_map<std::string, std::vector<const OrderedFeature*>> by_app;
  for (const auto& of : ordered) by_app[of.feature->app_id].push_back(&of);

  TransferReport report;
  for (const auto& of : ordered) report.per_feature_counts.emplace(of.report_key, 0);

  std::vector<Review> out = corpus.reviews();
  for (Review& review : out) {
    const auto app = by_app.find(review.app_id);
    if (app == by_app.end()) continue;

    std::vector<std::vector<std::string>> keys(review.sentences.size());
    for (std::size_t si = 0; si < review.sentences.size(); ++si) {
      for (const Token& t : review.sentences[si]) keys[si].push_back(token_key(t, config.match_on));
    }

    std::size_t made_here = 0;
    for (const OrderedFeature* of : app->second) {
      const std::size_t len = of->keys.size();
      for (std::size_t si = 0; si < review.sentences.size(); ++si) {
        auto starts = find_matches(keys[si], of->keys);
        if (starts.empty()) continue;
        if (config.occurrence == OccurrenceMode::First) starts.resize(1);

        Sentence& sentence = review.sentences[si];
        for (std::size_t start : starts) {
          const bool conflict = std::any_of(sentence.begin() + static_cast<std::ptrdiff_t>(start),
                                            sentence.begin() + static_cast<std::ptrdiff_t>(start + len),
                                            [](const Token& t) { return t.label != Label::O; });
          if (conflict && config.overwrite == OverwriteMode::SkipConflicts) {
            ++report.conflicts_skipped;
            continue;
          }
          sentence[start].label = Label::B;
          for (std::size_t i = start + 1; i < start + len; ++i) sentence[i].label = Label::I;
          ++report.per_feature_counts[of->report_key];
          ++report.annotations_made;
          ++made_here;
        }
        if (config.occurrence == OccurrenceMode::First) break;
      }
    }
    if (made_here > 0) ++report.reviews_touched;
  }

  return {AnnotatedCorpus(std::move(out)), std::move(report)};
}

}  // namespace frex

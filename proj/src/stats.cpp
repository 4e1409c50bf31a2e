#include "frex/stats.hpp"

#include <ostream>
#include <unordered_set>

namespace frex {

CorpusStats compute_stats(const AnnotatedCorpus& corpus, const FeatureSet& features) {
  const auto known = features.distinct_phrases();
  const std::set<std::string> allowed(known.begin(), known.end());

  CorpusStats stats;
  std::map<std::string, std::set<std::string>> apps_by_category;
  std::map<std::string, std::set<std::string>> phrases_by_category;
  std::map<std::string, std::set<std::string>> categories_by_app;
  std::set<std::string> all_phrases;

  for (const Review& review : corpus.reviews()) {
    CategoryStats& c = stats.per_category[review.category];
    apps_by_category[review.category].insert(review.app_id);
    categories_by_app[review.app_id].insert(review.category);
    ++c.reviews;
    c.sentences += review.sentences.size();
    for (const Sentence& s : review.sentences) {
      c.tokens += s.size();
      for (const Token& t : s) {
        switch (t.label) {
          case Label::B:
            ++c.b_feature;
            break;
          case Label::I:
            ++c.i_feature;
            break;
          case Label::O:
            ++c.o;
            break;
        }
      }
    }
    for (const Span& span : extract_spans(review)) {
      std::string phrase = join(span_keys(review, span), " ");
      if (!allowed.empty() && !allowed.contains(phrase)) continue;
      phrases_by_category[review.category].insert(phrase);
      all_phrases.insert(std::move(phrase));
    }
  }

  for (auto& [category, c] : stats.per_category) {
    c.apps = apps_by_category[category].size();
    c.features = c.b_feature;
    c.distinct_features = phrases_by_category[category].size();
    stats.total.reviews += c.reviews;
    stats.total.sentences += c.sentences;
    stats.total.tokens += c.tokens;
    stats.total.b_feature += c.b_feature;
    stats.total.i_feature += c.i_feature;
    stats.total.o += c.o;
  }
  stats.total.apps = categories_by_app.size();
  stats.total.features = stats.total.b_feature;
  stats.total.distinct_features = all_phrases.size();
  for (const auto& [app, categories] : categories_by_app) {
    if (categories.size() > 1) stats.apps_additive = false;
  }
  return stats;
}

void write_stats_tsv(const CorpusStats& stats, std::ostream& out) {
  out << "metric";
  for (const auto& [category, c] : stats.per_category) out << '\t' << category;
  out << "\tTotal\n";
  const auto row = [&](const char* name, std::size_t CategoryStats::*field) {
    out << name;
    for (const auto& [category, c] : stats.per_category) out << '\t' << c.*field;
    out << '\t' << stats.total.*field << '\n';
  };
  row("apps", &CategoryStats::apps);
  row("reviews", &CategoryStats::reviews);
  row("sentences", &CategoryStats::sentences);
  row("tokens", &CategoryStats::tokens);
  row("B-feature", &CategoryStats::b_feature);
  row("I-feature", &CategoryStats::i_feature);
  row("O", &CategoryStats::o);
  row("features", &CategoryStats::features);
  row("distinct_features", &CategoryStats::distinct_features);
}

}  // namespace frex

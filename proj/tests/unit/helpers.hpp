#pragma once

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frex/corpus.hpp"

namespace frex::test {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(FREX_TEST_DATA) / name; }

inline Label label_of(char c) {
  switch (c) {
    case 'B':
      return Label::B;
    case 'I':
      return Label::I;
    default:
      return Label::O;
  }
}

// Sentence from space-separated words; lemma = lowercased word. labels is a
// string like "BIIOOOO", one char per word (missing chars mean O).
inline Sentence sentence(const std::string& words, const std::string& labels = "") {
  std::istringstream in(words);
  std::string w;
  Sentence s;
  while (in >> w) {
    Token t;
    t.surface = w;
    t.lemma = w;
    for (char& c : t.lemma) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    t.label = s.size() < labels.size() ? label_of(labels[s.size()]) : Label::O;
    s.push_back(std::move(t));
  }
  return s;
}

inline Review review(std::string id, std::string app, std::string category, std::vector<Sentence> sentences) {
  return Review{std::move(id), std::move(app), std::move(category), std::move(sentences)};
}

inline Feature feature(std::string app, const std::string& words) {
  Feature f;
  f.app_id = std::move(app);
  std::istringstream in(words);
  std::string w;
  while (in >> w) f.phrase.push_back({w, ""});
  return f;
}

inline std::vector<Label> labels(const Review& r) {
  std::vector<Label> out;
  for (const auto& s : r.sentences) {
    for (const auto& t : s) out.push_back(t.label);
  }
  return out;
}

inline std::vector<Label> parse_labels(const std::string& s) {
  std::vector<Label> out;
  for (char c : s) out.push_back(label_of(c));
  return out;
}

// Random well-formed BIO labels over n tokens.
inline std::string random_bio(std::mt19937_64& rng, std::size_t n) {
  std::string out;
  std::uniform_int_distribution<int> pick(0, 2);
  for (std::size_t i = 0; i < n; ++i) {
    int v = pick(rng);
    if (v == 2 && (out.empty() || out.back() == 'O')) v = 0;
    out += "OBI"[v];
  }
  return out;
}

}  // namespace frex::test

#include "frex/embedding.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "frex/error.hpp"

namespace frex {

using nlohmann::json;

void EmbeddingStore::add(std::string review_id, Vector vector) {
  if (vector.empty()) throw ValidationError(fmt::format("embedding for {} is empty", review_id));
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw ValidationError(
        fmt::format("embedding for {} has dimension {}, expected {}", review_id, vector.size(), dim_));
  }
  for (std::size_t i = 0; i < vector.size(); ++i) {
    if (!std::isfinite(vector[i])) {
      throw ValidationError(fmt::format("embedding for {} has a non-finite component at {}", review_id, i));
    }
  }
  if (vectors_.contains(review_id)) throw ValidationError(fmt::format("duplicate embedding for {}", review_id));
  vectors_.emplace(std::move(review_id), std::move(vector));
}

bool EmbeddingStore::contains(std::string_view review_id) const { return vectors_.find(review_id) != vectors_.end(); }

const Vector* EmbeddingStore::find(std::string_view review_id) const {
  const auto it = vectors_.find(review_id);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingStore load_embeddings(std::istream& in) {
  EmbeddingStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!record.is_object() || !record.contains("review_id") || !record.contains("vector")) {
      throw ParseError("record must be an object with review_id and vector", line_no);
    }
    const json& id = record["review_id"];
    const json& values = record["vector"];
    if (!id.is_string()) throw ParseError("review_id must be a string", line_no);
    if (!values.is_array()) throw ParseError("vector must be an array", line_no);
    Vector v;
    v.reserve(values.size());
    for (const json& x : values) {
      if (!x.is_number()) throw ParseError("vector components must be numbers", line_no);
      v.push_back(x.get<double>());
    }
    try {
      store.add(id.get<std::string>(), std::move(v));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return store;
}

EmbeddingStore load_embeddings(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_embeddings(in);
}

EmbeddingStore read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  return load_embeddings(in);
}

void save_embeddings(const EmbeddingStore& store, std::ostream& out) {
  for (const auto& [id, v] : store.vectors()) {
    json record = {{"review_id", id}, {"vector", v}};
    out << record.dump() << '\n';
  }
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Vector mock_embed(const Review& review, std::size_t dim) {
  if (dim == 0) throw ValidationError("mock embedding dimension must be positive");
  Vector v(dim, 0.0);
  for (const Sentence& s : review.sentences) {
    for (const Token& t : s) v[fnv1a64(token_key(t)) % dim] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

EmbeddingStore mock_embed_corpus(const AnnotatedCorpus& corpus, std::size_t dim) {
  EmbeddingStore store(dim);
  for (const Review& r : corpus.reviews()) store.add(r.review_id, mock_embed(r, dim));
  return store;
}

namespace {

template <typename Get>
Vector mean_of(std::size_t n, Get get) {
  if (n == 0) throw ValidationError("centroid of an empty set");
  const std::size_t dim = get(0).size();
  Vector c(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& v = get(i);
    if (v.size() != dim) throw ValidationError("centroid over vectors of different dimension");
    for (std::size_t j = 0; j < dim; ++j) c[j] += v[j];
  }
  for (double& x : c) x /= static_cast<double>(n);
  return c;
}

}  // namespace

Vector centroid(std::span<const Vector> vectors) {
  return mean_of(vectors.size(), [&](std::size_t i) -> const Vector& { return vectors[i]; });
}

Vector centroid(std::span<const Vector* const> vectors) {
  return mean_of(vectors.size(), [&](std::size_t i) -> const Vector& { return *vectors[i]; });
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError(fmt::format("distance between vectors of dimension {} and {}", a.size(), b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace frex

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frex/corpus.hpp"

namespace frex {

using Vector = std::vector<double>;

// review_id -> fixed-dimension embedding. Every vector has length dim() and
// only finite components.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

  // Throws ValidationError on dimension mismatch, duplicate id or non-finite value.
  void add(std::string review_id, Vector vector);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  bool contains(std::string_view review_id) const;
  // nullptr when absent.
  const Vector* find(std::string_view review_id) const;
  const std::map<std::string, Vector, std::less<>>& vectors() const noexcept { return vectors_; }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, Vector, std::less<>> vectors_;
};

// JSON Lines, one {"review_id": ..., "vector": [...]} object per line. The
// dimension is inferred from the first record.
EmbeddingStore load_embeddings(std::istream& in);
EmbeddingStore load_embeddings(std::string_view text);
EmbeddingStore read_embeddings(const std::filesystem::path& path);

// Writes records in review_id order with shortest round-trip decimal formatting.
void save_embeddings(const EmbeddingStore& store, std::ostream& out);

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// Hashed bag of normalized lemmas (surface when the lemma is missing), each
// key sent to bucket fnv1a64(key) % dim, counted and L2-normalized.
Vector mock_embed(const Review& review, std::size_t dim);

EmbeddingStore mock_embed_corpus(const AnnotatedCorpus& corpus, std::size_t dim);

Vector centroid(std::span<const Vector> vectors);
Vector centroid(std::span<const Vector* const> vectors);

double euclidean(std::span<const double> a, std::span<const double> b);

}  // namespace frex

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "frex/corpus.hpp"

namespace frex {

// xoshiro256** seeded by four successive splitmix64 outputs of the seed.
// Fully specified so fold membership can be reproduced in other languages.
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  // Uniform-ish integer in [0, bound): high 64 bits of next() * bound.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

// Fisher-Yates from the back: for i = n-1 .. 1, swap items[i] with items[rng.below(i + 1)].
template <typename T>
void seeded_shuffle(std::vector<T>& items, Xoshiro256ss& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

enum class SplitMode { InDomain, OutOfDomain };

std::string_view to_string(SplitMode mode) noexcept;

struct Fold {
  std::string name;
  std::vector<std::string> test;  // sorted review ids
};

struct FoldPlan {
  SplitMode mode = SplitMode::InDomain;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
  std::vector<std::string> warnings;

  // corpus minus the fold's test set, in corpus order.
  std::vector<std::string> train_ids(const AnnotatedCorpus& corpus, std::size_t fold) const;
};

constexpr std::size_t kDefaultFolds = 10;
constexpr std::uint64_t kDefaultSeed = 42;

// Stratified k-fold: each category's reviews (ordered by id) are shuffled
// with the seeded generator, then all categories in lexicographic order are
// dealt round-robin into k folds with a running fold cursor.
FoldPlan split_in_domain(const AnnotatedCorpus& corpus, std::size_t k = kDefaultFolds,
                         std::uint64_t seed = kDefaultSeed);

// Leave-one-category-out: one fold per category, lexicographic order.
FoldPlan split_out_of_domain(const AnnotatedCorpus& corpus);

// {mode, k, seed, folds: [{name, test: [ids]}]}
void write_fold_plan(const FoldPlan& plan, std::ostream& out);
FoldPlan read_fold_plan(std::istream& in);

}  // namespace frex

#include "frex/splitter.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <unordered_set>

#include "frex/error.hpp"

namespace frex {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

std::map<std::string, std::vector<std::string>> ids_by_category(const AnnotatedCorpus& corpus) {
  std::map<std::string, std::vector<std::string>> strata;
  for (const Review& r : corpus.reviews()) strata[r.category].push_back(r.review_id);
  for (auto& [category, ids] : strata) std::sort(ids.begin(), ids.end());
  return strata;
}

}  // namespace

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) noexcept {
  for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Xoshiro256ss::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Xoshiro256ss::below(std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
}

std::string_view to_string(SplitMode mode) noexcept {
  return mode == SplitMode::InDomain ? "in-domain" : "out-of-domain";
}

std::vector<std::string> FoldPlan::train_ids(const AnnotatedCorpus& corpus, std::size_t fold) const {
  const auto& test = folds.at(fold).test;
  const std::unordered_set<std::string> held(test.begin(), test.end());
  std::vector<std::string> train;
  for (const Review& r : corpus.reviews()) {
    if (!held.contains(r.review_id)) train.push_back(r.review_id);
  }
  return train;
}

FoldPlan split_in_domain(const AnnotatedCorpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError(fmt::format("in-domain split needs k >= 2, got {}", k));

  FoldPlan plan;
  plan.mode = SplitMode::InDomain;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(k);
  for (std::size_t i = 0; i < k; ++i) plan.folds[i].name = fmt::format("fold-{:02}", i);

  Xoshiro256ss rng(seed);
  std::size_t cursor = 0;
  for (auto& [category, ids] : ids_by_category(corpus)) {
    if (ids.size() < k) {
      plan.warnings.push_back(fmt::format("category {} has {} reviews, fewer than k = {}; some folds will not contain it",
                                          category, ids.size(), k));
    }
    seeded_shuffle(ids, rng);
    for (auto& id : ids) {
      plan.folds[cursor].test.push_back(std::move(id));
      cursor = (cursor + 1) % k;
    }
  }
  for (auto& fold : plan.folds) std::sort(fold.test.begin(), fold.test.end());
  return plan;
}

FoldPlan split_out_of_domain(const AnnotatedCorpus& corpus) {
  auto strata = ids_by_category(corpus);
  if (strata.size() < 2) {
    throw ValidationError(fmt::format("out-of-domain split needs at least 2 categories, found {}", strata.size()));
  }
  FoldPlan plan;
  plan.mode = SplitMode::OutOfDomain;
  plan.k = strata.size();
  for (auto& [category, ids] : strata) plan.folds.push_back({category, std::move(ids)});
  return plan;
}

void write_fold_plan(const FoldPlan& plan, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["mode"] = to_string(plan.mode);
  doc["k"] = plan.k;
  doc["seed"] = plan.seed;
  doc["folds"] = nlohmann::ordered_json::array();
  for (const Fold& f : plan.folds) doc["folds"].push_back({{"name", f.name}, {"test", f.test}});
  if (!plan.warnings.empty()) doc["warnings"] = plan.warnings;
  out << doc.dump(2) << '\n';
}

FoldPlan read_fold_plan(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
    FoldPlan plan;
    const auto mode = doc.at("mode").get<std::string>();
    if (mode == "in-domain") {
      plan.mode = SplitMode::InDomain;
    } else if (mode == "out-of-domain") {
      plan.mode = SplitMode::OutOfDomain;
    } else {
      throw ParseError(fmt::format("unknown fold plan mode '{}'", mode), 0);
    }
    plan.k = doc.at("k").get<std::size_t>();
    plan.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& f : doc.at("folds")) {
      plan.folds.push_back({f.at("name").get<std::string>(), f.at("test").get<std::vector<std::string>>()});
    }
    if (plan.folds.size() != plan.k) throw ParseError("fold plan k does not match the number of folds", 0);
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("invalid fold plan: {}", e.what()), 0);
  }
}

}  // namespace frex

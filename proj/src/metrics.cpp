#include "frex/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <unordered_set>

#include "frex/error.hpp"

namespace frex {
namespace {

// Walks gold reviews and their aligned prediction; throws on the first divergence.
template <typename Visit>
void for_each_aligned(const AnnotatedCorpus& gold, const AnnotatedCorpus& pred, Visit visit) {
  if (gold.size() != pred.size()) {
    throw ValidationError(fmt::format("gold has {} reviews, prediction has {}", gold.size(), pred.size()));
  }
  for (const Review& g : gold.reviews()) {
    const Review* p = pred.find(g.review_id);
    if (p == nullptr) throw ValidationError(fmt::format("review {} missing from prediction", g.review_id));
    if (g.sentences.size() != p->sentences.size()) {
      throw ValidationError(fmt::format("review {}: gold has {} sentences, prediction has {}", g.review_id,
                                        g.sentences.size(), p->sentences.size()));
    }
    for (std::size_t si = 0; si < g.sentences.size(); ++si) {
      if (g.sentences[si].size() != p->sentences[si].size()) {
        throw ValidationError(fmt::format("review {} sentence {}: gold has {} tokens, prediction has {}",
                                          g.review_id, si, g.sentences[si].size(), p->sentences[si].size()));
      }
    }
    visit(g, *p);
  }
}

}  // namespace

std::string_view to_string(Level level) noexcept { return level == Level::Token ? "token" : "span"; }

double compute_beta(const TimingSample& timing) {
  const double at = timing.manual_extraction_seconds;
  const double small_t = timing.validity_check_seconds;
  if (!(at > 0.0) || !(small_t > 0.0) || !std::isfinite(at) || !std::isfinite(small_t)) {
    throw ValidationError(fmt::format("timings must be positive, got A_T = {} and A_t = {}", at, small_t));
  }
  return at / small_t;
}

double f_beta(double p, double r, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * p * r / denom;
}

MetricReport report_from_counts(Level level, const ConfusionCounts& counts, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError(fmt::format("beta must be positive, got {}", beta));
  MetricReport rep;
  rep.level = level;
  rep.counts = counts;
  rep.beta = beta;
  const auto predicted = counts.tp + counts.fp;
  const auto relevant = counts.tp + counts.fn;
  rep.p_undefined = predicted == 0;
  rep.r_undefined = relevant == 0;
  rep.p = rep.p_undefined ? 0.0 : static_cast<double>(counts.tp) / static_cast<double>(predicted);
  rep.r = rep.r_undefined ? 0.0 : static_cast<double>(counts.tp) / static_cast<double>(relevant);
  rep.f1 = f_beta(rep.p, rep.r, 1.0);
  rep.f_beta = f_beta(rep.p, rep.r, beta);
  return rep;
}

MetricReport score_tokens(const AnnotatedCorpus& gold, const AnnotatedCorpus& pred, double beta) {
  ConfusionCounts c;
  for_each_aligned(gold, pred, [&](const Review& g, const Review& p) {
    for (std::size_t si = 0; si < g.sentences.size(); ++si) {
      for (std::size_t ti = 0; ti < g.sentences[si].size(); ++ti) {
        const Label gl = g.sentences[si][ti].label;
        const Label pl = p.sentences[si][ti].label;
        if (is_feature(pl)) {
          (pl == gl ? c.tp : c.fp) += 1;
        } else if (is_feature(gl)) {
          c.fn += 1;
        }
      }
    }
  });
  return report_from_counts(Level::Token, c, beta);
}

MetricReport score_spans(const AnnotatedCorpus& gold, const AnnotatedCorpus& pred, double beta) {
  ConfusionCounts c;
  std::size_t repairs = 0;
  for_each_aligned(gold, pred, [&](const Review& g, const Review& p) {
    const auto gs = extract_spans(g);
    const auto ps = extract_spans_repaired(p, repairs);
    // both lists are sorted by position
    std::vector<Span> common;
    std::set_intersection(gs.begin(), gs.end(), ps.begin(), ps.end(), std::back_inserter(common));
    c.tp += common.size();
    c.fp += ps.size() - common.size();
    c.fn += gs.size() - common.size();
  });
  MetricReport rep = report_from_counts(Level::Span, c, beta);
  rep.repairs = repairs;
  return rep;
}

MetricReport score(Level level, const AnnotatedCorpus& gold, const AnnotatedCorpus& pred, double beta) {
  return level == Level::Token ? score_tokens(gold, pred, beta) : score_spans(gold, pred, beta);
}

MetricReport score_subset(Level level, const AnnotatedCorpus& gold, const AnnotatedCorpus& pred,
                          std::span<const std::string> review_ids, double beta) {
  std::vector<Review> g;
  std::vector<Review> p;
  g.reserve(review_ids.size());
  p.reserve(review_ids.size());
  for (const auto& id : review_ids) {
    const Review* gr = gold.find(id);
    if (gr == nullptr) throw ValidationError(fmt::format("review {} missing from gold", id));
    const Review* pr = pred.find(id);
    if (pr == nullptr) throw ValidationError(fmt::format("review {} missing from prediction", id));
    g.push_back(*gr);
    p.push_back(*pr);
  }
  return score(level, AnnotatedCorpus(std::move(g)), AnnotatedCorpus(std::move(p)), beta);
}

FoldSummary aggregate_folds(std::span<const MetricReport> reports) {
  if (reports.empty()) throw ValidationError("no fold reports to aggregate");
  FoldSummary s;
  s.level = reports.front().level;
  s.beta = reports.front().beta;
  s.folds = reports.size();
  ConfusionCounts pooled;
  std::size_t repairs = 0;
  for (const MetricReport& rep : reports) {
    if (rep.level != s.level) throw ValidationError("cannot aggregate token-level and span-level reports");
    if (rep.beta != s.beta) throw ValidationError("cannot aggregate reports computed with different beta");
    s.p += rep.p;
    s.r += rep.r;
    s.f1 += rep.f1;
    s.f_beta += rep.f_beta;
    pooled += rep.counts;
    repairs += rep.repairs;
  }
  const auto n = static_cast<double>(reports.size());
  s.p /= n;
  s.r /= n;
  s.f1 /= n;
  s.f_beta /= n;
  s.f_beta_of_means = f_beta(s.p, s.r, s.beta);
  s.micro = report_from_counts(s.level, pooled, s.beta);
  s.micro.repairs = repairs;
  return s;
}

std::string format_report_text(const MetricReport& rep) {
  std::string out;
  out += fmt::format("{:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}\n", "level", "tp", "fp", "fn", "p", "r", "f1",
                     "f_beta");
  out += fmt::format("{:<8} {:>8} {:>8} {:>8} {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f}\n", to_string(rep.level),
                     rep.counts.tp, rep.counts.fp, rep.counts.fn, rep.p, rep.r, rep.f1, rep.f_beta);
  out += fmt::format("beta = {:.3f}", rep.beta);
  if (rep.p_undefined) out += ", p undefined (reported as 0)";
  if (rep.r_undefined) out += ", r undefined (reported as 0)";
  if (rep.repairs > 0) out += fmt::format(", {} orphan I-feature repairs", rep.repairs);
  out += '\n';
  return out;
}

std::string format_summary_text(const FoldSummary& s) {
  std::string out;
  out += fmt::format("{:<14} {:>8} {:>8} {:>8} {:>8}\n", "aggregate", "p", "r", "f1", "f_beta");
  out += fmt::format("{:<14} {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f}\n", "mean-of-folds", s.p, s.r, s.f1, s.f_beta);
  out += fmt::format("{:<14} {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f}\n", "micro", s.micro.p, s.micro.r, s.micro.f1,
                     s.micro.f_beta);
  out += fmt::format("{} folds, level {}, beta = {:.3f}, f_beta(mean p, mean r) = {:.3f}\n", s.folds,
                     to_string(s.level), s.beta, s.f_beta_of_means);
  return out;
}

}  // namespace frex

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frex/corpus.hpp"

namespace frex {

// Recall weight used when no timing study is supplied: 28.29 s / 11.86 s.
constexpr double kDefaultBeta = 2.385;

enum class Level { Token, Span };

std::string_view to_string(Level level) noexcept;

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

// Precision/recall family for one scoring run. Accuracy is deliberately
// absent: unannotated tokens are O by default, so true negatives are unknown.
struct MetricReport {
  Level level = Level::Token;
  ConfusionCounts counts;
  double p = 0.0;
  double r = 0.0;
  double f1 = 0.0;
  double f_beta = 0.0;
  double beta = kDefaultBeta;
  bool p_undefined = false;  // tp + fp == 0, p reported as 0
  bool r_undefined = false;  // tp + fn == 0, r reported as 0
  std::size_t repairs = 0;   // orphan I-feature tokens re-read as B-feature (span level only)
};

// Mean manual-extraction time per feature (A_T) and mean validity-check time (A_t), seconds.
struct TimingSample {
  double manual_extraction_seconds = 0.0;
  double validity_check_seconds = 0.0;
};

double compute_beta(const TimingSample& timing);

// (1 + b^2) p r / (b^2 p + r); 0 when p = r = 0.
double f_beta(double p, double r, double beta);

MetricReport report_from_counts(Level level, const ConfusionCounts& counts, double beta);

// Per-token confusion: pred B/I equal to gold is TP, pred B/I different from
// gold is FP, pred O on gold B/I is FN. Reviews are aligned by review_id.
MetricReport score_tokens(const AnnotatedCorpus& gold, const AnnotatedCorpus& pred, double beta = kDefaultBeta);

// Exact (sentence, start, end) span matching. Gold must be BIO well formed;
// prediction orphans are repaired and counted.
MetricReport score_spans(const AnnotatedCorpus& gold, const AnnotatedCorpus& pred, double beta = kDefaultBeta);

MetricReport score(Level level, const AnnotatedCorpus& gold, const AnnotatedCorpus& pred, double beta);

// Restricts both corpora to the given review ids before scoring.
MetricReport score_subset(Level level, const AnnotatedCorpus& gold, const AnnotatedCorpus& pred,
                          std::span<const std::string> review_ids, double beta);

// Macro average across folds plus the pooled ("micro") view.
struct FoldSummary {
  Level level = Level::Token;
  double beta = kDefaultBeta;
  std::size_t folds = 0;
  double p = 0.0;
  double r = 0.0;
  double f1 = 0.0;
  double f_beta = 0.0;
  // f_beta evaluated at the mean p and mean r; differs from the mean f_beta in general.
  double f_beta_of_means = 0.0;
  MetricReport micro;
};

FoldSummary aggregate_folds(std::span<const MetricReport> reports);

// Aligned-column plaintext rendering.
std::string format_report_text(const MetricReport& report);
std::string format_summary_text(const FoldSummary& summary);

}  // namespace frex

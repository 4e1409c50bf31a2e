#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace frex {

enum class Answer { Yes, No, Idk };

std::string_view to_string(Answer answer) noexcept;
std::optional<Answer> parse_answer(std::string_view text) noexcept;

struct AnnotationRecord {
  std::string task_id;
  std::string annotator_id;
  std::string review_id;
  std::string feature_phrase;
  Answer answer = Answer::Idk;
  bool is_control = false;
  bool control_correct = false;  // meaningful only when is_control
  std::string category;          // optional; may be resolved from a corpus instead
};

// Columns: task_id annotator_id review_id feature_phrase answer is_control
// control_correct, plus an optional category column. Header row required.
std::vector<AnnotationRecord> parse_annotation_records(std::istream& in);
std::vector<AnnotationRecord> read_annotation_records(const std::filesystem::path& path);

struct ControlPolicy {
  std::size_t controls_per_task = 5;
  std::size_t min_correct = 4;

  void validate() const;
};

// Validity-assessment questionnaires: 4 of 5 controls right.
inline constexpr ControlPolicy kAssessmentPolicy{5, 4};
// Manual-extraction questionnaires: 2 of 3 controls right.
inline constexpr ControlPolicy kManualExtractionPolicy{3, 2};

constexpr std::size_t kMinAnnotators = 5;

// (task_id, annotator_id)
using Assignment = std::pair<std::string, std::string>;

struct Rejection {
  Assignment who;
  std::size_t correct = 0;
  std::size_t required = 0;
};

struct FilterResult {
  std::set<Assignment> valid;
  std::vector<Rejection> rejected;
};

// An assignment passes when at least min_correct of its control answers are
// correct. Throws ValidationError listing every assignment whose number of
// control records differs from controls_per_task.
FilterResult filter_annotators(std::span<const AnnotationRecord> records, const ControlPolicy& policy);

struct VoteOutcome {
  std::optional<Answer> label;  // empty when fewer than min_annotators votes
  std::size_t yes = 0;
  std::size_t no = 0;
  std::size_t idk = 0;

  std::size_t votes() const noexcept { return yes + no + idk; }
};

// Plurality vote; a tie for first place resolves to Idk.
VoteOutcome vote(std::span<const Answer> answers, std::size_t min_annotators = kMinAnnotators);

struct VotedItem {
  std::string review_id;
  std::string feature_phrase;
  std::string category;
  Answer label = Answer::Idk;
};

// Percentages in [0, 100].
struct CategoryRates {
  std::string category;
  std::size_t n = 0;
  double yes = 0.0;
  double no = 0.0;
  double idk = 0.0;
};

struct EvalSummary {
  std::vector<CategoryRates> per_category;  // lexicographic unless built from explicit rows
  CategoryRates total;                      // category "Total", rates weighted by n
};

// Weighted totals sum(n_c * rate_c) / sum(n_c); rows with n = 0 contribute nothing.
EvalSummary weighted_summary(std::vector<CategoryRates> rows);

// Per-category rates over voted items, then weighted totals. Throws on no items.
EvalSummary summarize(std::span<const VotedItem> items);

struct Coverage {
  std::size_t items = 0;
  std::size_t voted = 0;
  std::vector<std::pair<std::string, std::string>> insufficient;  // (review_id, feature_phrase)
};

struct HumanEvalResult {
  FilterResult filter;
  std::vector<VotedItem> items;
  Coverage coverage;
  EvalSummary summary;
};

// Full aggregation: control filtering, voting on non-control records of
// valid assignments, then summary. Records without a category are looked up
// in review_categories.
HumanEvalResult evaluate_annotations(std::span<const AnnotationRecord> records, const ControlPolicy& policy,
                                     std::size_t min_annotators,
                                     const std::map<std::string, std::string>& review_categories = {});

// Table layout: one column per category plus Total; rows #items, % Yes, % No, % Idk.
std::string format_summary_table(const EvalSummary& summary);

}  // namespace frex

#include "frex/human_eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "frex/corpus.hpp"
#include "frex/error.hpp"

namespace frex {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<bool> parse_bool(std::string_view text) {
  const auto v = lower(text);
  if (v == "true" || v == "1" || v == "yes" || v == "y") return true;
  if (v == "false" || v == "0" || v == "no" || v == "n" || v.empty() || v == "_") return false;
  return std::nullopt;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

}  // namespace

std::string_view to_string(Answer answer) noexcept {
  switch (answer) {
    case Answer::Yes:
      return "Yes";
    case Answer::No:
      return "No";
    case Answer::Idk:
      break;
  }
  return "Idk";
}

std::optional<Answer> parse_answer(std::string_view text) noexcept {
  std::string v;
  for (char c : text) v += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "yes" || v == "y") return Answer::Yes;
  if (v == "no" || v == "n") return Answer::No;
  if (v == "idk" || v == "i don't know" || v == "dont know") return Answer::Idk;
  return std::nullopt;
}

std::vector<AnnotationRecord> parse_annotation_records(std::istream& in) {
  static constexpr std::string_view kRequired[] = {"task_id",        "annotator_id", "review_id",      "feature_phrase",
                                                   "answer",         "is_control",   "control_correct"};
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) header = split_tabs(line);
  }
  if (header.empty()) return {};

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (auto name : kRequired) {
    if (!col.contains(std::string(name))) throw ParseError(fmt::format("missing column {}", name), line_no);
  }
  const auto category_col = col.find("category");

  std::vector<AnnotationRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != header.size()) {
      throw ParseError(fmt::format("expected {} columns, found {}", header.size(), f.size()), line_no);
    }
    AnnotationRecord rec;
    rec.task_id = f[col["task_id"]];
    rec.annotator_id = f[col["annotator_id"]];
    rec.review_id = f[col["review_id"]];
    rec.feature_phrase = f[col["feature_phrase"]];
    const auto answer = parse_answer(f[col["answer"]]);
    if (!answer) throw ParseError(fmt::format("unknown answer '{}'", f[col["answer"]]), line_no);
    rec.answer = *answer;
    const auto is_control = parse_bool(f[col["is_control"]]);
    const auto correct = parse_bool(f[col["control_correct"]]);
    if (!is_control || !correct) throw ParseError("is_control and control_correct must be boolean", line_no);
    rec.is_control = *is_control;
    rec.control_correct = *correct;
    if (category_col != col.end()) rec.category = f[category_col->second];
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<AnnotationRecord> read_annotation_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  return parse_annotation_records(in);
}

void ControlPolicy::validate() const {
  if (min_correct > controls_per_task) {
    throw ValidationError(fmt::format("min_correct {} exceeds controls_per_task {}", min_correct, controls_per_task));
  }
}

FilterResult filter_annotators(std::span<const AnnotationRecord> records, const ControlPolicy& policy) {
  policy.validate();
  struct Tally {
    std::size_t controls = 0;
    std::size_t correct = 0;
  };
  std::map<Assignment, Tally> tallies;
  for (const auto& rec : records) {
    Tally& t = tallies[{rec.task_id, rec.annotator_id}];
    if (rec.is_control) {
      ++t.controls;
      if (rec.control_correct) ++t.correct;
    }
  }

  std::vector<std::string> problems;
  FilterResult result;
  for (const auto& [who, t] : tallies) {
    if (t.controls != policy.controls_per_task) {
      problems.push_back(fmt::format("task {} annotator {}: {} control records, expected {}", who.first, who.second,
                                     t.controls, policy.controls_per_task));
      continue;
    }
    if (t.correct >= policy.min_correct) {
      result.valid.insert(who);
    } else {
      result.rejected.push_back({who, t.correct, policy.min_correct});
    }
  }
  if (!problems.empty()) throw ValidationError(join(problems, "; "));
  return result;
}

VoteOutcome vote(std::span<const Answer> answers, std::size_t min_annotators) {
  VoteOutcome out;
  for (Answer a : answers) {
    switch (a) {
      case Answer::Yes:
        ++out.yes;
        break;
      case Answer::No:
        ++out.no;
        break;
      case Answer::Idk:
        ++out.idk;
        break;
    }
  }
  if (out.votes() < min_annotators || out.votes() == 0) return out;
  // A unique plurality wins; any tie at the top falls to Idk.
  const std::size_t top = std::max({out.yes, out.no, out.idk});
  const int leaders = (out.yes == top) + (out.no == top) + (out.idk == top);
  std::pair<Answer, std::size_t> best{Answer::Idk, out.idk};
  if (leaders == 1 && out.no == top) best = {Answer::No, out.no};
  if (leaders == 1 && out.yes == top) best = {Answer::Yes, out.yes};
  out.label = best.first;
  return out;
}

EvalSummary weighted_summary(std::vector<CategoryRates> rows) {
  EvalSummary s;
  s.total.category = "Total";
  double yes = 0.0;
  double no = 0.0;
  double idk = 0.0;
  for (const auto& row : rows) {
    const auto w = static_cast<double>(row.n);
    yes += w * row.yes;
    no += w * row.no;
    idk += w * row.idk;
    s.total.n += row.n;
  }
  if (s.total.n > 0) {
    const auto n = static_cast<double>(s.total.n);
    s.total.yes = yes / n;
    s.total.no = no / n;
    s.total.idk = idk / n;
  }
  s.per_category = std::move(rows);
  return s;
}

EvalSummary summarize(std::span<const VotedItem> items) {
  if (items.empty()) throw ValidationError("no voted items to summarize");
  struct Count {
    std::size_t yes = 0, no = 0, idk = 0;
  };
  std::map<std::string, Count> counts;
  for (const auto& item : items) {
    Count& c = counts[item.category];
    switch (item.label) {
      case Answer::Yes:
        ++c.yes;
        break;
      case Answer::No:
        ++c.no;
        break;
      case Answer::Idk:
        ++c.idk;
        break;
    }
  }
  std::vector<CategoryRates> rows;
  for (const auto& [category, c] : counts) {
    const std::size_t n = c.yes + c.no + c.idk;
    const auto pct = [n](std::size_t k) { return 100.0 * static_cast<double>(k) / static_cast<double>(n); };
    rows.push_back({category, n, pct(c.yes), pct(c.no), pct(c.idk)});
  }
  return weighted_summary(std::move(rows));
}

HumanEvalResult evaluate_annotations(std::span<const AnnotationRecord> records, const ControlPolicy& policy,
                                     std::size_t min_annotators,
                                     const std::map<std::string, std::string>& review_categories) {
  HumanEvalResult result;
  result.filter = filter_annotators(records, policy);

  using ItemKey = std::pair<std::string, std::string>;
  std::map<ItemKey, std::vector<Answer>> ballots;
  std::map<ItemKey, std::string> category_of;
  for (const auto& rec : records) {
    if (rec.is_control) continue;
    ItemKey key{rec.review_id, rec.feature_phrase};
    auto& ballot = ballots[key];
    if (!rec.category.empty()) category_of[key] = rec.category;
    if (result.filter.valid.contains({rec.task_id, rec.annotator_id})) ballot.push_back(rec.answer);
  }

  result.coverage.items = ballots.size();
  for (const auto& [key, answers] : ballots) {
    const auto outcome = vote(answers, min_annotators);
    if (!outcome.label) {
      result.coverage.insufficient.push_back(key);
      continue;
    }
    std::string category;
    if (const auto it = category_of.find(key); it != category_of.end()) {
      category = it->second;
    } else if (const auto rc = review_categories.find(key.first); rc != review_categories.end()) {
      category = rc->second;
    } else {
      throw ValidationError(fmt::format("no category known for review {}", key.first));
    }
    result.items.push_back({key.first, key.second, std::move(category), *outcome.label});
  }
  result.coverage.voted = result.items.size();
  if (!result.items.empty()) result.summary = summarize(result.items);
  return result;
}

std::string format_summary_table(const EvalSummary& summary) {
  std::vector<const CategoryRates*> cols;
  for (const auto& row : summary.per_category) cols.push_back(&row);
  cols.push_back(&summary.total);

  std::string out = fmt::format("{:<10}", "");
  for (const auto* c : cols) out += fmt::format(" {:>8}", c->category);
  out += fmt::format("\n{:<10}", "#items");
  for (const auto* c : cols) out += fmt::format(" {:>8}", c->n);
  const auto row = [&](std::string_view name, double CategoryRates::*field) {
    out += fmt::format("\n{:<10}", name);
    for (const auto* c : cols) {
      if (c->n == 0) {
        out += fmt::format(" {:>8}", "-");
      } else {
        out += fmt::format(" {:>7.1f}%", c->*field);
      }
    }
  };
  row("% Yes", &CategoryRates::yes);
  row("% No", &CategoryRates::no);
  row("% Idk", &CategoryRates::idk);
  out += '\n';
  return out;
}

}  // namespace frex

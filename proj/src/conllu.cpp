#include "frex/conllu.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "frex/error.hpp"

namespace frex {
namespace {

constexpr std::size_t kColumns = 10;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::string column(std::string_view field) { return field == "_" ? std::string() : std::string(field); }

struct PendingSentence {
  std::optional<std::string> review_id;
  std::optional<std::string> app_id;
  std::optional<std::string> category;
  std::size_t first_line = 0;
  Sentence tokens;

  bool empty() const { return tokens.empty() && !review_id && !app_id && !category; }
};

class Reader {
 public:
  AnnotatedCorpus run(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) {
        flush();
        continue;
      }
      if (line.front() == '#') {
        comment(line);
        continue;
      }
      token(line);
    }
    flush();
    return AnnotatedCorpus(std::move(reviews_));
  }

 private:
  void comment(std::string_view line) {
    if (!pending_.tokens.empty()) throw ParseError("comment line inside a sentence", line_no_);
    if (pending_.first_line == 0) pending_.first_line = line_no_;
    std::string_view body = trim(line.substr(1));
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) return;
    const std::string_view key = trim(body.substr(0, eq));
    std::string value(trim(body.substr(eq + 1)));
    if (key == "review_id") {
      pending_.review_id = std::move(value);
    } else if (key == "app_id") {
      pending_.app_id = std::move(value);
    } else if (key == "category") {
      pending_.category = std::move(value);
    }
  }

  void token(std::string_view line) {
    if (pending_.first_line == 0) pending_.first_line = line_no_;
    const auto fields = split(line, '\t');
    if (fields.size() != kColumns) {
      throw ParseError(fmt::format("expected {} tab-separated columns, found {}", kColumns, fields.size()),
                       line_no_);
    }
    const std::string_view id = fields[0];
    if (id.find_first_of("-.") != std::string_view::npos) return;  // range line or empty node

    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), value);
    if (ec != std::errc() || ptr != id.data() + id.size()) {
      throw ParseError(fmt::format("invalid token ID '{}'", id), line_no_);
    }
    if (value != pending_.tokens.size() + 1) {
      throw ParseError(fmt::format("token ID {} out of sequence, expected {}", value, pending_.tokens.size() + 1),
                       line_no_);
    }
    if (fields[1].empty()) throw ParseError("empty FORM column", line_no_);

    Token tok;
    tok.surface = std::string(fields[1]);
    tok.lemma = column(fields[2]);
    tok.pos = column(fields[3]);
    tok.syntax.xpos = column(fields[4]);
    tok.syntax.feats = column(fields[5]);
    tok.syntax.head = column(fields[6]);
    tok.syntax.deprel = column(fields[7]);
    tok.syntax.deps = column(fields[8]);
    if (fields[9] != "_") {
      for (std::string_view entry : split(fields[9], '|')) {
        if (entry.starts_with("ner=")) {
          const auto label = parse_label(entry.substr(4));
          if (!label) throw ParseError(fmt::format("unknown label '{}'", entry.substr(4)), line_no_);
          tok.label = *label;
        } else if (!entry.empty()) {
          tok.syntax.misc.emplace_back(entry);
        }
      }
    }
    pending_.tokens.push_back(std::move(tok));
  }

  void flush() {
    if (pending_.empty()) {
      pending_ = {};
      return;
    }
    const std::size_t at = pending_.first_line;
    if (pending_.tokens.empty()) throw ParseError("sentence has comments but no tokens", at);

    const bool continues = !reviews_.empty() && (!pending_.review_id || *pending_.review_id == reviews_.back().review_id);
    if (continues) {
      Review& r = reviews_.back();
      if (pending_.app_id && *pending_.app_id != r.app_id) {
        throw ParseError(fmt::format("app_id changes inside review {}", r.review_id), at);
      }
      if (pending_.category && *pending_.category != r.category) {
        throw ParseError(fmt::format("category changes inside review {}", r.review_id), at);
      }
      r.sentences.push_back(std::move(pending_.tokens));
    } else {
      if (!pending_.review_id) throw ParseError("missing review_id comment", at);
      if (pending_.review_id->empty()) throw ParseError("empty review_id", at);
      if (!pending_.app_id) throw ParseError(fmt::format("review {} lacks app_id", *pending_.review_id), at);
      if (!pending_.category) throw ParseError(fmt::format("review {} lacks category", *pending_.review_id), at);
      if (!seen_.insert(*pending_.review_id).second) {
        throw ParseError(fmt::format("duplicate review_id {}", *pending_.review_id), at);
      }
      Review r;
      r.review_id = std::move(*pending_.review_id);
      r.app_id = std::move(*pending_.app_id);
      r.category = std::move(*pending_.category);
      r.sentences.push_back(std::move(pending_.tokens));
      reviews_.push_back(std::move(r));
    }
    pending_ = {};
  }

  std::size_t line_no_ = 0;
  PendingSentence pending_;
  std::vector<Review> reviews_;
  std::unordered_set<std::string> seen_;
};

void put(std::ostream& out, const std::string& value) {
  if (value.empty()) {
    out << '_';
  } else {
    out << value;
  }
}

}  // namespace

AnnotatedCorpus parse_corpus(std::istream& in) { return Reader().run(in); }

AnnotatedCorpus parse_corpus(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in);
}

AnnotatedCorpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  return parse_corpus(in);
}

void serialize_corpus(const AnnotatedCorpus& corpus, std::ostream& out) {
  for (const Review& review : corpus.reviews()) {
    for (std::size_t si = 0; si < review.sentences.size(); ++si) {
      if (si == 0) {
        out << "# review_id = " << review.review_id << '\n'
            << "# app_id = " << review.app_id << '\n'
            << "# category = " << review.category << '\n';
      }
      const Sentence& sentence = review.sentences[si];
      for (std::size_t ti = 0; ti < sentence.size(); ++ti) {
        const Token& t = sentence[ti];
        out << ti + 1 << '\t' << t.surface << '\t';
        put(out, t.lemma);
        out << '\t';
        put(out, t.pos);
        out << '\t';
        put(out, t.syntax.xpos);
        out << '\t';
        put(out, t.syntax.feats);
        out << '\t';
        put(out, t.syntax.head);
        out << '\t';
        put(out, t.syntax.deprel);
        out << '\t';
        put(out, t.syntax.deps);
        out << '\t';
        std::vector<std::string> misc = t.syntax.misc;
        if (t.label != Label::O) misc.push_back("ner=" + std::string(to_string(t.label)));
        put(out, join(misc, "|"));
        out << '\n';
      }
      out << '\n';
    }
  }
}

std::string serialize_corpus(const AnnotatedCorpus& corpus) {
  std::ostringstream out;
  serialize_corpus(corpus, out);
  return out.str();
}

}  // namespace frex

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "frex/corpus.hpp"

namespace frex {

// CoNLL-U reader/writer for annotated review corpora.
//
// Review metadata travels in sentence comments:
//
//   # review_id = r1
//   # app_id = com.example.todo
//   # category = PR
//   1	To	to	ADP	_	_	_	_	_	ner=B-feature
//   ...
//
// The three comments open a review; following sentences without a review_id
// comment (or with the same review_id) belong to the same review. Labels are
// stored in MISC as ner=B-feature / ner=I-feature; a missing ner entry means O.
// Multi-word range lines (1-2) and empty nodes (1.1) are skipped on read.
AnnotatedCorpus parse_corpus(std::istream& in);
AnnotatedCorpus parse_corpus(std::string_view text);
AnnotatedCorpus read_corpus(const std::filesystem::path& path);

// Canonical form: metadata comments before each review's first sentence, "_"
// for empty columns, ner= omitted for O, one blank line after every sentence.
void serialize_corpus(const AnnotatedCorpus& corpus, std::ostream& out);
std::string serialize_corpus(const AnnotatedCorpus& corpus);

}  // namespace frex

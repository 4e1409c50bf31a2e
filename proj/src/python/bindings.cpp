#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "frex/conllu.hpp"
#include "frex/embedding.hpp"
#include "frex/error.hpp"
#include "frex/human_eval.hpp"
#include "frex/instance_select.hpp"
#include "frex/metrics.hpp"
#include "frex/splitter.hpp"
#include "frex/stats.hpp"
#include "frex/transfer.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

py::dict plan_to_dict(const frex::PartitionPlan& plan) {
  py::dict out;
  for (std::size_t i = 0; i < plan.fractions.size(); ++i) {
    out[py::float_(plan.fractions[i])] =
        std::vector<std::string>(plan.per_fraction[i].begin(), plan.per_fraction[i].end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_frex, m) {
  m.doc() = "Feature extraction corpus toolkit (C++ core)";

  static py::exception<frex::Error> error(m, "FrexError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const frex::Error& e) {
      error(e.what());
    }
  });

  py::enum_<frex::Label>(m, "Label").value("O", frex::Label::O).value("B", frex::Label::B).value("I", frex::Label::I);
  py::enum_<frex::MatchOn>(m, "MatchOn").value("LEMMA", frex::MatchOn::Lemma).value("SURFACE", frex::MatchOn::Surface);
  py::enum_<frex::OccurrenceMode>(m, "OccurrenceMode")
      .value("FIRST", frex::OccurrenceMode::First)
      .value("ALL_NON_OVERLAPPING", frex::OccurrenceMode::AllNonOverlapping);
  py::enum_<frex::OverwriteMode>(m, "OverwriteMode")
      .value("SKIP_CONFLICTS", frex::OverwriteMode::SkipConflicts)
      .value("LITERAL_OVERWRITE", frex::OverwriteMode::LiteralOverwrite);
  py::enum_<frex::RankOrder>(m, "RankOrder")
      .value("FARTHEST_FIRST", frex::RankOrder::FarthestFirst)
      .value("NEAREST_FIRST", frex::RankOrder::NearestFirst);
  py::enum_<frex::Answer>(m, "Answer")
      .value("YES", frex::Answer::Yes)
      .value("NO", frex::Answer::No)
      .value("IDK", frex::Answer::Idk);

  py::class_<frex::Token>(m, "Token")
      .def_readonly("surface", &frex::Token::surface)
      .def_readonly("lemma", &frex::Token::lemma)
      .def_readonly("pos", &frex::Token::pos)
      .def_readonly("label", &frex::Token::label);

  py::class_<frex::Review>(m, "Review")
      .def_readonly("review_id", &frex::Review::review_id)
      .def_readonly("app_id", &frex::Review::app_id)
      .def_readonly("category", &frex::Review::category)
      .def_readonly("sentences", &frex::Review::sentences)
      .def("labels", [](const frex::Review& r) {
        std::vector<std::vector<std::string>> out;
        for (const auto& s : r.sentences) {
          auto& row = out.emplace_back();
          for (const auto& t : s) row.emplace_back(frex::to_string(t.label));
        }
        return out;
      });

  py::class_<frex::AnnotatedCorpus>(m, "AnnotatedCorpus")
      .def_property_readonly("reviews", &frex::AnnotatedCorpus::reviews)
      .def_property_readonly("categories", &frex::AnnotatedCorpus::categories)
      .def("__len__", &frex::AnnotatedCorpus::size)
      .def("__eq__", [](const frex::AnnotatedCorpus& a, const frex::AnnotatedCorpus& b) { return a == b; });

  py::class_<frex::FeatureSet>(m, "FeatureSet")
      .def("__len__", &frex::FeatureSet::size)
      .def("distinct_phrases", &frex::FeatureSet::distinct_phrases);

  py::class_<frex::Span>(m, "Span")
      .def_readonly("sentence", &frex::Span::sentence)
      .def_readonly("start", &frex::Span::start)
      .def_readonly("end", &frex::Span::end)
      .def("__repr__", [](const frex::Span& s) {
        return "Span(" + std::to_string(s.sentence) + ", " + std::to_string(s.start) + ", " + std::to_string(s.end) + ")";
      });

  m.def("parse_corpus", py::overload_cast<std::string_view>(&frex::parse_corpus), "text"_a);
  m.def("serialize_corpus", py::overload_cast<const frex::AnnotatedCorpus&>(&frex::serialize_corpus), "corpus"_a);
  m.def("parse_features", py::overload_cast<std::string_view>(&frex::parse_features), "text"_a);
  m.def("extract_spans", &frex::extract_spans, "review"_a);
  m.def("find_matches", py::overload_cast<const std::vector<std::string>&, const std::vector<std::string>&>(
                            &frex::find_matches),
        "sentence_keys"_a, "phrase_keys"_a);

  py::class_<frex::TransferReport>(m, "TransferReport")
      .def_readonly("annotations_made", &frex::TransferReport::annotations_made)
      .def_readonly("reviews_touched", &frex::TransferReport::reviews_touched)
      .def_readonly("conflicts_skipped", &frex::TransferReport::conflicts_skipped)
      .def_readonly("per_feature_counts", &frex::TransferReport::per_feature_counts);

  m.def(
      "transfer_annotations",
      [](const frex::AnnotatedCorpus& corpus, const frex::FeatureSet& features, frex::MatchOn match_on,
         frex::OccurrenceMode occurrence, frex::OverwriteMode overwrite) {
        auto result = frex::transfer_annotations(corpus, features, {match_on, occurrence, overwrite});
        return py::make_tuple(std::move(result.corpus), std::move(result.report));
      },
      "corpus"_a, "features"_a, "match_on"_a = frex::MatchOn::Lemma, "occurrence"_a = frex::OccurrenceMode::First,
      "overwrite"_a = frex::OverwriteMode::SkipConflicts);

  py::class_<frex::EmbeddingStore>(m, "EmbeddingStore")
      .def(py::init<std::size_t>(), "dim"_a)
      .def("add", &frex::EmbeddingStore::add, "review_id"_a, "vector"_a)
      .def_property_readonly("dim", &frex::EmbeddingStore::dim)
      .def("__len__", &frex::EmbeddingStore::size)
      .def("__contains__", &frex::EmbeddingStore::contains)
      .def("get",
           [](const frex::EmbeddingStore& s, const std::string& id) {
             const frex::Vector* v = s.find(id);
             if (v == nullptr) throw py::key_error(id);
             return *v;
           })
      .def("to_jsonl", [](const frex::EmbeddingStore& s) {
        std::ostringstream out;
        frex::save_embeddings(s, out);
        return out.str();
      });

  m.def("load_embeddings", py::overload_cast<std::string_view>(&frex::load_embeddings), "text"_a);
  m.def("mock_embed", &frex::mock_embed, "review"_a, "dim"_a);
  m.def("mock_embed_corpus", &frex::mock_embed_corpus, "corpus"_a, "dim"_a);
  m.def("fnv1a64", &frex::fnv1a64, "data"_a);
  m.def("centroid", [](const std::vector<frex::Vector>& v) { return frex::centroid(std::span<const frex::Vector>(v)); },
        "vectors"_a);
  m.def("euclidean", [](const frex::Vector& a, const frex::Vector& b) { return frex::euclidean(a, b); }, "a"_a, "b"_a);

  m.def("build_feature_groups", &frex::build_feature_groups, "corpus"_a, "features"_a);
  m.def(
      "select_instances",
      [](const frex::AnnotatedCorpus& corpus, const frex::FeatureSet& features, const frex::EmbeddingStore& store,
         std::vector<double> fractions, frex::RankOrder order) {
        frex::SelectionConfig config{std::move(fractions), order};
        return plan_to_dict(frex::select_instances(corpus, features, store, config));
      },
      "corpus"_a, "features"_a, "store"_a, "fractions"_a = std::vector<double>{0.125, 0.25, 0.50, 0.75},
      "order"_a = frex::RankOrder::FarthestFirst);

  auto fold_plan_to_list = [](const frex::FoldPlan& plan) {
    py::list folds;
    for (const auto& f : plan.folds) folds.append(py::dict("name"_a = f.name, "test"_a = f.test));
    return folds;
  };
  m.def(
      "split_in_domain",
      [fold_plan_to_list](const frex::AnnotatedCorpus& c, std::size_t k, std::uint64_t seed) {
        return fold_plan_to_list(frex::split_in_domain(c, k, seed));
      },
      "corpus"_a, "k"_a = frex::kDefaultFolds, "seed"_a = frex::kDefaultSeed);
  m.def(
      "split_out_of_domain",
      [fold_plan_to_list](const frex::AnnotatedCorpus& c) { return fold_plan_to_list(frex::split_out_of_domain(c)); },
      "corpus"_a);

  py::class_<frex::MetricReport>(m, "MetricReport")
      .def_property_readonly("tp", [](const frex::MetricReport& r) { return r.counts.tp; })
      .def_property_readonly("fp", [](const frex::MetricReport& r) { return r.counts.fp; })
      .def_property_readonly("fn", [](const frex::MetricReport& r) { return r.counts.fn; })
      .def_readonly("p", &frex::MetricReport::p)
      .def_readonly("r", &frex::MetricReport::r)
      .def_readonly("f1", &frex::MetricReport::f1)
      .def_readonly("f_beta", &frex::MetricReport::f_beta)
      .def_readonly("beta", &frex::MetricReport::beta)
      .def_readonly("p_undefined", &frex::MetricReport::p_undefined)
      .def_readonly("r_undefined", &frex::MetricReport::r_undefined)
      .def_readonly("repairs", &frex::MetricReport::repairs);

  py::class_<frex::FoldSummary>(m, "FoldSummary")
      .def_readonly("folds", &frex::FoldSummary::folds)
      .def_readonly("p", &frex::FoldSummary::p)
      .def_readonly("r", &frex::FoldSummary::r)
      .def_readonly("f1", &frex::FoldSummary::f1)
      .def_readonly("f_beta", &frex::FoldSummary::f_beta)
      .def_readonly("f_beta_of_means", &frex::FoldSummary::f_beta_of_means)
      .def_readonly("micro", &frex::FoldSummary::micro);

  m.def("score_tokens", &frex::score_tokens, "gold"_a, "pred"_a, "beta"_a = frex::kDefaultBeta);
  m.def("score_spans", &frex::score_spans, "gold"_a, "pred"_a, "beta"_a = frex::kDefaultBeta);
  m.def(
      "compute_beta", [](double a_t, double a_small_t) { return frex::compute_beta({a_t, a_small_t}); }, "a_t"_a,
      "a_small_t"_a);
  m.def("f_beta", &frex::f_beta, "p"_a, "r"_a, "beta"_a);
  m.def(
      "aggregate_folds",
      [](const std::vector<frex::MetricReport>& reports) { return frex::aggregate_folds(reports); }, "reports"_a);

  m.def(
      "vote",
      [](const std::vector<frex::Answer>& answers, std::size_t min_annotators) {
        return frex::vote(answers, min_annotators).label;
      },
      "answers"_a, "min_annotators"_a = frex::kMinAnnotators);
  m.def(
      "weighted_totals",
      [](const std::vector<std::tuple<std::string, std::size_t, double, double, double>>& rows) {
        std::vector<frex::CategoryRates> in;
        for (const auto& [c, n, y, no, i] : rows) in.push_back({c, n, y, no, i});
        const auto s = frex::weighted_summary(std::move(in));
        return py::make_tuple(s.total.yes, s.total.no, s.total.idk);
      },
      "rows"_a);

  m.def(
      "compute_stats",
      [](const frex::AnnotatedCorpus& corpus, const frex::FeatureSet& features) {
        const auto stats = frex::compute_stats(corpus, features);
        auto to_dict = [](const frex::CategoryStats& c) {
          return py::dict("apps"_a = c.apps, "reviews"_a = c.reviews, "sentences"_a = c.sentences,
                          "tokens"_a = c.tokens, "b_feature"_a = c.b_feature, "i_feature"_a = c.i_feature,
                          "o"_a = c.o, "features"_a = c.features, "distinct_features"_a = c.distinct_features);
        };
        py::dict per;
        for (const auto& [cat, c] : stats.per_category) per[py::str(cat)] = to_dict(c);
        return py::dict("per_category"_a = per, "total"_a = to_dict(stats.total));
      },
      "corpus"_a, "features"_a = frex::FeatureSet{});
}

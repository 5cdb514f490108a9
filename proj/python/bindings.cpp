#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ideaminer/coherence.hpp"
#include "ideaminer/config.hpp"
#include "ideaminer/dtm.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/lda.hpp"
#include "ideaminer/pipeline.hpp"
#include "ideaminer/porter_stemmer.hpp"
#include "ideaminer/preprocess.hpp"
#include "ideaminer/trends.hpp"
#include "ideaminer/unicode.hpp"

namespace py = pybind11;
using namespace ideaminer;

namespace {

// Token-id documents; slices default to a single one labelled year 0.
preprocess::BowCorpus bow_from_docs(const std::vector<std::vector<uint32_t>>& docs, size_t vocab_size,
                                    std::vector<size_t> slice_sizes, std::vector<int> slice_years) {
  preprocess::BowCorpus bow;
  bow.vocab_size = vocab_size;
  if (slice_sizes.empty()) slice_sizes = {docs.size()};
  if (slice_years.empty()) {
    for (size_t t = 0; t < slice_sizes.size(); ++t) slice_years.push_back(static_cast<int>(t));
  }
  if (slice_years.size() != slice_sizes.size()) throw Error("slice_years and slice_sizes differ in length");
  size_t total = 0;
  for (size_t s : slice_sizes) total += s;
  if (total != docs.size()) throw Error("slice sizes do not sum to the document count");
  bow.slice_sizes = std::move(slice_sizes);
  bow.slice_years = std::move(slice_years);
  for (size_t d = 0; d < docs.size(); ++d) {
    std::vector<uint32_t> counts(vocab_size, 0);
    for (uint32_t w : docs[d]) {
      if (w >= vocab_size) throw Error("token id " + std::to_string(w) + " outside the vocabulary");
      ++counts[w];
    }
    preprocess::SparseDoc doc;
    for (uint32_t w = 0; w < vocab_size; ++w) {
      if (counts[w]) doc.push_back({w, counts[w]});
    }
    bow.docs.push_back(std::move(doc));
    bow.doc_ids.push_back(std::to_string(d));
  }
  return bow;
}

py::array_t<double> beta_array(const dtm::DtmModel& m) {
  py::array_t<double> out({m.num_slices, static_cast<size_t>(m.num_topics), m.vocab_size});
  std::copy(m.beta.begin(), m.beta.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Idea-mining pipeline core: topic models, coherence, trend statistics and the phase runner";
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("porter_stem", [](const std::string& w) { return preprocess::porter_stem(w); }, py::arg("word"));
  m.def("normalize_title", [](const std::string& t) { return unicode::normalize_title(t); }, py::arg("title"));

  py::class_<preprocess::BowCorpus>(m, "BowCorpus")
      .def(py::init(&bow_from_docs), py::arg("docs"), py::arg("vocab_size"),
           py::arg("slice_sizes") = std::vector<size_t>{}, py::arg("slice_years") = std::vector<int>{})
      .def_readonly("vocab_size", &preprocess::BowCorpus::vocab_size)
      .def_readonly("slice_sizes", &preprocess::BowCorpus::slice_sizes)
      .def_readonly("slice_years", &preprocess::BowCorpus::slice_years)
      .def_property_readonly("num_docs", [](const preprocess::BowCorpus& b) { return b.docs.size(); })
      .def_property_readonly("total_tokens", &preprocess::BowCorpus::total_tokens);

  py::class_<lda::LdaModel>(m, "LdaModel")
      .def_readonly("num_topics", &lda::LdaModel::num_topics)
      .def_readonly("phi", &lda::LdaModel::phi)
      .def_readonly("theta", &lda::LdaModel::theta)
      .def_readonly("seed", &lda::LdaModel::seed)
      .def_readonly("warnings", &lda::LdaModel::warnings)
      .def("to_json", [](const lda::LdaModel& x) { return lda::to_json(x); });

  m.def(
      "fit_lda",
      [](const preprocess::BowCorpus& bow, int num_topics, double alpha, double eta, int iterations, uint64_t seed) {
        lda::LdaOptions o;
        o.num_topics = num_topics;
        o.alpha = alpha;
        o.eta = eta;
        o.iterations = iterations;
        o.seed = seed;
        py::gil_scoped_release release;
        return lda::fit_lda(bow, o);
      },
      py::arg("bow"), py::arg("num_topics"), py::arg("alpha") = 0.1, py::arg("eta") = 0.01,
      py::arg("iterations") = 1000, py::arg("seed") = 0);
  m.def("perplexity", &lda::perplexity, py::arg("model"), py::arg("bow"));

  py::class_<coherence::CoherenceResult>(m, "CoherenceResult")
      .def_readonly("per_topic", &coherence::CoherenceResult::per_topic)
      .def_readonly("aggregate", &coherence::CoherenceResult::aggregate)
      .def_readonly("top_n", &coherence::CoherenceResult::top_n);
  m.def("umass_coherence", &coherence::umass_coherence, py::arg("topic_top_terms"), py::arg("bow"),
        py::arg("top_n") = 10);

  py::class_<coherence::SelectionPoint>(m, "SelectionPoint")
      .def_readonly("num_topics", &coherence::SelectionPoint::num_topics)
      .def_readonly("coherence", &coherence::SelectionPoint::coherence)
      .def_readonly("perplexity", &coherence::SelectionPoint::perplexity);
  py::class_<coherence::Selection>(m, "Selection")
      .def_readonly("best_k", &coherence::Selection::best_k)
      .def_readonly("curve", &coherence::Selection::curve);
  m.def(
      "select_k",
      [](const preprocess::BowCorpus& bow, std::vector<int> candidates, int iterations, uint64_t seed, size_t top_n) {
        coherence::SelectOptions o;
        o.lda.iterations = iterations;
        o.lda.seed = seed;
        o.top_n = top_n;
        py::gil_scoped_release release;
        return coherence::select_k(bow, std::move(candidates), o);
      },
      py::arg("bow"), py::arg("candidates"), py::arg("iterations") = 1000, py::arg("seed") = 0,
      py::arg("top_n") = 10);

  py::class_<dtm::DtmModel>(m, "DtmModel")
      .def_readonly("num_topics", &dtm::DtmModel::num_topics)
      .def_readonly("num_slices", &dtm::DtmModel::num_slices)
      .def_readonly("vocab_size", &dtm::DtmModel::vocab_size)
      .def_readonly("elbo_trace", &dtm::DtmModel::elbo_trace)
      .def_readonly("converged", &dtm::DtmModel::converged)
      .def_readonly("slice_years", &dtm::DtmModel::slice_years)
      .def_readonly("warnings", &dtm::DtmModel::warnings)
      .def_readwrite("terms", &dtm::DtmModel::terms)
      .def_property_readonly("beta", &beta_array)  // (T, K, V)
      .def("to_json", [](const dtm::DtmModel& x) { return dtm::to_json(x); });
  m.def(
      "fit_dtm",
      [](const preprocess::BowCorpus& bow, int num_topics, double chain_variance, double alpha, int max_em_iters,
         uint64_t seed) {
        dtm::DtmOptions o;
        o.num_topics = num_topics;
        o.chain_variance = chain_variance;
        o.alpha = alpha;
        o.max_em_iters = max_em_iters;
        o.seed = seed;
        py::gil_scoped_release release;
        return dtm::fit_dtm(bow, o);
      },
      py::arg("bow"), py::arg("num_topics"), py::arg("chain_variance") = 0.005, py::arg("alpha") = 0.1,
      py::arg("max_em_iters") = 20, py::arg("seed") = 0);

  py::class_<dtm::TermTrajectory>(m, "TermTrajectory")
      .def(py::init([](std::vector<int> years, std::vector<double> values, std::string term, int topic) {
             return dtm::TermTrajectory{topic, std::move(term), std::move(years), std::move(values)};
           }),
           py::arg("years"), py::arg("values"), py::arg("term") = "", py::arg("topic") = 0)
      .def_readonly("topic", &dtm::TermTrajectory::topic)
      .def_readonly("term", &dtm::TermTrajectory::term)
      .def_readonly("years", &dtm::TermTrajectory::years)
      .def_readonly("values", &dtm::TermTrajectory::values);
  m.def("topic_term_trajectory",
        py::overload_cast<const dtm::DtmModel&, int, const std::string&>(&dtm::topic_term_trajectory),
        py::arg("model"), py::arg("topic"), py::arg("term"));
  m.def("topic_term_trajectory", py::overload_cast<const dtm::DtmModel&, int, size_t>(&dtm::topic_term_trajectory),
        py::arg("model"), py::arg("topic"), py::arg("term_index"));
  m.def("top_terms_at_slice", &dtm::top_terms_at_slice, py::arg("model"), py::arg("topic"), py::arg("slice"),
        py::arg("n"));

  py::class_<trends::CorrelationResult>(m, "CorrelationResult")
      .def_readonly("r", &trends::CorrelationResult::r)
      .def_readonly("t_stat", &trends::CorrelationResult::t_stat)
      .def_readonly("p_value", &trends::CorrelationResult::p_value)
      .def_readonly("n", &trends::CorrelationResult::n);
  m.def(
      "pearson_correlation",
      [](const std::vector<double>& x, const std::vector<double>& y) { return trends::pearson_correlation(x, y); },
      py::arg("x"), py::arg("y"));

  py::class_<trends::HorizonPoint>(m, "HorizonPoint")
      .def_readonly("year", &trends::HorizonPoint::year)
      .def_readonly("predicted", &trends::HorizonPoint::predicted)
      .def_readonly("unclamped", &trends::HorizonPoint::unclamped)
      .def_readonly("clamped", &trends::HorizonPoint::clamped);
  py::class_<trends::ForecastResult>(m, "ForecastResult")
      .def_readonly("slope", &trends::ForecastResult::slope)
      .def_readonly("intercept", &trends::ForecastResult::intercept)
      .def_readonly("intercept_reindexed", &trends::ForecastResult::intercept_reindexed)
      .def_readonly("r_squared", &trends::ForecastResult::r_squared)
      .def_readonly("rse", &trends::ForecastResult::rse)
      .def_readonly("slope_p_value", &trends::ForecastResult::slope_p_value)
      .def_readonly("n", &trends::ForecastResult::n)
      .def_readonly("horizon", &trends::ForecastResult::horizon);
  m.def("ols_forecast", &trends::ols_forecast, py::arg("trajectory"), py::arg("horizon_years"));
  m.def(
      "classify_trend",
      [](const trends::ForecastResult& f, double alpha) { return std::string(trends::to_string(trends::classify_trend(f, alpha))); },
      py::arg("forecast"), py::arg("alpha_level") = 0.05);
  m.def(
      "method_gate",
      [](size_t n, const std::string& method) {
        if (method != "regression" && method != "arima") throw Error("method must be 'regression' or 'arima'");
        const auto g = trends::method_gate(n, method == "arima" ? trends::Method::kArima : trends::Method::kRegression);
        return py::make_tuple(g.permitted, g.reason);
      },
      py::arg("n"), py::arg("method"));

  py::class_<config::PipelineConfig>(m, "PipelineConfig")
      .def_readonly("seed", &config::PipelineConfig::seed)
      .def_readonly("inputs", &config::PipelineConfig::inputs)
      .def_readonly("k_candidates", &config::PipelineConfig::k_candidates)
      .def_readwrite("out", &config::PipelineConfig::out)
      .def("canonical_text", [](const config::PipelineConfig& c) { return config::canonical_text(c); });
  m.def(
      "load_config",
      [](const std::filesystem::path& path, const std::map<std::string, std::string>& overrides) {
        return config::load_config(path, config::process_environment(), overrides);
      },
      py::arg("path"), py::arg("overrides") = std::map<std::string, std::string>{});
  m.def("default_config_text", &config::default_config_text);

  py::class_<pipeline::Pipeline>(m, "Pipeline")
      .def(py::init([](config::PipelineConfig c) { return pipeline::Pipeline(std::move(c)); }), py::arg("config"))
      .def(
          "execute",
          [](pipeline::Pipeline& p, const std::string& sub) {
            py::gil_scoped_release release;
            return p.execute(sub);
          },
          py::arg("subcommand"))
      .def("run",
           [](pipeline::Pipeline& p) {
             py::gil_scoped_release release;
             return p.run();
           })
      .def_property_readonly("out_dir", &pipeline::Pipeline::out_dir)
      .def_property_readonly("report_dir", &pipeline::Pipeline::report_dir);

  m.attr("EXIT_OK") = pipeline::kExitOk;
  m.attr("EXIT_FATAL") = pipeline::kExitFatal;
  m.attr("EXIT_NO_GO") = pipeline::kExitNoGo;
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seoaudit/detectors.hpp"
#include "seoaudit/error.hpp"
#include "seoaudit/features.hpp"
#include "seoaudit/harness.hpp"
#include "seoaudit/metrics.hpp"
#include "seoaudit/page_model.hpp"
#include "seoaudit/pipeline.hpp"
#include "seoaudit/scorer.hpp"

namespace py = pybind11;
using namespace seoaudit;

namespace {

// JSON crosses the boundary as text; the Python wrapper decodes it.
std::string dump(const nlohmann::json& j) { return j.dump(); }

std::string features_json(const std::string& html, const std::string& url) {
  return dump(to_json(extract_features(parse_html(html, url))));
}

std::string cloaking_json(const std::string& crawler_html, const std::string& user_html, const std::string& summary,
                          const std::string& url) {
  SnapshotPair pair{parse_html(crawler_html, url), parse_html(user_html, url)};
  return dump(to_json(detect_cloaking(cloaking_similarities(pair, summary))));
}

std::string link_farm_json(const std::vector<std::string>& a, const std::vector<std::string>& b, bool wildcard) {
  return dump(to_json(detect_link_farm({a.begin(), a.end()}, {b.begin(), b.end()}, wildcard)));
}

py::dict metrics_dict(std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn) {
  auto m = classifier_metrics({tp, fn, fp, tn});
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["f1"] = m.f1;
  return d;
}

std::string bench(const std::string& dataset, const std::string& corpus, const std::string& scorer_manifest,
                  const std::string& config, std::size_t trials, std::size_t jobs, const std::string& format) {
  PipelineConfig cfg;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw Error(Errc::IoFailure, "cannot read " + config);
    try {
      cfg = pipeline_config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidData, config + ": " + e.what());
    }
  }
  cfg.validate();
  std::optional<BagOfWordsScorer> scorer;
  if (!scorer_manifest.empty()) scorer = BagOfWordsScorer::from_manifest(scorer_manifest);
  auto data = BenchDataset::load(dataset);
  CorpusIndex index = std::filesystem::is_directory(corpus) ? index_directory(corpus, scorer ? &*scorer : nullptr)
                                                            : CorpusIndex::load(corpus);
  py::gil_scoped_release release;
  return emit_report(run_bench(data, index, cfg, trials, jobs), report_format_from_string(format));
}

}  // namespace

PYBIND11_MODULE(_seoaudit, m) {
  m.doc() = "Native core of the seoaudit toolkit";

  static py::exception<Error> error(m, "SeoauditError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(error.ptr())(py::str(e.what()));
      inst.attr("code") = to_string(e.code());
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  m.def("features_json", &features_json, py::arg("html"), py::arg("url"));
  m.def("cloaking_json", &cloaking_json, py::arg("crawler_html"), py::arg("user_html"), py::arg("summary"),
        py::arg("url") = "http://localhost/");
  m.def("link_farm_json", &link_farm_json, py::arg("visit_a"), py::arg("visit_b"), py::arg("wildcard") = false);
  m.def("relative_difference", &relative_difference, py::arg("mean_up"), py::arg("mean_down"));
  m.def(
      "cumulative_resilience",
      [](const std::vector<double>& v) { return cumulative_resilience(std::span<const double>(v)); },
      py::arg("phase_values"));
  m.def("classifier_metrics", &metrics_dict, py::arg("tp"), py::arg("fn"), py::arg("fp"), py::arg("tn"));
  m.def(
      "rewrite_distance",
      [](const std::string& a, const std::string& b) {
        TermFrequencyEmbedder tf;
        auto d = rewrite_distance(a, b, tf);
        return std::make_pair(d.std_distance, d.ed);
      },
      py::arg("original"), py::arg("rewritten"));
  m.def("bench", &bench, py::arg("dataset"), py::arg("corpus"), py::arg("scorer") = "", py::arg("config") = "",
        py::arg("trials") = 3, py::arg("jobs") = 1, py::arg("format") = "json");
}

#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "seoaudit/error.hpp"
#include "seoaudit/harness.hpp"

using namespace seoaudit;

namespace {

const CorpusIndex& bench_index() {
  static const CorpusIndex idx = [] {
    auto scorer = BagOfWordsScorer::from_manifest(testutil::fixtures() / "scorer" / "manifest.json");
    return index_directory(testutil::fixtures() / "bench" / "corpus", &scorer);
  }();
  return idx;
}

PipelineConfig bench_config() {
  return pipeline_config_from_json(nlohmann::json::parse(testutil::slurp(testutil::fixtures() / "bench" / "config.json")));
}

BenchDataset bench_dataset() { return BenchDataset::load(testutil::fixtures() / "bench" / "dataset.jsonl"); }

ResilienceRow row_from(double u, double r, double s) {
  ResilienceRow row;
  row.phases.understanding = u;
  row.phases.retrieval = r;
  row.phases.summarizing = s;
  std::vector<double> v = {u, r, s};
  auto c = cumulative_resilience(std::span<const double>(v));
  std::copy(c.begin(), c.end(), row.cumulative.begin());
  return row;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("dataset loads with a matching manifest") {
    auto d = bench_dataset();
    CHECK(d.pairs.size() == 20);
    CHECK(d.name == "desk-bench-20");
    CHECK_NOTHROW(d.validate());
    for (auto t : kAllAttackTypes) CHECK(d.tally()[t] == 4);
  }

  TEST_CASE("manifest mismatch and absence") {
    auto dir = testutil::scratch_dir("dataset");
    auto d = bench_dataset();
    d.save(dir / "set.jsonl");
    CHECK(BenchDataset::load(dir / "set.jsonl").pairs == d.pairs);
    auto broken = d;
    broken.counts[AttackType::Cloaking] = 9;
    CHECK_THROWS_AS(broken.validate(), Error);
    std::filesystem::remove(BenchDataset::default_manifest_path(dir / "set.jsonl"));
    try {
      BenchDataset::load(dir / "set.jsonl");
      FAIL("expected ManifestMissing");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ManifestMissing);
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("bench matches the designed per-pair outcomes") {
    auto expectations = nlohmann::json::parse(testutil::slurp(testutil::fixtures() / "bench" / "expectations.json"));
    auto dataset = bench_dataset();
    // Recount straight from the declared outcomes.
    std::map<AttackType, std::array<std::size_t, 3>> blocked, entered;
    for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
      auto type = dataset.pairs[i].attack_type;
      std::string at = expectations["pairs"][i]["blocked_at"];
      auto& e = entered[type];
      auto& b = blocked[type];
      ++e[0];
      if (at == "understanding") { ++b[0]; continue; }
      ++e[1];
      if (at == "retrieval") { ++b[1]; continue; }
      ++e[2];
      if (at == "summarizing") ++b[2];
    }
    auto report = run_bench(dataset, bench_index(), bench_config(), 3);
    CHECK(report.trace_count == 60);
    for (auto t : kAllAttackTypes) {
      const auto& p = report.by_attack.at(t).phases;
      CHECK(p.entered_understanding == 3 * entered[t][0]);
      CHECK(p.blocked_understanding == 3 * blocked[t][0]);
      CHECK(p.entered_retrieval == 3 * entered[t][1]);
      CHECK(p.blocked_retrieval == 3 * blocked[t][1]);
      CHECK(p.entered_summarizing == 3 * entered[t][2]);
      CHECK(p.blocked_summarizing == 3 * blocked[t][2]);
    }
  }

  TEST_CASE("unindexed targets are all stopped at retrieval") {
    BenchDataset d;
    for (auto t : kAllAttackTypes) {
      d.pairs.push_back({"hiking lodge", QueryClass::Benign, "http://gone.invalid/" + std::string(to_string(t)), t});
      d.counts[t] = 1;
    }
    auto report = run_bench(d, bench_index(), PipelineConfig{}, 1);
    for (auto t : kAllAttackTypes) CHECK(report.by_attack.at(t).phases.retrieval == 1.0);
  }

  TEST_CASE("trials do not change the rates") {
    BenchDataset d;
    d.pairs.push_back({"zephyr ridge hiking lodge", QueryClass::Benign, "http://zephyr-ridge-lodge.com/", AttackType::Cloaking});
    d.counts[AttackType::Cloaking] = 1;
    auto one = run_bench(d, bench_index(), bench_config(), 1);
    auto three = run_bench(d, bench_index(), bench_config(), 3);
    auto traces = run_traces(d, bench_index(), bench_config(), 3);
    REQUIRE(traces.size() == 3);
    CHECK(traces[0] == traces[1]);
    CHECK(traces[1] == traces[2]);
    CHECK(one.overall.phases.values() == three.overall.phases.values());
    CHECK(one.overall.cumulative == three.overall.cumulative);
    auto parallel = run_bench(bench_dataset(), bench_index(), bench_config(), 3, 4);
    CHECK(parallel == run_bench(bench_dataset(), bench_index(), bench_config(), 3, 1));
  }

  TEST_CASE("bench errors") {
    try {
      run_bench(BenchDataset{}, bench_index(), PipelineConfig{}, 1);
      FAIL("expected DatasetEmpty");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DatasetEmpty);
    }
    try {
      run_bench(bench_dataset(), CorpusIndex{}, PipelineConfig{}, 1);
      FAIL("expected IndexMissing");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::IndexMissing);
    }
  }

  TEST_CASE("attack eval shares") {
    auto dir = testutil::scratch_dir("attack");
    CorpusSpec spec;
    spec.root = dir / "corpus";
    spec.per_technique = 1;
    spec.seed = 11;
    auto manifest = build_corpus(spec);

    // Only two techniques' pages are indexed; both match the query equally.
    CorpusIndex idx;
    std::set<Technique> indexed = {Technique::Nested, Technique::Multimodal};
    for (const auto& p : manifest.pages) {
      if (!indexed.count(p.technique)) continue;
      idx.add(parse_html(testutil::slurp(spec.root / p.path), p.url), 0.0);
    }
    PipelineConfig cfg;
    auto report = run_attack_eval(manifest, "smart thermostat", idx, cfg, 10);
    CHECK(report.techniques.size() == 9);
    CHECK(report.retrieval_hits[Technique::Nested] == 10);
    CHECK(report.retrieval_share[Technique::Nested] == 0.5);
    CHECK(report.retrieval_share[Technique::Multimodal] == 0.5);
    CHECK(report.summary_share[Technique::Nested] == 0.5);
    double total = 0;
    for (auto t : report.techniques) total += report.retrieval_share[t].value_or(0);
    CHECK(std::abs(total - 1.0) < 1e-9);

    auto once = run_attack_eval(manifest, "smart thermostat", idx, cfg, 1);
    CHECK(once.retrieval_share == report.retrieval_share);

    CorpusSpec solo = spec;
    solo.root = dir / "solo";
    solo.techniques = {Technique::QaFormat};
    solo.per_technique = 3;
    auto m2 = build_corpus(solo);
    CorpusIndex idx2;
    for (const auto& p : m2.pages) idx2.add(parse_html(testutil::slurp(solo.root / p.path), p.url), 0.0);
    auto r2 = run_attack_eval(m2, "smart thermostat", idx2, cfg, 2);
    CHECK(r2.retrieval_share[Technique::QaFormat] == 1.0);
    CHECK(r2.summary_share[Technique::QaFormat] == 1.0);

    auto miss = run_attack_eval(m2, "unrelated zucchini", idx2, cfg, 1);
    CHECK_FALSE(miss.retrieval_share[Technique::QaFormat].has_value());
    CHECK_THROWS_AS(run_attack_eval(CorpusManifest{}, "q", idx2, cfg), Error);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("report rendering and round trips") {
    ResilienceReport r;
    r.overall = row_from(0.157, 0.982, 0.852);
    r.by_attack[AttackType::SemanticConfusion] = row_from(0.24, 0.954, 0.88);
    auto partial = row_from(0.5, 1.0, 0.0);
    partial.phases.summarizing.reset();
    r.by_attack[AttackType::LinkFarm] = partial;
    r.trials = 3;
    r.trace_count = 30;
    auto md = emit_report(r, ReportFormat::Markdown);
    CHECK(md.find("99.78%") != std::string::npos);
    CHECK(md.find("96.50%") != std::string::npos);
    CHECK(md.find("50.0% / 100.0% / -") != std::string::npos);
    CHECK(resilience_report_from_json(nlohmann::json::parse(emit_report(r, ReportFormat::Json))) == r);
    CHECK(resilience_report_from_csv(emit_report(r, ReportFormat::Csv)) == r);
    CHECK(nlohmann::json::parse(emit_report(r, ReportFormat::Json))["schema_version"] == 1);
    CHECK_THROWS_AS(report_format_from_string("xml"), Error);

    AttackReport a;
    a.query = "smart thermostat";
    a.domain = "llmseo-lab.test";
    a.trials = 10;
    a.techniques = {Technique::Blank, Technique::Nested};
    a.retrieval_hits = {{Technique::Blank, 0}, {Technique::Nested, 10}};
    a.summary_hits = {{Technique::Blank, 0}, {Technique::Nested, 0}};
    a.retrieval_share = {{Technique::Blank, 0.0}, {Technique::Nested, 1.0}};
    a.summary_share = {{Technique::Blank, std::nullopt}, {Technique::Nested, std::nullopt}};
    CHECK(attack_report_from_json(nlohmann::json::parse(emit_report(a, ReportFormat::Json))) == a);
    CHECK(attack_report_from_csv(emit_report(a, ReportFormat::Csv)) == a);
    CHECK(emit_report(a, ReportFormat::Markdown).find("100.00%") != std::string::npos);
  }

  TEST_CASE("exit codes and parallel map") {
    CHECK(exit_code_for(Error(Errc::IoFailure, "x")) == kExitIo);
    CHECK(exit_code_for(Error(Errc::InvalidData, "x")) == kExitData);
    auto squares = parallel_map<int>(100, 8, [](std::size_t i) { return static_cast<int>(i * i); });
    for (int i = 0; i < 100; ++i) CHECK(squares[i] == i * i);
    CHECK_THROWS(parallel_map<int>(10, 4, [](std::size_t i) -> int {
      if (i == 7) throw std::runtime_error("boom");
      return 0;
    }));
  }
}

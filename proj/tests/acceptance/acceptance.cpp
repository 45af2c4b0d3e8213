// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "seoaudit/attackgen.hpp"
#include "seoaudit/detectors.hpp"
#include "seoaudit/error.hpp"
#include "seoaudit/features.hpp"
#include "seoaudit/harness.hpp"
#include "seoaudit/metrics.hpp"
#include "seoaudit/netio.hpp"
#include "seoaudit/pipeline.hpp"
#include "seoaudit/text.hpp"

using namespace seoaudit;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SEOAUDIT_FIXTURES;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string pct(double v, int decimals = 2) { return format_percent(v, decimals); }

// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: got %.6f want %.6f (tol %g)", what.c_str(), got, want, tol);
      failures.emplace_back(buf);
    }
  }
};

struct Outcome {
  int id;
  std::string title;
  bool pass;
  double seconds;
};

std::vector<Outcome> g_outcomes;

void run(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool pass = c.failures.empty();
  std::printf("%s  %2d  %s  (%.2fs)\n", pass ? "PASS" : "FAIL", id, title.c_str(), secs);
  for (const auto& f : c.failures) std::printf("        - %s\n", f.c_str());
  for (const auto& n : c.notes) std::printf("        note: %s\n", n.c_str());
  std::fflush(stdout);
  g_outcomes.push_back({id, title, pass, secs});
}

// --- 1 ---------------------------------------------------------------------

void cumulative_reproduction(Check& c) {
  struct Column {
    const char* name;
    std::array<double, 3> res;
    double after2, after3;
  };
  const Column columns[] = {
      {"average", {0.157, 0.982, 0.852}, 0.9848, 0.9978},
      {"semantic confusion", {0.240, 0.954, 0.880}, 0.9650, 0.9958},
  };
  for (const auto& col : columns) {
    auto cum = cumulative_resilience(std::span<const double>(col.res));
    // tolerance: 0.01 percentage points
    c.near(cum[1], col.after2, 1e-4, std::string(col.name) + " after retrieval");
    c.near(cum[2], col.after3, 1e-4, std::string(col.name) + " after summarizing");
    c.notes.push_back(std::string(col.name) + ": " + pct(cum[1]) + " / " + pct(cum[2]));
  }
}

// --- 2 ---------------------------------------------------------------------

void classifier_reproduction(Check& c) {
  struct Table {
    const char* name;
    ConfusionMatrix m;
    std::array<double, 4> stated;  // accuracy, precision, recall, F1 in percent
    bool consistent;
  };
  const Table tables[] = {
      {"cloaking", {87, 5, 13, 95}, {91.0, 87.0, 94.6, 90.6}, true},
      {"keyword stuffing", {89, 0, 11, 100}, {94.5, 89.0, 100.0, 94.18}, true},
      {"link farm", {92, 3, 8, 97}, {94.5, 92.0, 96.8, 94.3}, true},
      {"redirection", {99, 21, 1, 79}, {89.0, 99.0, 82.5, 89.4}, false},
      {"semantic confusion", {77, 4, 23, 96}, {86.6, 77.0, 95.0, 87.74}, false},
  };
  for (const auto& t : tables) {
    auto got = classifier_metrics(t.m);
    // Hand derivation from the matrix cells.
    double tp = t.m.tp, fn = t.m.fn, fp = t.m.fp, tn = t.m.tn;
    double acc = (tp + tn) / (tp + fn + fp + tn);
    double prec = tp / (tp + fp);
    double rec = tp / (tp + fn);
    double f1 = 2 * prec * rec / (prec + rec);
    std::array<double, 4> derived = {acc * 100, prec * 100, rec * 100, f1 * 100};
    std::array<double, 4> computed = {got.accuracy * 100, got.precision.value_or(-1) * 100,
                                      got.recall.value_or(-1) * 100, got.f1.value_or(-1) * 100};
    const char* names[] = {"accuracy", "precision", "recall", "F1"};
    for (int k = 0; k < 4; ++k) {
      c.near(computed[k], derived[k], 1e-9, std::string(t.name) + " " + names[k] + " vs matrix");
      if (t.consistent) {
        c.near(computed[k], t.stated[k], 0.1, std::string(t.name) + " " + names[k] + " vs published");
      } else if (std::abs(computed[k] - t.stated[k]) > 0.1) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s %s: matrix gives %.2f%%, published table states %.2f%%", t.name, names[k],
                      computed[k], t.stated[k]);
        c.notes.emplace_back(buf);
      }
    }
  }
}

// --- 3 ---------------------------------------------------------------------

void difference_arithmetic(Check& c) {
  struct Row {
    const char* feature;
    double up, down, stated;
  };
  const Row rows[] = {
      {"Text Fragmentation", 60.09, 50.48, 19.04}, {"DOM Depth", 13.93, 12.51, 11.36},
      {"Tag Diversity", 22.61, 22.27, 1.543},      {"External Link #", 14.71, 15.81, -6.971},
      {"Internal Link #", 45.66, 39.74, 14.89},    {"Multi-modal #", 12.50, 10.53, 18.71},
      {"Meta Completeness", 0.4167, 0.4196, -0.6911}, {"Alt Coverage", 0.2899, 0.2873, 0.9050},
  };
  for (const auto& r : rows) {
    double got = relative_difference(r.up, r.down);
    c.near(got, r.stated, 0.01, r.feature);
  }
}

// --- 4 ---------------------------------------------------------------------

class FixedScorer final : public TextScorer {
 public:
  double malicious = 0;
  bool initialized() const override { return true; }
  TopicProbabilities score(std::span<const std::string>) const override {
    TopicProbabilities p;
    p.prob_14.fill(1.0 / 14.0);
    p.prob_malicious = malicious;
    return p;
  }
};

// Draws around each threshold often enough to exercise both sides and the
// boundary itself.
double draw_unit(std::mt19937_64& rng, double threshold) {
  switch (rng() % 4) {
    case 0: return threshold;
    case 1: return std::nextafter(threshold, 2.0);
    case 2: return std::nextafter(threshold, -1.0);
    default: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

std::size_t draw_count(std::mt19937_64& rng, std::size_t threshold, std::size_t span) {
  switch (rng() % 4) {
    case 0: return threshold;
    case 1: return threshold - 1;
    case 2: return threshold + 1;
    default: return rng() % span;
  }
}

void detector_fidelity(Check& c) {
  const int n = 10000;
  std::mt19937_64 rng(20261016);
  std::size_t mismatches[5] = {0, 0, 0, 0, 0};
  std::size_t flagged[5] = {0, 0, 0, 0, 0};

  // semantic confusion: max(prob_14) > 0.9 and prob_malicious > 0.9
  for (int i = 0; i < n; ++i) {
    TopicProbabilities p;
    double top = draw_unit(rng, 0.9);
    double rest = (1.0 - top) / 13.0;
    p.prob_14.fill(rest);
    p.prob_14[rng() % 14] = top;
    p.prob_malicious = draw_unit(rng, 0.9);
    double max_topic = std::max(top, rest);
    bool want = max_topic > 0.9 && p.prob_malicious > 0.9;
    auto v = judge_semantic_confusion(p, 10 + rng() % 100);
    mismatches[0] += v.flagged != want;
    flagged[0] += v.flagged;
  }

  // redirection: (illegal query from a reputable origin, or hot query) and a malicious landing page
  {
    AuthorityList authority;
    authority.add("toprank.com", 5);
    authority.add("edge.com", 10000);
    authority.add("tail.com", 10001);
    struct Origin {
      const char* host;
      bool reputable;
    };
    const Origin origins[] = {{"www.toprank.com", true}, {"edge.com", true},      {"tail.com", false},
                              {"cs.uni.edu", true},      {"portal.gov", true},   {"random.net", false},
                              {"dept.example.gov.uk", true}};
    auto landing = parse_html("<p>landing</p>", "http://landing.test/");
    FixedScorer scorer;
    for (int i = 0; i < n; ++i) {
      const auto& o = origins[rng() % std::size(origins)];
      RedirectChain chain;
      std::size_t hops = 2 + rng() % 5;
      chain.hops.push_back({std::string("http://") + o.host + "/", std::nullopt});
      for (std::size_t h = 1; h < hops; ++h) chain.hops.push_back({"http://hop" + std::to_string(h) + ".test/", RedirectMechanism::Http3xx});
      chain.origin_query_class = static_cast<QueryClass>(rng() % 3);
      scorer.malicious = draw_unit(rng, 0.9);
      bool structural = (chain.origin_query_class == QueryClass::Illegal && o.reputable) ||
                        chain.origin_query_class == QueryClass::Hot;
      bool want = structural && scorer.malicious > 0.9;
      auto v = detect_redirection(chain, authority, scorer, landing);
      mismatches[1] += v.flagged != want;
      flagged[1] += v.flagged;
    }
  }

  // cloaking: signature_sim < 0.9 and summary_sim > 0.33 and dom_sim > 0.66
  for (int i = 0; i < n; ++i) {
    CloakingEvidence e{draw_unit(rng, 0.9), draw_unit(rng, 0.33), draw_unit(rng, 0.66), false};
    bool want = e.signature_sim < 0.9 && e.summary_sim > 0.33 && e.dom_sim > 0.66;
    auto v = detect_cloaking(e);
    mismatches[2] += v.flagged != want;
    flagged[2] += v.flagged;
  }

  // keyword stuffing: hotwords_count >= 10 and spam_subpages >= 100, evaluated on real pages
  {
    std::vector<std::string> phrases;
    for (int k = 0; k < 25; ++k) phrases.push_back("trend" + std::to_string(k) + " now");
    HotwordList hot(phrases);
    StaticSiteStats stats;
    for (int i = 0; i < n; ++i) {
      std::size_t words = std::min<std::size_t>(draw_count(rng, 10, 26), 25);
      std::size_t spam = draw_count(rng, 100, 400);
      std::string domain = "site" + std::to_string(i) + ".test";
      stats.set(domain, {spam + rng() % 50, spam});
      std::string text = "<p>";
      for (std::size_t k = 0; k < words; ++k) text += "Trend" + std::to_string(k) + " NOW and ";
      text += "filler</p>";
      auto page = parse_html(text, "http://www." + domain + "/");
      bool want = words >= 10 && spam >= 100;
      auto v = detect_keyword_stuffing(page, hot, stats);
      mismatches[3] += v.flagged != want;
      flagged[3] += v.flagged;
    }
  }

  // link farm: max(|A-B|/|A|, |A-B|/|B|) >= 0.2
  for (int i = 0; i < n; ++i) {
    std::set<std::string> a, b;
    std::size_t universe = 2 + rng() % 30;
    for (std::size_t k = 0; k < universe; ++k) {
      auto r = rng() % 10;
      if (r < 6) {
        a.insert("u" + std::to_string(k));
        b.insert("u" + std::to_string(k));
      } else if (r < 8) {
        a.insert("u" + std::to_string(k));
      } else {
        b.insert("u" + std::to_string(k));
      }
    }
    if (a.empty()) a.insert("only-a");
    if (b.empty()) b.insert("only-b");
    std::size_t diff = 0;
    for (const auto& x : a) diff += b.count(x) == 0;
    double ratio = std::max(static_cast<double>(diff) / static_cast<double>(a.size()),
                            static_cast<double>(diff) / static_cast<double>(b.size()));
    bool want = ratio >= 0.2;
    auto v = detect_link_farm(a, b, rng() % 2);
    mismatches[4] += v.flagged != want;
    flagged[4] += v.flagged;
  }

  const char* names[] = {"semantic confusion", "redirection", "cloaking", "keyword stuffing", "link farm"};
  for (int d = 0; d < 5; ++d) {
    c.expect(mismatches[d] == 0, std::string(names[d]) + ": " + std::to_string(mismatches[d]) + " mismatches of " +
                                     std::to_string(n));
    c.expect(flagged[d] > 0 && flagged[d] < static_cast<std::size_t>(n),
             std::string(names[d]) + ": draws did not cover both outcomes");
  }
}

// --- 5 ---------------------------------------------------------------------

void cloaking_similarity_laws(Check& c) {
  std::mt19937_64 rng(55);
  const char* vocab[] = {"river", "stone", "cloud", "ember", "frost", "grove", "maple", "quartz", "tide", "wren"};
  auto random_words = [&](std::size_t n, std::size_t offset) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += std::string(vocab[(offset + rng() % 5) % 10]) + " ";
    return s;
  };
  const char* wrappers[] = {"<p>%s</p>", "<div><p>%s</p><span>x</span></div>", "<section><h2>h</h2><p>%s</p></section>",
                            "<ul><li>%s</li></ul>"};
  auto wrap = [&](const std::string& text) {
    char buf[4096];
    std::snprintf(buf, sizeof buf, wrappers[rng() % 4], text.c_str());
    return parse_html(std::string("<html><body>") + buf + "</body></html>", "http://c.test/");
  };
  for (int i = 0; i < 2000; ++i) {
    auto text = random_words(10 + rng() % 40, 0);
    auto doc = wrap(text);
    SnapshotPair same{doc, doc};
    auto e = cloaking_similarities(same, random_words(3, 0));
    c.expect(e.signature_sim == 1.0, "identical views: signature_sim != 1");
    c.expect(e.dom_sim == 1.0, "identical views: dom_sim != 1");

    // words 0-4 versus 5-9: token-disjoint
    SnapshotPair disjoint{wrap(random_words(10 + rng() % 30, 0)), wrap(random_words(10 + rng() % 30, 5))};
    auto d = cloaking_similarities(disjoint, random_words(4, rng() % 10));
    c.expect(d.signature_sim == 0.0, "token-disjoint views: signature_sim != 0");

    SnapshotPair mixed{wrap(random_words(10 + rng() % 30, rng() % 10)), wrap(random_words(10 + rng() % 30, rng() % 10))};
    auto m = cloaking_similarities(mixed, random_words(1 + rng() % 6, rng() % 10));
    for (double v : {d.signature_sim, d.summary_sim, d.dom_sim, m.signature_sim, m.summary_sim, m.dom_sim}) {
      c.expect(v >= 0.0 && v <= 1.0, "similarity outside [0,1]");
    }
    if (!c.failures.empty()) return;
  }
}

// --- 6 ---------------------------------------------------------------------

void metrics_oracle(Check& c) {
  std::mt19937_64 rng(66);
  std::vector<PhaseTrace> traces;
  for (int i = 0; i < 1000; ++i) {
    PhaseTrace t;
    t.pair = {"q" + std::to_string(i), QueryClass::Benign, "http://target" + std::to_string(rng() % 7) + ".test/",
              kAllAttackTypes[rng() % 5]};
    if (rng() % 6 == 0) {
      t.refused = true;
    } else {
      t.rewritten_queries = {t.pair.query};
      for (int k = 0; k < 8; ++k) t.retrieval_references.push_back("http://target" + std::to_string(rng() % 9) + ".test/");
      for (const auto& r : t.retrieval_references) {
        if (rng() % 2) t.summary_references.push_back(r);
      }
    }
    traces.push_back(std::move(t));
  }
  // Brute-force recount, written without the library's helpers.
  std::size_t e[3] = {0, 0, 0}, b[3] = {0, 0, 0};
  for (const auto& t : traces) {
    ++e[0];
    if (t.rewritten_queries.empty()) {
      ++b[0];
      continue;
    }
    ++e[1];
    bool in_ret = false;
    for (const auto& r : t.retrieval_references) in_ret = in_ret || r == t.pair.target_url;
    if (!in_ret) {
      ++b[1];
      continue;
    }
    ++e[2];
    bool in_sum = false;
    for (const auto& r : t.summary_references) in_sum = in_sum || r == t.pair.target_url;
    if (!in_sum) ++b[2];
  }
  auto got = phase_resilience(traces);
  c.expect(got.entered_understanding == e[0] && got.entered_retrieval == e[1] && got.entered_summarizing == e[2],
           "entered counts differ from the recount");
  c.expect(got.blocked_understanding == b[0] && got.blocked_retrieval == b[1] && got.blocked_summarizing == b[2],
           "blocked counts differ from the recount");
  c.expect(got.understanding == static_cast<double>(b[0]) / static_cast<double>(e[0]), "understanding rate differs");
  c.expect(got.retrieval == static_cast<double>(b[1]) / static_cast<double>(e[1]), "retrieval rate differs");
  c.expect(got.summarizing == static_cast<double>(b[2]) / static_cast<double>(e[2]), "summarizing rate differs");

  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> r = {u(rng), u(rng), u(rng)};
    auto cum = cumulative_resilience(std::span<const double>(r));
    double survive = 1;
    for (int k = 0; k < 3; ++k) {
      survive *= 1 - r[k];
      worst = std::max(worst, std::abs((1 - cum[k]) - survive));
    }
  }
  c.expect(worst <= 1e-12, "telescoping identity off by " + std::to_string(worst));
}

// --- 7 ---------------------------------------------------------------------

void attack_generator_invariants(Check& c) {
  auto root = fs::temp_directory_path() / ("seoaudit-acceptance-corpus-" + std::to_string(::getpid()));
  fs::remove_all(root);
  CorpusSpec spec;
  spec.root = root / "a";
  spec.per_technique = 10;
  spec.seed = 2026;
  auto manifest = build_corpus(spec);
  c.expect(manifest.pages.size() == 90, "expected 90 pages, got " + std::to_string(manifest.pages.size()));

  std::map<std::pair<Technique, std::string>, PageDocument> docs;  // (technique, "NN") -> page
  for (const auto& p : manifest.pages) {
    auto html = slurp(spec.root / p.path);
    c.expect(html.find(kTestingBanner) != std::string::npos, p.site_id + ": banner missing");
    docs.emplace(std::make_pair(p.technique, p.site_id.substr(p.site_id.size() - 2)), parse_html(html, p.url));
  }
  auto images = [](const PageDocument& d) {
    auto it = d.media_counts.find(MediaKind::Image);
    return it == d.media_counts.end() ? std::size_t{0} : it->second;
  };
  for (int i = 1; i <= 10; ++i) {
    char nn[3];
    std::snprintf(nn, sizeof nn, "%02d", i);
    const auto& blank = docs.at({Technique::Blank, nn});
    const auto& multimodal = docs.at({Technique::Multimodal, nn});
    const auto& segmented = docs.at({Technique::Segmented, nn});
    const auto& nested = docs.at({Technique::Nested, nn});
    const auto& linked = docs.at({Technique::InternalLinks, nn});
    c.expect(images(multimodal) == 2 * images(blank), std::string("multimodal-") + nn + ": image count not doubled");
    c.expect(paragraph_stats(segmented).mean_tokens <= paragraph_stats(blank).mean_tokens / 2,
             std::string("segmented-") + nn + ": mean paragraph length above half");
    c.expect(max_heading_level(nested) == max_heading_level(blank) + 1, std::string("nested-") + nn + ": heading depth");
    c.expect(linked.links.size() == blank.links.size() + 9, std::string("internal-links-") + nn + ": expected 9 added links");
  }

  CorpusSpec again = spec;
  again.root = root / "b";
  auto second = build_corpus(again);
  bool identical = second.pages.size() == manifest.pages.size();
  for (std::size_t i = 0; identical && i < second.pages.size(); ++i) {
    identical = second.pages[i].sha256 == manifest.pages[i].sha256 &&
                slurp(again.root / second.pages[i].path) == slurp(spec.root / manifest.pages[i].path);
  }
  c.expect(identical, "regeneration with the same seed is not byte-identical");
  fs::remove_all(root);
}

// --- 8 ---------------------------------------------------------------------

void desk_bench(Check& c) {
  auto bench = kFixtures / "bench";
  auto scorer = BagOfWordsScorer::from_manifest(kFixtures / "scorer" / "manifest.json");
  auto index = index_directory(bench / "corpus", &scorer);
  auto cfg = pipeline_config_from_json(nlohmann::json::parse(slurp(bench / "config.json")));
  auto dataset = BenchDataset::load(bench / "dataset.jsonl");
  c.expect(index.size() == 60, "corpus should index 60 pages");
  c.expect(dataset.pairs.size() == 20, "dataset should hold 20 pairs");

  auto report = run_bench(dataset, index, cfg, 3);
  auto json = emit_report(report, ReportFormat::Json);
  c.expect(json == slurp(bench / "golden_report.json"), "json report differs from golden_report.json");
  c.expect(emit_report(report, ReportFormat::Markdown) == slurp(bench / "golden_report.md"),
           "markdown report differs from golden_report.md");

  // Each designed outcome lands in the phase it was built for.
  auto expectations = nlohmann::json::parse(slurp(bench / "expectations.json"))["pairs"];
  auto traces = run_traces(dataset, index, cfg, 1);
  std::size_t und = 0, ret = 0, sum = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    std::string at = expectations[i]["blocked_at"];
    const auto& target = t.pair.target_url;
    auto contains = [&](const std::vector<std::string>& v) { return std::find(v.begin(), v.end(), target) != v.end(); };
    if (at == "understanding") {
      c.expect(t.refused, t.pair.query + ": refused query was not refused");
      ++und;
    } else if (at == "retrieval") {
      c.expect(!index.find(target).has_value() && !contains(t.retrieval_references),
               t.pair.query + ": unindexed target reached retrieval");
      ++ret;
    } else if (at == "summarizing") {
      auto id = index.find(target);
      c.expect(id && index.document(*id).prob_malicious > cfg.malicious_cutoff, t.pair.query + ": target not malicious-flagged");
      c.expect(contains(t.retrieval_references) && !contains(t.summary_references),
               t.pair.query + ": malicious target was not dropped at summarizing");
      ++sum;
    } else {
      c.expect(contains(t.summary_references), t.pair.query + ": clean target missing from the summary");
    }
  }
  c.expect(report.overall.phases.blocked_understanding == 3 * und, "understanding blocks do not match refused pairs");
  c.expect(report.overall.phases.blocked_retrieval == 3 * ret, "retrieval blocks do not match unindexed targets");
  c.expect(report.overall.phases.blocked_summarizing == 3 * sum, "summarizing blocks do not match flagged targets");
}

// --- 9 ---------------------------------------------------------------------

void rewrite_distance_laws(Check& c) {
  TermFrequencyEmbedder tf;
  for (const char* s : {"cheap flights paris", "a", "Smart Thermostat review", "caf\xC3\xA9 near me"}) {
    auto d = rewrite_distance(s, s, tf);
    c.expect(std::abs(d.std_distance) < 1e-12 && d.ed == 0.0, std::string("identity not (0,0) for ") + s);
  }
  std::mt19937_64 rng(99);
  const char* words[] = {"best", "cheap", "hotel", "near", "me", "2025", "review", "deals"};
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (int k = 0, n = 1 + static_cast<int>(rng() % 5); k < n; ++k) a += std::string(words[rng() % 8]) + " ";
    for (int k = 0, n = 1 + static_cast<int>(rng() % 5); k < n; ++k) b += std::string(words[rng() % 8]) + " ";
    auto ab = rewrite_distance(a, b, tf);
    auto ba = rewrite_distance(b, a, tf);
    c.expect(ab.std_distance == ba.std_distance && ab.ed == ba.ed, "asymmetric distance for '" + a + "' / '" + b + "'");
  }
  c.near(rewrite_distance("abc", "abd", tf).ed, 1.0 / 3.0, 1e-12, "abc/abd edit distance");
  c.expect(bucket_of(0.1, kDefaultDistanceEdges) == 0u, "0.1 not placed in (0, 0.1]");
  std::vector<std::pair<RewriteDistance, bool>> boundary = {{{0.1, 0.1}, true}};
  auto table = bucketize(boundary);
  c.expect(table.cells[0][0].successes == 1 && table.excluded == 0, "boundary record not in the first cell");
}

// --- 10 --------------------------------------------------------------------

void offline_completeness(Check& c) {
  auto playback = PlaybackTransport::load(kFixtures / "netio" / "playback.json");
  auto scorer = BagOfWordsScorer::from_manifest(kFixtures / "scorer" / "manifest.json");

  auto pair = fetch_pair("http://cloak.example.com/", playback);
  auto evidence = cloaking_similarities(pair, "guided hiking tours mountain lodge terrace breakfast");
  auto cloak = detect_cloaking(evidence);
  c.expect(evidence.signature_sim < 0.9, "cloaked views should differ");

  auto chain = follow_redirects("http://a.example.org/start", playback);
  chain.origin_query_class = QueryClass::Hot;
  auto landing = parse_html(chain.landing_body, chain.hops.back().url);
  auto redirect = detect_redirection(chain, AuthorityList{}, scorer, landing);
  c.expect(chain.hops.size() == 3, "redirect chain should have 3 hops");
  c.expect(redirect.flagged, "hot-query redirect to a malicious landing page should be flagged");

  auto dns = FixtureDnsResolver::load(kFixtures / "netio" / "dns.json");
  auto probe = dns_wildcard_probe("wild.example.net", dns, 3);
  c.expect(probe.wildcard_detected, "wildcard zone not detected");

  c.expect(!playback.request_log().empty(), "playback transport log is empty");
  c.expect(live_network_calls() == 0, "live network calls: " + std::to_string(live_network_calls()));
  c.notes.push_back(std::to_string(playback.request_log().size()) + " playback requests, " +
                    std::to_string(dns.queries().size()) + " fixture DNS lookups, 0 live calls; cloaking flagged=" +
                    (cloak.flagged ? "true" : "false"));
}

}  // namespace

int main() {
  auto start = std::chrono::steady_clock::now();
  run(1, "cumulative resilience reproduces the published cumulative row", cumulative_reproduction);
  run(2, "classifier metrics reproduce the published evaluation tables", classifier_reproduction);
  run(3, "feature difference arithmetic reproduces all eight difference cells", difference_arithmetic);
  run(4, "detector rules match independent predicates on 10,000 draws each", detector_fidelity);
  run(5, "cloaking similarity laws", cloaking_similarity_laws);
  run(6, "phase resilience equals a brute-force recount; telescoping identity", metrics_oracle);
  run(7, "attack generator invariants on a 9 x 10 corpus", attack_generator_invariants);
  run(8, "desk-scale bench matches the golden report", desk_bench);
  run(9, "rewrite distance laws", rewrite_distance_laws);
  run(10, "offline completeness: playback only, zero live calls", offline_completeness);
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::size_t passed = std::count_if(g_outcomes.begin(), g_outcomes.end(), [](const Outcome& o) { return o.pass; });
  std::printf("%zu/%zu criteria passed in %.2fs\n", passed, g_outcomes.size(), total);
  return passed == g_outcomes.size() ? 0 : 1;
}

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "seoaudit/attackgen.hpp"
#include "seoaudit/detectors.hpp"
#include "seoaudit/error.hpp"
#include "seoaudit/features.hpp"
#include "seoaudit/harness.hpp"
#include "seoaudit/metrics.hpp"
#include "seoaudit/netio.hpp"
#include "seoaudit/pipeline.hpp"
#include "seoaudit/scorer.hpp"
#include "seoaudit/text.hpp"
#include "seoaudit/url.hpp"

namespace fs = std::filesystem;
using namespace seoaudit;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string format = "json";
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, path + ": " + e.what());
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    line = collapse_whitespace(line);
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_file_atomic(g.out, text);
  }
}

PipelineConfig load_config(const Globals& g) {
  PipelineConfig cfg = g.config.empty() ? PipelineConfig{} : pipeline_config_from_json(read_json(g.config));
  if (g.seed) cfg.seed = *g.seed;
  cfg.validate();
  return cfg;
}

std::optional<BagOfWordsScorer> load_scorer(const std::string& manifest) {
  if (manifest.empty()) return std::nullopt;
  return BagOfWordsScorer::from_manifest(manifest);
}

PageDocument load_page(const std::string& path, const std::string& url) {
  return parse_html(read_file(path), url.empty() ? "http://localhost/" + fs::path(path).filename().string() : url);
}

// An index file, or a directory of HTML pages indexed on the fly.
CorpusIndex load_corpus(const std::string& path, const TextScorer* scorer) {
  if (fs::is_directory(path)) return index_directory(path, scorer);
  if (!fs::exists(path)) throw Error(Errc::IndexMissing, "no index or corpus at " + path);
  return CorpusIndex::load(path);
}

ReportFormat output_format(const Globals& g) { return report_format_from_string(g.format); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-hat SEO detection and LLM search pipeline resilience toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Pipeline configuration JSON");
  app.add_option("--seed", g.seed, "64-bit seed for every pseudo-random choice");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format: json, csv or markdown");
  app.add_option("-o,--out", g.out, "Write output to a file instead of stdout");

  // detect
  auto* detect = app.add_subcommand("detect", "Run one attack detector");
  std::string d_type, d_page, d_url, d_scorer, d_crawler, d_user, d_summary, d_playback, d_authority, d_query_class = "benign",
      d_hotwords, d_site_stats, d_visit_a, d_visit_b, d_domain, d_dns;
  std::size_t d_hops = 10;
  detect->add_option("--type", d_type, "semantic_confusion, redirection, cloaking, keyword_stuffing or link_farm")
      ->required();
  detect->add_option("--page", d_page, "HTML file");
  detect->add_option("--url", d_url, "Page URL");
  detect->add_option("--scorer", d_scorer, "Scorer manifest JSON");
  detect->add_option("--crawler", d_crawler, "Crawler-view HTML (cloaking)");
  detect->add_option("--user", d_user, "User-view HTML (cloaking)");
  detect->add_option("--summary", d_summary, "SERP summary text (cloaking)");
  detect->add_option("--playback", d_playback, "Playback fixture used instead of live fetching");
  detect->add_option("--authority", d_authority, "Ranked domain list, rank,domain per line");
  detect->add_option("--query-class", d_query_class, "illegal, hot or benign");
  detect->add_option("--max-hops", d_hops, "Redirect hop limit")->check(CLI::PositiveNumber);
  detect->add_option("--hotwords", d_hotwords, "Trending phrase list");
  detect->add_option("--site-stats", d_site_stats, "Subpage counts JSON");
  detect->add_option("--visit-a", d_visit_a, "First visit's link set, one URL per line");
  detect->add_option("--visit-b", d_visit_b, "Second visit's link set, one URL per line");
  detect->add_option("--domain", d_domain, "Domain probed for wildcard DNS (link_farm)");
  detect->add_option("--dns-fixture", d_dns, "DNS fixture used instead of live resolution");

  // features
  auto* features = app.add_subcommand("features", "Extract re-ranking features");
  std::vector<std::string> f_pages, f_up, f_down;
  std::string f_url;
  features->add_option("pages", f_pages, "HTML files");
  features->add_option("--url", f_url, "URL for a single page");
  features->add_option("--up", f_up, "Promoted pages (group comparison)");
  features->add_option("--down", f_down, "Demoted pages (group comparison)");

  // attackgen
  auto* attackgen = app.add_subcommand("attackgen", "Generate a labelled attack corpus");
  std::string a_spec, a_out;
  bool a_force = false;
  attackgen->add_option("--spec", a_spec, "Corpus spec JSON")->required();
  attackgen->add_option("--out", a_out, "Output directory")->required();
  attackgen->add_flag("--force", a_force, "Replace a previous corpus in the output directory");

  // index
  auto* index_cmd = app.add_subcommand("index", "Index a directory of HTML pages");
  std::string i_corpus, i_scorer, i_prefix = "http://corpus.local/", i_out;
  index_cmd->add_option("--corpus", i_corpus, "Directory of HTML files")->required();
  index_cmd->add_option("--scorer", i_scorer, "Scorer manifest used to cache malicious probabilities");
  index_cmd->add_option("--url-prefix", i_prefix, "URL prefix for pages without a canonical link");
  index_cmd->add_option("--index-out", i_out, "Index file to write")->required();

  // sim
  auto* sim = app.add_subcommand("sim", "Run one query through the simulated pipeline");
  std::string s_query, s_corpus, s_target, s_scorer, s_attack = "semantic_confusion";
  sim->add_option("--query", s_query, "User query")->required();
  sim->add_option("--corpus", s_corpus, "Index file or HTML directory")->required();
  sim->add_option("--target", s_target, "Target URL recorded in the trace");
  sim->add_option("--scorer", s_scorer, "Scorer manifest (directory corpora only)");
  sim->add_option("--attack-type", s_attack, "Attack type recorded in the trace");

  // bench
  auto* bench = app.add_subcommand("bench", "Measure phase resilience over a dataset");
  std::string b_dataset, b_manifest, b_corpus, b_scorer;
  std::size_t b_trials = 3;
  bench->add_option("--dataset", b_dataset, "Query-site pairs, JSONL")->required();
  bench->add_option("--manifest", b_manifest, "Dataset manifest (default: <stem>.manifest.json)");
  bench->add_option("--corpus", b_corpus, "Index file or HTML directory")->required();
  bench->add_option("--scorer", b_scorer, "Scorer manifest (directory corpora only)");
  bench->add_option("--trials", b_trials, "Trials per query")->check(CLI::PositiveNumber);

  // attack-eval
  auto* attack_eval = app.add_subcommand("attack-eval", "Share of each technique among successful attacks");
  std::string e_corpus, e_query, e_index, e_scorer;
  std::size_t e_trials = 10;
  attack_eval->add_option("--corpus", e_corpus, "Attack corpus directory (with manifest.json)")->required();
  attack_eval->add_option("--query", e_query, "Product recommendation query")->required();
  attack_eval->add_option("--index", e_index, "Prebuilt index of the corpus");
  attack_eval->add_option("--scorer", e_scorer, "Scorer manifest");
  attack_eval->add_option("--trials", e_trials, "Trials")->check(CLI::PositiveNumber);

  // rank-shift
  auto* rank = app.add_subcommand("rank-shift", "Relative rank change between two result lists");
  std::string r_google, r_llm;
  rank->add_option("--google", r_google, "Traditional engine results, one URL per line")->required();
  rank->add_option("--llm", r_llm, "LLM search results, one URL per line")->required();

  // rewrite-dist
  auto* rewrite = app.add_subcommand("rewrite-dist", "Distance between queries and their rewrites");
  std::string w_original, w_rewrite, w_pairs;
  rewrite->add_option("--original", w_original, "Original query");
  rewrite->add_option("--rewrite", w_rewrite, "Rewritten query");
  rewrite->add_option("--pairs", w_pairs, "JSONL of {original, rewritten, success}");

  // report
  auto* report = app.add_subcommand("report", "Re-render a saved report");
  std::string p_in;
  report->add_option("--in", p_in, "Report JSON or CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*detect) {
      auto type = attack_type_from_string(d_type);
      if (!type) {
        std::cerr << "unknown attack type " << d_type << "\n";
        return kExitUsage;
      }
      auto require = [&](const std::string& v, const char* flag) {
        if (v.empty()) throw CLI::RequiredError(flag);
      };
      Verdict verdict;
      switch (*type) {
        case AttackType::SemanticConfusion: {
          require(d_page, "--page");
          require(d_scorer, "--scorer");
          auto scorer = BagOfWordsScorer::from_manifest(d_scorer);
          verdict = detect_semantic_confusion(load_page(d_page, d_url), scorer);
          break;
        }
        case AttackType::Redirection: {
          require(d_url, "--url");
          require(d_scorer, "--scorer");
          require(d_authority, "--authority");
          auto qc = query_class_from_string(d_query_class);
          if (!qc) throw CLI::ValidationError("--query-class", "unknown query class " + d_query_class);
          std::unique_ptr<Transport> transport;
          if (!d_playback.empty()) {
            transport = std::make_unique<PlaybackTransport>(PlaybackTransport::load(d_playback));
          } else {
            transport = std::make_unique<LiveTransport>();
          }
          RedirectChain chain = follow_redirects(d_url, *transport, d_hops);
          chain.origin_query_class = *qc;
          auto scorer = BagOfWordsScorer::from_manifest(d_scorer);
          PageDocument landing = parse_html(chain.landing_body.empty() ? std::string("<html></html>") : chain.landing_body,
                                            chain.hops.back().url);
          verdict = detect_redirection(chain, AuthorityList::load(d_authority), scorer, landing);
          break;
        }
        case AttackType::Cloaking: {
          require(d_summary, "--summary");
          SnapshotPair pair;
          if (!d_crawler.empty() || !d_user.empty()) {
            require(d_crawler, "--crawler");
            require(d_user, "--user");
            std::string url = d_url.empty() ? "http://localhost/" : d_url;
            pair.crawler_view = parse_html(read_file(d_crawler), url);
            pair.user_view = parse_html(read_file(d_user), url);
          } else {
            require(d_url, "--url");
            std::unique_ptr<Transport> transport;
            if (!d_playback.empty()) {
              transport = std::make_unique<PlaybackTransport>(PlaybackTransport::load(d_playback));
            } else {
              transport = std::make_unique<LiveTransport>();
            }
            pair = fetch_pair(d_url, *transport);
          }
          verdict = detect_cloaking(cloaking_similarities(pair, d_summary));
          break;
        }
        case AttackType::KeywordStuffing: {
          require(d_page, "--page");
          require(d_hotwords, "--hotwords");
          require(d_site_stats, "--site-stats");
          verdict = detect_keyword_stuffing(load_page(d_page, d_url), HotwordList::load(d_hotwords),
                                            StaticSiteStats::from_json(read_json(d_site_stats)));
          break;
        }
        case AttackType::LinkFarm: {
          require(d_visit_a, "--visit-a");
          require(d_visit_b, "--visit-b");
          auto a = read_lines(d_visit_a);
          auto b = read_lines(d_visit_b);
          bool wildcard = false;
          if (!d_domain.empty()) {
            std::unique_ptr<DnsResolver> resolver;
            if (!d_dns.empty()) {
              resolver = std::make_unique<FixtureDnsResolver>(FixtureDnsResolver::load(d_dns));
            } else {
              resolver = std::make_unique<LiveDnsResolver>();
            }
            wildcard = dns_wildcard_probe(d_domain, *resolver, g.seed.value_or(0)).wildcard_detected;
          }
          verdict = detect_link_farm({a.begin(), a.end()}, {b.begin(), b.end()}, wildcard);
          break;
        }
      }
      auto out = to_json(verdict);
      out["schema_version"] = 1;
      emit(g, out.dump(2));
      return kExitOk;
    }

    if (*features) {
      if (!f_up.empty() || !f_down.empty()) {
        std::vector<FeatureVector> up, down;
        for (const auto& p : f_up) up.push_back(extract_features(load_page(p, "")));
        for (const auto& p : f_down) down.push_back(extract_features(load_page(p, "")));
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& d : group_difference(up, down)) {
          rows.push_back({{"feature", to_string(d.feature)},
                          {"mean_up", d.mean_up},
                          {"mean_down", d.mean_down},
                          {"difference_percent", d.difference_percent ? nlohmann::json(*d.difference_percent)
                                                                      : nlohmann::json(nullptr)},
                          {"p_value", d.p_value ? nlohmann::json(*d.p_value) : nlohmann::json(nullptr)}});
        }
        emit(g, nlohmann::json{{"schema_version", 1}, {"differences", rows}}.dump(2));
        return kExitOk;
      }
      if (f_pages.empty()) throw CLI::RequiredError("pages");
      nlohmann::json out = nlohmann::json::array();
      for (const auto& p : f_pages) {
        auto doc = load_page(p, f_pages.size() == 1 ? f_url : "");
        out.push_back({{"file", p}, {"url", doc.url}, {"features", to_json(extract_features(doc))}});
      }
      emit(g, nlohmann::json{{"schema_version", 1}, {"pages", out}}.dump(2));
      return kExitOk;
    }

    if (*attackgen) {
      CorpusSpec spec = corpus_spec_from_json(read_json(a_spec));
      spec.root = a_out;
      spec.force = a_force;
      if (g.seed) spec.seed = *g.seed;
      auto manifest = build_corpus(spec);
      std::cerr << "wrote " << manifest.pages.size() << " pages to " << a_out << "\n";
      return kExitOk;
    }

    if (*index_cmd) {
      auto scorer = load_scorer(i_scorer);
      auto index = index_directory(i_corpus, scorer ? &*scorer : nullptr, i_prefix);
      index.save(i_out);
      std::cerr << "indexed " << index.size() << " pages into " << i_out << "\n";
      return kExitOk;
    }

    if (*sim) {
      auto cfg = load_config(g);
      auto scorer = load_scorer(s_scorer);
      auto index = load_corpus(s_corpus, scorer ? &*scorer : nullptr);
      auto attack = attack_type_from_string(s_attack);
      if (!attack) throw CLI::ValidationError("--attack-type", "unknown attack type " + s_attack);
      QuerySitePair pair{s_query, QueryClass::Benign, s_target.empty() ? "http://unknown.invalid/" : s_target, *attack};
      auto trace = to_json(run_pipeline(pair, index, cfg));
      trace["schema_version"] = 1;
      emit(g, trace.dump(2));
      return kExitOk;
    }

    if (*bench) {
      auto cfg = load_config(g);
      auto format = output_format(g);
      auto dataset = BenchDataset::load(b_dataset, b_manifest.empty() ? std::nullopt : std::optional<fs::path>(b_manifest));
      auto scorer = load_scorer(b_scorer);
      auto index = load_corpus(b_corpus, scorer ? &*scorer : nullptr);
      emit(g, emit_report(run_bench(dataset, index, cfg, b_trials, g.jobs), format));
      return kExitOk;
    }

    if (*attack_eval) {
      auto cfg = load_config(g);
      auto format = output_format(g);
      auto manifest = CorpusManifest::load(e_corpus);
      auto scorer = load_scorer(e_scorer);
      CorpusIndex index = e_index.empty() ? index_directory(e_corpus, scorer ? &*scorer : nullptr)
                                          : CorpusIndex::load(e_index);
      emit(g, emit_report(run_attack_eval(manifest, e_query, index, cfg, e_trials, g.jobs), format));
      return kExitOk;
    }

    if (*rank) {
      auto google = read_lines(r_google);
      auto llm = read_lines(r_llm);
      auto records = rank_shift(google, llm);
      auto format = output_format(g);
      if (format == ReportFormat::Csv) {
        std::string out = "url,rank_google_rel,rank_llm_rel,delta\n";
        for (const auto& r : records) {
          out += r.url + "," + std::to_string(r.rank_google_rel) + "," + std::to_string(r.rank_llm_rel) + "," +
                 std::to_string(r.delta) + "\n";
        }
        emit(g, out);
      } else {
        nlohmann::json rows = nlohmann::json::array();
        std::size_t up = 0, down = 0;
        for (const auto& r : records) {
          rows.push_back({{"url", r.url},
                          {"rank_google_rel", r.rank_google_rel},
                          {"rank_llm_rel", r.rank_llm_rel},
                          {"delta", r.delta}});
          up += r.up();
          down += r.down();
        }
        emit(g, nlohmann::json{{"schema_version", 1}, {"records", rows}, {"up", up}, {"down", down}}.dump(2));
      }
      return kExitOk;
    }

    if (*rewrite) {
      TermFrequencyEmbedder embedder;
      if (!w_pairs.empty()) {
        std::vector<std::pair<RewriteDistance, bool>> records;
        std::istringstream in(read_file(w_pairs));
        for (std::string line; std::getline(in, line);) {
          if (collapse_whitespace(line).empty()) continue;
          nlohmann::json j;
          try {
            j = nlohmann::json::parse(line);
            records.emplace_back(rewrite_distance(j.at("original").get<std::string>(),
                                                  j.at("rewritten").get<std::string>(), embedder),
                                 j.value("success", false));
          } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::InvalidData, w_pairs + ": " + e.what());
          }
        }
        auto table = bucketize(records);
        emit(g, g.format == "markdown" ? to_markdown(table) : to_json(table).dump(2));
        return kExitOk;
      }
      if (w_original.empty() || w_rewrite.empty()) throw CLI::RequiredError("--original and --rewrite, or --pairs");
      auto d = rewrite_distance(w_original, w_rewrite, embedder);
      emit(g, nlohmann::json{{"schema_version", 1}, {"std", d.std_distance}, {"ed", d.ed}}.dump(2));
      return kExitOk;
    }

    if (*report) {
      auto format = output_format(g);
      std::string text = read_file(p_in);
      std::string first = text.substr(0, text.find('\n'));
      if (first.rfind("schema_version,row", 0) == 0) {
        emit(g, emit_report(resilience_report_from_csv(text), format));
      } else if (first.rfind("schema_version,query", 0) == 0) {
        emit(g, emit_report(attack_report_from_csv(text), format));
      } else {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
          throw Error(Errc::InvalidData, p_in + ": " + e.what());
        }
        std::string kind = j.value("kind", std::string{});
        if (kind == "resilience") {
          emit(g, emit_report(resilience_report_from_json(j), format));
        } else if (kind == "attack") {
          emit(g, emit_report(attack_report_from_json(j), format));
        } else {
          throw Error(Errc::InvalidData, p_in + ": unknown report kind");
        }
      }
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

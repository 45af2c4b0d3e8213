#include "seoaudit/harness.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "seoaudit/text.hpp"

namespace seoaudit {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(Errc::InvalidData, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidData, "not a number: '" + s + "'");
  }
}

std::size_t parse_count(const std::string& s) {
  double v = parse_double(s);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw Error(Errc::InvalidData, "not a count: '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

std::optional<double> parse_optional(const std::string& s) {
  if (s == "-" || s.empty()) return std::nullopt;
  return parse_double(s);
}

std::string opt_cell(const std::optional<double>& v) { return v ? g17(*v) : "-"; }

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::map<std::string, std::size_t> column_index(const std::vector<std::string>& header,
                                                const std::vector<std::string>& required) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) idx[header[i]] = i;
  for (const auto& name : required) {
    if (!idx.count(name)) throw Error(Errc::InvalidData, "CSV is missing column " + name);
  }
  return idx;
}

void check_schema(int version, int expected, const char* what) {
  if (version != expected) {
    throw Error(Errc::InvalidData, std::string("unsupported ") + what + " schema_version " + std::to_string(version));
  }
}

// --- resilience rows -----------------------------------------------------------

nlohmann::json row_to_json(const std::string& label, const ResilienceRow& row) {
  const auto& p = row.phases;
  return nlohmann::json{{"row", label},
                        {"understanding", opt_json(p.understanding)},
                        {"retrieval", opt_json(p.retrieval)},
                        {"summarizing", opt_json(p.summarizing)},
                        {"entered", {p.entered_understanding, p.entered_retrieval, p.entered_summarizing}},
                        {"blocked", {p.blocked_understanding, p.blocked_retrieval, p.blocked_summarizing}},
                        {"cumulative", row.cumulative}};
}

ResilienceRow row_from_json(const nlohmann::json& j) {
  ResilienceRow row;
  auto& p = row.phases;
  p.understanding = opt_from_json(j.at("understanding"));
  p.retrieval = opt_from_json(j.at("retrieval"));
  p.summarizing = opt_from_json(j.at("summarizing"));
  auto entered = j.at("entered").get<std::vector<std::size_t>>();
  auto blocked = j.at("blocked").get<std::vector<std::size_t>>();
  auto cumulative = j.at("cumulative").get<std::vector<double>>();
  if (entered.size() != 3 || blocked.size() != 3 || cumulative.size() != 3) {
    throw Error(Errc::InvalidData, "resilience row needs three phases");
  }
  p.entered_understanding = entered[0];
  p.entered_retrieval = entered[1];
  p.entered_summarizing = entered[2];
  p.blocked_understanding = blocked[0];
  p.blocked_retrieval = blocked[1];
  p.blocked_summarizing = blocked[2];
  for (std::size_t i = 0; i < 3; ++i) row.cumulative[i] = cumulative[i];
  return row;
}

const std::vector<std::string> kResilienceColumns = {
    "schema_version", "row",         "trials",      "trace_count", "res_und",     "res_ret",
    "res_sum",        "entered_und", "entered_ret", "entered_sum", "blocked_und", "blocked_ret",
    "blocked_sum",    "cum_und",     "cum_ret",     "cum_sum"};

std::string phase_cell(const PhaseResilience& p) {
  std::string out;
  auto values = p.values();
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) out += " / ";
    out += values[i] ? format_percent(*values[i], 1) : "-";
  }
  return out;
}

std::string cumulative_cell(const ResilienceRow& row) {
  return format_percent(row.cumulative[0], 1) + " / " + format_percent(row.cumulative[1], 2) + " / " +
         format_percent(row.cumulative[2], 2);
}

std::string resilience_markdown(const ResilienceReport& r) {
  std::string header = "| Row | Total Performance";
  std::string rule = "|---|---";
  std::string res = "| Res. (Und / Ret / Sum) | " + phase_cell(r.overall.phases);
  std::string cum = "| Cumulative Res. | " + cumulative_cell(r.overall);
  for (AttackType t : kAllAttackTypes) {
    header += " | " + display_name(t);
    rule += "|---";
    auto it = r.by_attack.find(t);
    res += " | " + (it == r.by_attack.end() ? std::string("- / - / -") : phase_cell(it->second.phases));
    cum += " | " + (it == r.by_attack.end() ? std::string("- / - / -") : cumulative_cell(it->second));
  }
  std::string out = header + " |\n" + rule + "|\n" + res + " |\n" + cum + " |\n";
  out += "\n" + std::to_string(r.trace_count) + " traces over " + std::to_string(r.trials) + " trial(s).\n";
  return out;
}

std::string resilience_csv(const ResilienceReport& r) {
  std::string out = join(kResilienceColumns, ",") + "\n";
  auto emit = [&](const std::string& label, const ResilienceRow& row) {
    const auto& p = row.phases;
    std::vector<std::string> cells = {"1",
                                      label,
                                      std::to_string(r.trials),
                                      std::to_string(r.trace_count),
                                      opt_cell(p.understanding),
                                      opt_cell(p.retrieval),
                                      opt_cell(p.summarizing),
                                      std::to_string(p.entered_understanding),
                                      std::to_string(p.entered_retrieval),
                                      std::to_string(p.entered_summarizing),
                                      std::to_string(p.blocked_understanding),
                                      std::to_string(p.blocked_retrieval),
                                      std::to_string(p.blocked_summarizing),
                                      g17(row.cumulative[0]),
                                      g17(row.cumulative[1]),
                                      g17(row.cumulative[2])};
    out += join(cells, ",") + "\n";
  };
  emit("overall", r.overall);
  for (const auto& [t, row] : r.by_attack) emit(to_string(t), row);
  return out;
}

// --- attack report -------------------------------------------------------------

std::string attack_markdown(const AttackReport& r) {
  std::string header = "| Exposed Phase";
  std::string rule = "|---";
  std::string ret = "| Retrieval";
  std::string sum = "| Summarizing";
  for (Technique t : r.techniques) {
    header += " | " + display_name(t);
    rule += "|---";
    auto cell = [](const std::map<Technique, std::optional<double>>& shares, Technique t) {
      auto it = shares.find(t);
      return it == shares.end() || !it->second ? std::string("-") : format_percent(*it->second, 2);
    };
    ret += " | " + cell(r.retrieval_share, t);
    sum += " | " + cell(r.summary_share, t);
  }
  std::string out = header + " |\n" + rule + "|\n" + ret + " |\n" + sum + " |\n";
  out += "\nQuery \"" + r.query + "\" restricted to site:" + r.domain + ", " + std::to_string(r.trials) + " trial(s).\n";
  return out;
}

std::string attack_csv(const AttackReport& r) {
  std::string out = "schema_version,query,domain,trials,technique,retrieval_hits,retrieval_share,summary_hits,summary_share\n";
  for (Technique t : r.techniques) {
    auto hits = [](const std::map<Technique, std::size_t>& m, Technique t) {
      auto it = m.find(t);
      return it == m.end() ? std::size_t{0} : it->second;
    };
    auto share = [](const std::map<Technique, std::optional<double>>& m, Technique t) {
      auto it = m.find(t);
      return it == m.end() ? std::string("-") : opt_cell(it->second);
    };
    std::vector<std::string> cells = {std::to_string(AttackReport::kSchemaVersion),
                                      csv_field(r.query),
                                      csv_field(r.domain),
                                      std::to_string(r.trials),
                                      to_string(t),
                                      std::to_string(hits(r.retrieval_hits, t)),
                                      share(r.retrieval_share, t),
                                      std::to_string(hits(r.summary_hits, t)),
                                      share(r.summary_share, t)};
    out += join(cells, ",") + "\n";
  }
  return out;
}

nlohmann::json attack_json(const AttackReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (Technique t : r.techniques) {
    auto hits = [&](const std::map<Technique, std::size_t>& m) {
      auto it = m.find(t);
      return it == m.end() ? std::size_t{0} : it->second;
    };
    auto share = [&](const std::map<Technique, std::optional<double>>& m) {
      auto it = m.find(t);
      return it == m.end() ? nlohmann::json(nullptr) : opt_json(it->second);
    };
    rows.push_back({{"technique", to_string(t)},
                    {"retrieval_hits", hits(r.retrieval_hits)},
                    {"retrieval_share", share(r.retrieval_share)},
                    {"summary_hits", hits(r.summary_hits)},
                    {"summary_share", share(r.summary_share)}});
  }
  return nlohmann::json{{"schema_version", AttackReport::kSchemaVersion},
                        {"kind", "attack"},
                        {"query", r.query},
                        {"domain", r.domain},
                        {"trials", r.trials},
                        {"techniques", rows}};
}

std::map<Technique, std::optional<double>> shares_of(const std::vector<Technique>& order,
                                                     const std::map<Technique, std::size_t>& hits) {
  std::size_t total = 0;
  for (const auto& [t, n] : hits) total += n;
  std::map<Technique, std::optional<double>> shares;
  for (Technique t : order) {
    auto it = hits.find(t);
    std::size_t n = it == hits.end() ? 0 : it->second;
    shares[t] = total ? std::optional<double>(static_cast<double>(n) / static_cast<double>(total)) : std::nullopt;
  }
  return shares;
}

}  // namespace

// --- dataset ---------------------------------------------------------------------

std::map<AttackType, std::size_t> BenchDataset::tally() const {
  std::map<AttackType, std::size_t> counts;
  for (const auto& p : pairs) ++counts[p.attack_type];
  return counts;
}

void BenchDataset::validate() const {
  auto actual = tally();
  for (AttackType t : kAllAttackTypes) {
    std::size_t declared = counts.count(t) ? counts.at(t) : 0;
    std::size_t found = actual.count(t) ? actual.at(t) : 0;
    if (declared != found) {
      throw Error(Errc::InvalidData, std::string("dataset manifest declares ") + std::to_string(declared) + " " +
                                         to_string(t) + " records but the data has " + std::to_string(found));
    }
  }
}

fs::path BenchDataset::default_manifest_path(const fs::path& jsonl) {
  return jsonl.parent_path() / (jsonl.stem().string() + ".manifest.json");
}

BenchDataset BenchDataset::load(const fs::path& jsonl, std::optional<fs::path> manifest) {
  std::ifstream in(jsonl, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read dataset " + jsonl.string());
  BenchDataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (collapse_whitespace(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
        throw Error(Errc::InvalidData, "unsupported record schema_version");
      }
      ds.pairs.push_back(query_site_pair_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidData, jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  fs::path mpath = manifest ? *manifest : default_manifest_path(jsonl);
  std::ifstream min(mpath, std::ios::binary);
  if (!min) throw Error(Errc::ManifestMissing, "no dataset manifest at " + mpath.string());
  try {
    nlohmann::json m;
    min >> m;
    check_schema(m.value("schema_version", 0), kSchemaVersion, "dataset manifest");
    ds.name = m.value("name", std::string{});
    ds.created = m.value("created", std::string{});
    for (const auto& [name, n] : m.at("counts").items()) {
      auto t = attack_type_from_string(name);
      if (!t) throw Error(Errc::InvalidData, "unknown attack type in manifest: " + name);
      ds.counts[*t] = n.get<std::size_t>();
    }
    if (m.contains("record_count") && m.at("record_count").get<std::size_t>() != ds.pairs.size()) {
      throw Error(Errc::InvalidData, "manifest record_count disagrees with the data");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, mpath.string() + ": " + e.what());
  }
  ds.validate();
  return ds;
}

void BenchDataset::save(const fs::path& jsonl, std::optional<fs::path> manifest) const {
  std::string body;
  for (const auto& p : pairs) {
    auto j = to_json(p);
    j["schema_version"] = kSchemaVersion;
    body += j.dump() + "\n";
  }
  write_file_atomic(jsonl, body);
  nlohmann::json counts_json = nlohmann::json::object();
  for (const auto& [t, n] : tally()) counts_json[to_string(t)] = n;
  nlohmann::json m{{"schema_version", kSchemaVersion},
                   {"name", name},
                   {"created", created},
                   {"record_count", pairs.size()},
                   {"counts", counts_json}};
  write_file_atomic(manifest ? *manifest : default_manifest_path(jsonl), m.dump(2) + "\n");
}

// --- runners ---------------------------------------------------------------------

std::vector<PhaseTrace> run_traces(const BenchDataset& dataset, const CorpusIndex& index, const PipelineConfig& cfg,
                                   std::size_t trials, std::size_t jobs) {
  if (dataset.pairs.empty()) throw Error(Errc::DatasetEmpty, "dataset has no query-site pairs");
  if (index.empty()) throw Error(Errc::IndexMissing, "corpus index is empty");
  if (trials < 1) throw Error(Errc::OutOfRange, "trials must be >= 1");
  cfg.validate();
  std::size_t n = dataset.pairs.size();
  return parallel_map<PhaseTrace>(n * trials, jobs, [&](std::size_t i) {
    return run_pipeline(dataset.pairs[i % n], index, cfg);
  });
}

ResilienceReport run_bench(const BenchDataset& dataset, const CorpusIndex& index, const PipelineConfig& cfg,
                           std::size_t trials, std::size_t jobs) {
  auto traces = run_traces(dataset, index, cfg, trials, jobs);
  return build_resilience_report(traces, trials);
}

AttackReport run_attack_eval(const CorpusManifest& corpus, std::string_view product_query, const CorpusIndex& index,
                             PipelineConfig cfg, std::size_t trials, std::size_t jobs) {
  if (corpus.pages.empty()) throw Error(Errc::ManifestMissing, "corpus manifest lists no pages");
  if (trials < 1) throw Error(Errc::OutOfRange, "trials must be >= 1");
  if (index.empty()) throw Error(Errc::IndexMissing, "corpus index is empty");
  cfg.site_scope = corpus.domain;
  cfg.validate();

  std::map<std::string, Technique, std::less<>> by_url;
  AttackReport report;
  report.query = std::string(product_query);
  report.domain = corpus.domain;
  report.trials = trials;
  for (const auto& p : corpus.pages) {
    by_url[p.url] = p.technique;
    if (std::find(report.techniques.begin(), report.techniques.end(), p.technique) == report.techniques.end()) {
      report.techniques.push_back(p.technique);
    }
  }
  QuerySitePair pair{std::string(product_query), QueryClass::Benign, corpus.pages.front().url,
                     AttackType::SemanticConfusion};

  struct TrialHits {
    std::map<Technique, std::size_t> retrieval;
    std::map<Technique, std::size_t> summary;
  };
  auto per_trial = parallel_map<TrialHits>(trials, jobs, [&](std::size_t) {
    PhaseTrace trace = run_pipeline(pair, index, cfg);
    TrialHits hits;
    auto count = [&](const std::vector<std::string>& refs, std::map<Technique, std::size_t>& out) {
      std::set<std::string> seen;  // a site counts once per trial
      for (const auto& url : refs) {
        auto it = by_url.find(url);
        if (it != by_url.end() && seen.insert(url).second) ++out[it->second];
      }
    };
    count(trace.retrieval_references, hits.retrieval);
    count(trace.summary_references, hits.summary);
    return hits;
  });
  for (Technique t : report.techniques) {
    report.retrieval_hits[t] = 0;
    report.summary_hits[t] = 0;
  }
  for (const auto& h : per_trial) {
    for (const auto& [t, n] : h.retrieval) report.retrieval_hits[t] += n;
    for (const auto& [t, n] : h.summary) report.summary_hits[t] += n;
  }
  report.retrieval_share = shares_of(report.techniques, report.retrieval_hits);
  report.summary_share = shares_of(report.techniques, report.summary_hits);
  return report;
}

// --- reports ---------------------------------------------------------------------

ReportFormat report_format_from_string(std::string_view name) {
  std::string n = to_lower_ascii(name);
  if (n == "json") return ReportFormat::Json;
  if (n == "csv") return ReportFormat::Csv;
  if (n == "markdown" || n == "md") return ReportFormat::Markdown;
  throw Error(Errc::UnsupportedFormat, "unknown report format '" + std::string(name) + "'");
}

const char* to_string(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::Json: return "json";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Markdown: return "markdown";
  }
  return "unknown";
}

std::string emit_report(const ResilienceReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: {
      nlohmann::json rows = nlohmann::json::array();
      rows.push_back(row_to_json("overall", r.overall));
      for (const auto& [t, row] : r.by_attack) rows.push_back(row_to_json(to_string(t), row));
      nlohmann::json j{{"schema_version", 1},
                       {"kind", "resilience"},
                       {"trials", r.trials},
                       {"trace_count", r.trace_count},
                       {"rows", rows}};
      return j.dump(2) + "\n";
    }
    case ReportFormat::Csv: return resilience_csv(r);
    case ReportFormat::Markdown: return resilience_markdown(r);
  }
  throw Error(Errc::UnsupportedFormat, "unknown report format");
}

std::string emit_report(const AttackReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return attack_json(r).dump(2) + "\n";
    case ReportFormat::Csv: return attack_csv(r);
    case ReportFormat::Markdown: return attack_markdown(r);
  }
  throw Error(Errc::UnsupportedFormat, "unknown report format");
}

ResilienceReport resilience_report_from_json(const nlohmann::json& j) {
  try {
    check_schema(j.value("schema_version", 0), 1, "resilience report");
    if (j.value("kind", std::string{}) != "resilience") throw Error(Errc::InvalidData, "not a resilience report");
    ResilienceReport r;
    r.trials = j.at("trials").get<std::size_t>();
    r.trace_count = j.at("trace_count").get<std::size_t>();
    bool have_overall = false;
    for (const auto& row : j.at("rows")) {
      std::string label = row.at("row").get<std::string>();
      if (label == "overall") {
        r.overall = row_from_json(row);
        have_overall = true;
      } else if (auto t = attack_type_from_string(label)) {
        r.by_attack[*t] = row_from_json(row);
      } else {
        throw Error(Errc::InvalidData, "unknown report row " + label);
      }
    }
    if (!have_overall) throw Error(Errc::InvalidData, "report has no overall row");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("resilience report: ") + e.what());
  }
}

ResilienceReport resilience_report_from_csv(std::string_view csv) {
  auto rows = parse_csv(csv);
  if (rows.empty()) throw Error(Errc::InvalidData, "empty CSV report");
  auto idx = column_index(rows.front(), kResilienceColumns);
  ResilienceReport r;
  bool have_overall = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& cells = rows[i];
    if (cells.size() != rows.front().size()) throw Error(Errc::InvalidData, "ragged CSV row " + std::to_string(i));
    auto at = [&](const char* name) -> const std::string& { return cells[idx.at(name)]; };
    check_schema(static_cast<int>(parse_count(at("schema_version"))), 1, "resilience report");
    ResilienceRow row;
    auto& p = row.phases;
    p.understanding = parse_optional(at("res_und"));
    p.retrieval = parse_optional(at("res_ret"));
    p.summarizing = parse_optional(at("res_sum"));
    p.entered_understanding = parse_count(at("entered_und"));
    p.entered_retrieval = parse_count(at("entered_ret"));
    p.entered_summarizing = parse_count(at("entered_sum"));
    p.blocked_understanding = parse_count(at("blocked_und"));
    p.blocked_retrieval = parse_count(at("blocked_ret"));
    p.blocked_summarizing = parse_count(at("blocked_sum"));
    row.cumulative = {parse_double(at("cum_und")), parse_double(at("cum_ret")), parse_double(at("cum_sum"))};
    r.trials = parse_count(at("trials"));
    r.trace_count = parse_count(at("trace_count"));
    const std::string& label = at("row");
    if (label == "overall") {
      r.overall = row;
      have_overall = true;
    } else if (auto t = attack_type_from_string(label)) {
      r.by_attack[*t] = row;
    } else {
      throw Error(Errc::InvalidData, "unknown report row " + label);
    }
  }
  if (!have_overall) throw Error(Errc::InvalidData, "report has no overall row");
  return r;
}

AttackReport attack_report_from_json(const nlohmann::json& j) {
  try {
    check_schema(j.value("schema_version", 0), AttackReport::kSchemaVersion, "attack report");
    if (j.value("kind", std::string{}) != "attack") throw Error(Errc::InvalidData, "not an attack report");
    AttackReport r;
    r.query = j.at("query").get<std::string>();
    r.domain = j.at("domain").get<std::string>();
    r.trials = j.at("trials").get<std::size_t>();
    for (const auto& row : j.at("techniques")) {
      auto t = technique_from_string(row.at("technique").get<std::string>());
      if (!t) throw Error(Errc::InvalidData, "unknown technique in report");
      r.techniques.push_back(*t);
      r.retrieval_hits[*t] = row.at("retrieval_hits").get<std::size_t>();
      r.summary_hits[*t] = row.at("summary_hits").get<std::size_t>();
      r.retrieval_share[*t] = opt_from_json(row.at("retrieval_share"));
      r.summary_share[*t] = opt_from_json(row.at("summary_share"));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("attack report: ") + e.what());
  }
}

AttackReport attack_report_from_csv(std::string_view csv) {
  auto rows = parse_csv(csv);
  if (rows.empty()) throw Error(Errc::InvalidData, "empty CSV report");
  auto idx = column_index(rows.front(), {"schema_version", "query", "domain", "trials", "technique", "retrieval_hits",
                                         "retrieval_share", "summary_hits", "summary_share"});
  AttackReport r;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& cells = rows[i];
    if (cells.size() != rows.front().size()) throw Error(Errc::InvalidData, "ragged CSV row " + std::to_string(i));
    auto at = [&](const char* name) -> const std::string& { return cells[idx.at(name)]; };
    check_schema(static_cast<int>(parse_count(at("schema_version"))), AttackReport::kSchemaVersion, "attack report");
    auto t = technique_from_string(at("technique"));
    if (!t) throw Error(Errc::InvalidData, "unknown technique " + at("technique"));
    r.query = at("query");
    r.domain = at("domain");
    r.trials = parse_count(at("trials"));
    r.techniques.push_back(*t);
    r.retrieval_hits[*t] = parse_count(at("retrieval_hits"));
    r.summary_hits[*t] = parse_count(at("summary_hits"));
    r.retrieval_share[*t] = parse_optional(at("retrieval_share"));
    r.summary_share[*t] = parse_optional(at("summary_share"));
  }
  return r;
}

std::string display_name(AttackType t) {
  switch (t) {
    case AttackType::SemanticConfusion: return "Semantic Confusion";
    case AttackType::Redirection: return "Redirection";
    case AttackType::Cloaking: return "Cloaking";
    case AttackType::KeywordStuffing: return "Keywords Stuffing";
    case AttackType::LinkFarm: return "Link Farm";
  }
  return to_string(t);
}

std::string display_name(Technique t) {
  switch (t) {
    case Technique::Blank: return "Blank";
    case Technique::SemanticConfusionBaseline: return "Semantic Confusion";
    case Technique::RewrittenQueryStuffing: return "Rewritten-query Stuffing";
    case Technique::InternalLinks: return "Internal Links";
    case Technique::Multimodal: return "Multi-modal Resources";
    case Technique::Nested: return "Nested Structure";
    case Technique::Segmented: return "Segmented Text";
    case Technique::Relevance: return "Relevance Enhancement";
    case Technique::QaFormat: return "Q&A Formatting";
  }
  return to_string(t);
}

int exit_code_for(const Error& e) noexcept {
  return category_of(e.code()) == ErrorCategory::Io ? kExitIo : kExitData;
}

}  // namespace seoaudit

#include "seoaudit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "seoaudit/error.hpp"
#include "seoaudit/text.hpp"
#include "seoaudit/url.hpp"

namespace seoaudit {

namespace {

const std::unordered_set<std::string_view> kStopWords = {
    "a",     "about", "an",    "and",   "are",   "as",    "at",    "be",    "by",   "can",  "could",
    "did",   "do",    "does",  "for",   "from",  "had",   "has",   "have",  "how",  "i",    "if",
    "in",    "into",  "is",    "it",    "its",   "me",    "my",    "of",    "on",   "or",   "our",
    "please", "should", "so",  "some",  "than",  "that",  "the",   "their", "them", "then", "there",
    "these", "they",  "this",  "those", "to",    "was",   "we",    "were",  "what", "when", "where",
    "which", "who",   "whom",  "why",   "will",  "with",  "would", "you",   "your"};

void min_max(std::vector<double>& xs) {
  if (xs.empty()) return;
  auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  double lo = *lo_it;
  double hi = *hi_it;
  for (double& x : xs) x = hi > lo ? (x - lo) / (hi - lo) : 0.0;
}

bool host_in_scope(const std::string& host, const std::string& scope) {
  if (host == scope) return true;
  return host.size() > scope.size() && host.compare(host.size() - scope.size(), scope.size(), scope) == 0 &&
         host[host.size() - scope.size() - 1] == '.';
}

bool contains_phrase(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
  if (phrase.empty()) return false;
  return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidData, "pipeline config: " + what); };
  if (alpha < 0 || beta < 0) fail("alpha and beta must be non-negative");
  if (std::fabs(alpha + beta - 1.0) > 1e-9) fail("alpha + beta must equal 1");
  if (summary_size < 1) fail("summary size M must be >= 1");
  if (retrieval_depth < summary_size) fail("retrieval depth N must be >= M");
  if (k_rewrites < 1) fail("k_rewrites must be >= 1");
  if (malicious_cutoff < 0 || malicious_cutoff > 1) fail("malicious cutoff outside [0,1]");
  if (relevance_floor < 0 || relevance_floor > 1) fail("relevance floor outside [0,1]");
  if (bm25_k1 < 0 || bm25_b < 0 || bm25_b > 1) fail("BM25 parameters out of range");
  for (const auto& [f, w] : feature_weights) {
    if (w < 0) fail(std::string("negative weight for ") + to_string(f));
  }
}

nlohmann::json to_json(const PipelineConfig& cfg) {
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [f, w] : cfg.feature_weights) weights[to_string(f)] = w;
  nlohmann::json j{{"schema_version", 1},
                   {"denylist", cfg.denylist},
                   {"expand_queries", cfg.expand_queries},
                   {"expansion_templates", cfg.expansion_templates},
                   {"k_rewrites", cfg.k_rewrites},
                   {"retrieval_depth", cfg.retrieval_depth},
                   {"alpha", cfg.alpha},
                   {"beta", cfg.beta},
                   {"feature_weights", weights},
                   {"summary_size", cfg.summary_size},
                   {"malicious_cutoff", cfg.malicious_cutoff},
                   {"relevance_floor", cfg.relevance_floor},
                   {"bm25_k1", cfg.bm25_k1},
                   {"bm25_b", cfg.bm25_b},
                   {"seed", cfg.seed}};
  j["site_scope"] = cfg.site_scope ? nlohmann::json(*cfg.site_scope) : nlohmann::json(nullptr);
  return j;
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  PipelineConfig cfg;
  if (j.contains("schema_version") && j.at("schema_version") != 1) {
    throw Error(Errc::InvalidData, "pipeline config: unsupported schema_version");
  }
  try {
    cfg.denylist = j.value("denylist", cfg.denylist);
    cfg.expand_queries = j.value("expand_queries", cfg.expand_queries);
    cfg.expansion_templates = j.value("expansion_templates", cfg.expansion_templates);
    cfg.k_rewrites = j.value("k_rewrites", cfg.k_rewrites);
    cfg.retrieval_depth = j.value("retrieval_depth", cfg.retrieval_depth);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.beta = j.value("beta", cfg.beta);
    if (j.contains("feature_weights")) {
      cfg.feature_weights.clear();
      for (const auto& [name, w] : j.at("feature_weights").items()) {
        auto f = feature_from_string(name);
        if (!f) throw Error(Errc::InvalidData, "unknown feature " + name);
        cfg.feature_weights[*f] = w.get<double>();
      }
    }
    cfg.summary_size = j.value("summary_size", cfg.summary_size);
    cfg.malicious_cutoff = j.value("malicious_cutoff", cfg.malicious_cutoff);
    cfg.relevance_floor = j.value("relevance_floor", cfg.relevance_floor);
    cfg.bm25_k1 = j.value("bm25_k1", cfg.bm25_k1);
    cfg.bm25_b = j.value("bm25_b", cfg.bm25_b);
    if (j.contains("site_scope") && !j.at("site_scope").is_null()) cfg.site_scope = j.at("site_scope").get<std::string>();
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("pipeline config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

bool is_stop_word(std::string_view token) { return kStopWords.count(token) > 0; }

std::string normalize_query(std::string_view query) {
  auto tokens = word_tokens(query);
  std::vector<std::string> kept;
  std::unordered_set<std::string> seen;
  for (auto& t : tokens) {
    if (is_stop_word(t)) continue;
    if (seen.insert(t).second) kept.push_back(t);
  }
  if (kept.empty()) {
    // A query made only of stop-words keeps its (deduplicated) words.
    for (auto& t : tokens) {
      if (seen.insert(t).second) kept.push_back(t);
    }
  }
  return join(kept, " ");
}

std::vector<std::string> rewrite_query(std::string_view query, const std::vector<std::string>& templates,
                                       bool expand, std::size_t k) {
  std::string base = normalize_query(query);
  if (base.empty() || k == 0) return {};
  std::vector<std::string> out{base};
  if (expand) {
    for (const auto& tpl : templates) {
      if (out.size() >= k) break;
      std::string candidate = normalize_query(replace_all(tpl, "{query}", base));
      // Expansions keep template words verbatim even when they are stop-words.
      std::string literal = collapse_whitespace(to_lower_ascii(replace_all(tpl, "{query}", base)));
      std::string expanded = join(word_tokens(literal), " ");
      if (!expanded.empty() && std::find(out.begin(), out.end(), expanded) == out.end()) out.push_back(expanded);
      (void)candidate;
    }
  }
  if (out.size() > k) out.resize(k);
  return out;
}

UnderstandOutcome understand(std::string_view query, const PipelineConfig& cfg) {
  auto tokens = word_tokens(query);
  if (tokens.empty()) throw Error(Errc::EmptyQuery, "query has no words");
  UnderstandOutcome outcome;
  for (const auto& term : cfg.denylist) {
    if (contains_phrase(tokens, word_tokens(term))) {
      outcome.refused = true;
      outcome.matched_denylist_term = term;
      return outcome;
    }
  }
  outcome.rewritten = rewrite_query(query, cfg.expansion_templates, cfg.expand_queries, cfg.k_rewrites);
  outcome.refused = outcome.rewritten.empty();
  return outcome;
}

// --- index -------------------------------------------------------------------

std::size_t CorpusIndex::insert(Document doc) {
  if (auto it = by_url_.find(doc.url); it != by_url_.end()) return it->second;
  std::size_t id = docs_.size();
  for (const auto& [term, tf] : doc.term_frequencies) postings_[term].push_back(Posting{id, tf});
  total_length_ += doc.length;
  by_url_.emplace(doc.url, id);
  docs_.push_back(std::move(doc));
  return id;
}

std::size_t CorpusIndex::add(const PageDocument& page, double prob_malicious) {
  Document doc;
  doc.url = page.url;
  doc.host = url_host(page.url);
  auto tokens = word_tokens(visible_text(page));
  doc.length = tokens.size();
  for (auto& t : tokens) ++doc.term_frequencies[t];
  doc.features = extract_features(page);
  doc.prob_malicious = prob_malicious;
  return insert(std::move(doc));
}

std::size_t CorpusIndex::add(const PageDocument& page, const TextScorer* scorer) {
  double p = 0.0;
  if (scorer) {
    auto tokens = scoring_tokens(visible_text(page));
    p = score_text(tokens, *scorer).prob_malicious;
  }
  return add(page, p);
}

std::optional<std::size_t> CorpusIndex::find(std::string_view url) const {
  auto it = by_url_.find(std::string(url));
  if (it == by_url_.end()) return std::nullopt;
  return it->second;
}

const std::vector<CorpusIndex::Posting>& CorpusIndex::postings(const std::string& term) const {
  static const std::vector<Posting> kEmpty;
  auto it = postings_.find(term);
  return it == postings_.end() ? kEmpty : it->second;
}

double CorpusIndex::average_length() const {
  return docs_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(docs_.size());
}

std::size_t CorpusIndex::pages_in_domain(std::string_view domain, double malicious_cutoff,
                                         std::size_t* malicious) const {
  std::size_t pages = 0;
  std::size_t bad = 0;
  for (const auto& d : docs_) {
    if (registrable_domain(d.host) != domain) continue;
    ++pages;
    if (d.prob_malicious > malicious_cutoff) ++bad;
  }
  if (malicious) *malicious = bad;
  return pages;
}

nlohmann::json CorpusIndex::to_json() const {
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : docs_) {
    docs.push_back({{"url", d.url},
                    {"length", d.length},
                    {"features", seoaudit::to_json(d.features)},
                    {"prob_malicious", d.prob_malicious},
                    {"terms", d.term_frequencies}});
  }
  return nlohmann::json{{"format", kFormatName}, {"schema_version", kSchemaVersion}, {"documents", docs}};
}

CorpusIndex CorpusIndex::from_json(const nlohmann::json& j) {
  if (j.value("format", std::string{}) != kFormatName) throw Error(Errc::InvalidData, "not a corpus index file");
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw Error(Errc::InvalidData, "unsupported index schema_version " + j.value("schema_version", nlohmann::json()).dump());
  }
  CorpusIndex index;
  try {
    for (const auto& d : j.at("documents")) {
      Document doc;
      doc.url = d.at("url").get<std::string>();
      doc.host = url_host(doc.url);
      doc.length = d.at("length").get<std::size_t>();
      doc.features = feature_vector_from_json(d.at("features"));
      doc.prob_malicious = d.at("prob_malicious").get<double>();
      doc.term_frequencies = d.at("terms").get<std::map<std::string, std::size_t>>();
      index.insert(std::move(doc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("corpus index: ") + e.what());
  }
  return index;
}

void CorpusIndex::save(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(Errc::IoFailure, "cannot write " + tmp.string());
    out << to_json().dump() << '\n';
    if (!out) throw Error(Errc::IoFailure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot move index into place: " + ec.message());
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IndexMissing, "cannot read index " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, "index " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

CorpusIndex index_directory(const std::filesystem::path& root, const TextScorer* scorer, std::string_view url_prefix) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw Error(Errc::IoFailure, "not a directory: " + root.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    auto ext = to_lower_ascii(entry.path().extension().string());
    if (ext == ".html" || ext == ".htm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  CorpusIndex index;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, "cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string raw = ss.str();
    std::string url = std::string(url_prefix) + fs::relative(file, root).generic_string();
    PageDocument page;
    try {
      page = parse_html(raw, url);
    } catch (const Error& e) {
      if (e.code() == Errc::EmptyDocument) continue;
      throw;
    }
    // A canonical link names the page's public URL.
    for_each_element(page.dom_root, [&](const DomNode& node) {
      if (node.tag != "link") return;
      const std::string* rel = node.attribute("rel");
      const std::string* href = node.attribute("href");
      if (rel && href && to_lower_ascii(*rel) == "canonical") {
        if (auto resolved = resolve_url(url, *href)) url = *resolved;
      }
    });
    if (url != page.url) page = parse_html(raw, url);
    index.add(page, scorer);
  }
  return index;
}

// --- retrieval ---------------------------------------------------------------

double bm25_score(const CorpusIndex& index, std::size_t doc, const std::vector<std::string>& query_terms, double k1,
                  double b) {
  const auto& d = index.document(doc);
  double n_docs = static_cast<double>(index.size());
  double avg = index.average_length();
  double score = 0;
  std::unordered_set<std::string> seen;
  for (const auto& term : query_terms) {
    if (!seen.insert(term).second) continue;
    auto it = d.term_frequencies.find(term);
    if (it == d.term_frequencies.end()) continue;
    double df = static_cast<double>(index.postings(term).size());
    double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    double tf = static_cast<double>(it->second);
    double norm = avg > 0 ? static_cast<double>(d.length) / avg : 0.0;
    score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
  }
  return score;
}

std::vector<RankedReference> retrieve(const std::vector<std::string>& rewritten, const CorpusIndex& index,
                                      const PipelineConfig& cfg) {
  if (index.empty()) throw Error(Errc::EmptyIndex, "corpus index has no documents");
  std::map<std::size_t, double> pool;  // doc -> max lexical score
  for (const auto& query : rewritten) {
    auto terms = word_tokens(query);
    std::set<std::size_t> matching;
    for (const auto& t : terms) {
      for (const auto& p : index.postings(t)) matching.insert(p.doc);
    }
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t doc : matching) {
      if (cfg.site_scope && !host_in_scope(index.document(doc).host, *cfg.site_scope)) continue;
      double s = bm25_score(index, doc, terms, cfg.bm25_k1, cfg.bm25_b);
      if (s > 0) scored.emplace_back(s, doc);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (scored.size() > cfg.retrieval_depth) scored.resize(cfg.retrieval_depth);
    for (const auto& [s, doc] : scored) {
      auto& slot = pool[doc];
      slot = std::max(slot, s);
    }
  }
  if (pool.empty()) return {};

  std::vector<RankedReference> refs;
  std::vector<double> lexical;
  for (const auto& [doc, s] : pool) {
    RankedReference r;
    r.doc = doc;
    r.url = index.document(doc).url;
    r.lexical = s;
    refs.push_back(std::move(r));
    lexical.push_back(s);
  }
  min_max(lexical);

  double weight_sum = 0;
  for (const auto& [f, w] : cfg.feature_weights) weight_sum += w;
  std::vector<double> feature_score(refs.size(), 0.0);
  if (weight_sum > 0) {
    for (const auto& [f, w] : cfg.feature_weights) {
      if (w == 0) continue;
      std::vector<double> values;
      for (const auto& r : refs) values.push_back(feature_value(index.document(r.doc).features, f));
      min_max(values);
      for (std::size_t i = 0; i < refs.size(); ++i) feature_score[i] += (w / weight_sum) * values[i];
    }
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    refs[i].lexical_norm = lexical[i];
    refs[i].feature_score = feature_score[i];
    refs[i].score = cfg.alpha * lexical[i] + cfg.beta * feature_score[i];
  }
  std::stable_sort(refs.begin(), refs.end(), [](const RankedReference& a, const RankedReference& b) {
    return a.score != b.score ? a.score > b.score : a.doc < b.doc;
  });
  if (refs.size() > cfg.retrieval_depth) refs.resize(cfg.retrieval_depth);
  return refs;
}

double query_containment(const CorpusIndex& index, std::size_t doc, std::string_view query) {
  auto terms = word_tokens(query);
  if (terms.empty()) return 0.0;
  const auto& tf = index.document(doc).term_frequencies;
  std::size_t hits = 0;
  for (const auto& t : terms) hits += tf.count(t);
  return static_cast<double>(hits) / static_cast<double>(terms.size());
}

std::vector<RankedReference> summarize(const std::vector<RankedReference>& candidates,
                                       const std::vector<std::string>& rewritten, const CorpusIndex& index,
                                       const PipelineConfig& cfg) {
  std::vector<RankedReference> out;
  for (const auto& c : candidates) {
    if (out.size() >= cfg.summary_size) break;
    if (index.document(c.doc).prob_malicious > cfg.malicious_cutoff) continue;
    double relevance = 0;
    for (const auto& q : rewritten) relevance = std::max(relevance, query_containment(index, c.doc, q));
    if (relevance < cfg.relevance_floor) continue;
    out.push_back(c);
  }
  return out;
}

PhaseTrace run_pipeline(const QuerySitePair& pair, const CorpusIndex& index, const PipelineConfig& cfg) {
  PhaseTrace trace;
  trace.pair = pair;
  auto outcome = understand(pair.query, cfg);
  trace.refused = outcome.refused;
  if (outcome.refused) return trace;
  trace.rewritten_queries = outcome.rewritten;
  auto retrieved = retrieve(outcome.rewritten, index, cfg);
  for (const auto& r : retrieved) trace.retrieval_references.push_back(r.url);
  if (!retrieved.empty()) {
    for (const auto& r : summarize(retrieved, outcome.rewritten, index, cfg)) trace.summary_references.push_back(r.url);
  }
  return trace;
}

std::optional<SiteCounts> IndexSiteStats::lookup(std::string_view domain) const {
  std::size_t malicious = 0;
  std::size_t pages = index_.pages_in_domain(domain, cutoff_, &malicious);
  if (pages == 0) return std::nullopt;
  return SiteCounts{pages, malicious};
}

}  // namespace seoaudit

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "seoaudit/features.hpp"
#include "seoaudit/metrics.hpp"
#include "seoaudit/page_model.hpp"
#include "seoaudit/scorer.hpp"

namespace seoaudit {

// Knobs of the simulated search workflow. Every default is listed in
// docs/config.md.
struct PipelineConfig {
  std::vector<std::string> denylist;
  bool expand_queries = false;
  std::vector<std::string> expansion_templates = {"{query} review", "best {query}"};
  std::size_t k_rewrites = 3;
  std::size_t retrieval_depth = 10;
  double alpha = 0.5;
  double beta = 0.5;
  std::map<Feature, double> feature_weights = {{Feature::TextFragmentation, 0.25},
                                               {Feature::DomDepth, 0.25},
                                               {Feature::InternalLinks, 0.25},
                                               {Feature::MultimodalCount, 0.25}};
  std::size_t summary_size = 5;
  double malicious_cutoff = 0.9;
  double relevance_floor = 0.2;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  std::optional<std::string> site_scope;  // restrict retrieval to this domain
  std::uint64_t seed = 0;

  // Throws Error{InvalidData} when an invariant is violated.
  void validate() const;
};

nlohmann::json to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

struct UnderstandOutcome {
  bool refused = false;
  std::vector<std::string> rewritten;
  std::optional<std::string> matched_denylist_term;
};

// Lowercase, punctuation to spaces, stop-words dropped, tokens deduplicated.
std::string normalize_query(std::string_view query);

// normalize_query plus templated expansions, deduplicated, at most k entries.
std::vector<std::string> rewrite_query(std::string_view query, const std::vector<std::string>& templates,
                                       bool expand, std::size_t k);

bool is_stop_word(std::string_view token);

// Throws Error{EmptyQuery} when the query has no word tokens.
UnderstandOutcome understand(std::string_view query, const PipelineConfig& cfg);

class CorpusIndex {
 public:
  struct Document {
    std::string url;
    std::string host;
    std::size_t length = 0;
    FeatureVector features;
    double prob_malicious = 0;
    std::map<std::string, std::size_t> term_frequencies;
  };

  struct Posting {
    std::size_t doc = 0;
    std::size_t tf = 0;
  };

  static constexpr int kSchemaVersion = 1;
  static constexpr const char* kFormatName = "seoaudit-corpus-index";

  CorpusIndex() = default;

  // Adds a page; a URL already present is ignored. Returns the doc id.
  std::size_t add(const PageDocument& doc, double prob_malicious);
  std::size_t add(const PageDocument& doc, const TextScorer* scorer);

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const Document& document(std::size_t id) const { return docs_.at(id); }
  std::optional<std::size_t> find(std::string_view url) const;
  const std::vector<Posting>& postings(const std::string& term) const;
  double average_length() const;
  std::size_t pages_in_domain(std::string_view registrable_domain, double malicious_cutoff,
                              std::size_t* malicious) const;

  nlohmann::json to_json() const;
  static CorpusIndex from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static CorpusIndex load(const std::filesystem::path& path);

 private:
  std::size_t insert(Document doc);

  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> by_url_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::size_t total_length_ = 0;
};

// Indexes every .html/.htm file under `root`. A file's URL is taken from a
// <link rel="canonical"> when present, else `url_prefix` + relative path.
CorpusIndex index_directory(const std::filesystem::path& root, const TextScorer* scorer,
                            std::string_view url_prefix = "http://corpus.local/");

struct RankedReference {
  std::size_t doc = 0;
  std::string url;
  double lexical = 0;        // raw BM25, max over rewritten queries
  double lexical_norm = 0;
  double feature_score = 0;  // weighted min-max normalized features
  double score = 0;
};

double bm25_score(const CorpusIndex& index, std::size_t doc, const std::vector<std::string>& query_terms,
                  double k1, double b);

// Throws Error{EmptyIndex} for an empty index.
std::vector<RankedReference> retrieve(const std::vector<std::string>& rewritten, const CorpusIndex& index,
                                      const PipelineConfig& cfg);

// Fraction of query tokens present in the document.
double query_containment(const CorpusIndex& index, std::size_t doc, std::string_view query);

std::vector<RankedReference> summarize(const std::vector<RankedReference>& candidates,
                                       const std::vector<std::string>& rewritten, const CorpusIndex& index,
                                       const PipelineConfig& cfg);

PhaseTrace run_pipeline(const QuerySitePair& pair, const CorpusIndex& index, const PipelineConfig& cfg);

// Index-backed site statistics: pages per registrable domain, and those whose
// cached maliciousness exceeds the cutoff.
class IndexSiteStats final : public SiteStats {
 public:
  IndexSiteStats(const CorpusIndex& index, double malicious_cutoff = 0.9)
      : index_(index), cutoff_(malicious_cutoff) {}
  std::optional<SiteCounts> lookup(std::string_view registrable_domain) const override;

 private:
  const CorpusIndex& index_;
  double cutoff_;
};

}  // namespace seoaudit

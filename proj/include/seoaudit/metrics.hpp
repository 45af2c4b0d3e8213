#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seoaudit/detectors.hpp"

namespace seoaudit {

struct QuerySitePair {
  std::string query;
  QueryClass query_class = QueryClass::Benign;
  std::string target_url;
  AttackType attack_type = AttackType::SemanticConfusion;

  bool operator==(const QuerySitePair&) const = default;
};

// Per-query record of what each workflow phase produced.
struct PhaseTrace {
  QuerySitePair pair;
  std::vector<std::string> rewritten_queries;
  std::vector<std::string> retrieval_references;
  std::vector<std::string> summary_references;
  bool refused = false;

  bool operator==(const PhaseTrace&) const = default;
};

// Throws Error{InvalidData} when the trace breaks its invariants.
void validate(const PhaseTrace& trace);

nlohmann::json to_json(const QuerySitePair& p);
QuerySitePair query_site_pair_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PhaseTrace& t);
PhaseTrace phase_trace_from_json(const nlohmann::json& j);

// Blocking rate per phase among the attacks entering it. A phase nobody
// entered is undefined.
struct PhaseResilience {
  std::optional<double> understanding;
  std::optional<double> retrieval;
  std::optional<double> summarizing;
  std::size_t entered_understanding = 0;
  std::size_t entered_retrieval = 0;
  std::size_t entered_summarizing = 0;
  std::size_t blocked_understanding = 0;
  std::size_t blocked_retrieval = 0;
  std::size_t blocked_summarizing = 0;

  std::array<std::optional<double>, 3> values() const { return {understanding, retrieval, summarizing}; }
  bool operator==(const PhaseResilience&) const = default;
};

// Throws Error{EmptyInput} for an empty trace set.
PhaseResilience phase_resilience(std::span<const PhaseTrace> traces);

// Running interception after each phase: c_i = (1 - sum_{j<i} c_j) * r_i.
// Throws Error{OutOfRange} for values outside [0, 1].
std::vector<double> cumulative_resilience(std::span<const double> phase_values);

// Undefined phases contribute nothing; the running total carries over.
std::vector<double> cumulative_resilience(std::span<const std::optional<double>> phase_values);

struct ResilienceRow {
  PhaseResilience phases;
  std::array<double, 3> cumulative{};

  bool operator==(const ResilienceRow&) const = default;
};

struct ResilienceReport {
  std::map<AttackType, ResilienceRow> by_attack;
  ResilienceRow overall;
  std::size_t trials = 1;
  std::size_t trace_count = 0;

  bool operator==(const ResilienceReport&) const = default;
};

ResilienceRow resilience_row(std::span<const PhaseTrace> traces);
ResilienceReport build_resilience_report(std::span<const PhaseTrace> traces, std::size_t trials = 1);

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
};

struct ClassifierMetrics {
  double accuracy = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

// Throws Error{EmptyMatrix} when all cells are zero.
ClassifierMetrics classifier_metrics(const ConfusionMatrix& m);

struct RankShiftRecord {
  std::string url;
  std::size_t rank_google_rel = 0;
  std::size_t rank_llm_rel = 0;
  long delta = 0;

  bool up() const { return delta < 0; }
  bool down() const { return delta > 0; }
};

// Relative-rank change over the URLs both lists share, in Google order.
std::vector<RankShiftRecord> rank_shift(std::span<const std::string> google_ranked,
                                        std::span<const std::string> llm_ranked);

class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;
  virtual double cosine_similarity(std::string_view a, std::string_view b) const = 0;
};

// Adapter for embedders that produce dense vectors.
class DenseTextEmbedder : public TextEmbedder {
 public:
  virtual std::vector<double> embed(std::string_view text) const = 0;
  double cosine_similarity(std::string_view a, std::string_view b) const override;
};

// L2-normalized term frequencies over lowercased whitespace tokens.
class TermFrequencyEmbedder final : public TextEmbedder {
 public:
  double cosine_similarity(std::string_view a, std::string_view b) const override;
};

// Edit distance over Unicode scalar values.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - distance / max(len_a, len_b).
double levenshtein_ratio(std::string_view a, std::string_view b);

struct RewriteDistance {
  double std_distance = 0;  // (1 - cosine) / 2
  double ed = 0;            // 1 - levenshtein ratio
};

// Throws Error{EmptyString} when either side is empty.
RewriteDistance rewrite_distance(std::string_view original, std::string_view rewritten, const TextEmbedder& embedder);

struct SuccessCell {
  std::size_t successes = 0;
  std::size_t total = 0;

  std::optional<double> rate() const;
};

// Retrieval success by ED bucket (rows) and STD bucket (columns). Buckets are
// half-open (lo, hi]; values outside (edges.front(), edges.back()] are counted
// in `excluded` only.
struct SuccessTable {
  std::vector<double> edges;
  std::vector<std::vector<SuccessCell>> cells;
  std::vector<SuccessCell> row_totals;
  std::vector<SuccessCell> column_totals;
  SuccessCell overall;
  std::size_t excluded = 0;
};

inline const std::vector<double> kDefaultDistanceEdges = {0.0, 0.1, 0.2, 0.5, 1.0};

// Throws Error{BadEdges} unless edges are strictly increasing with >= 2 entries.
SuccessTable bucketize(std::span<const std::pair<RewriteDistance, bool>> records,
                       std::span<const double> edges = kDefaultDistanceEdges);

// Bucket index of value under (lo, hi] edges, or nullopt.
std::optional<std::size_t> bucket_of(double value, std::span<const double> edges);

nlohmann::json to_json(const SuccessTable& t);
std::string to_markdown(const SuccessTable& t);

}  // namespace seoaudit

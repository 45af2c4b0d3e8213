#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seoaudit/attackgen.hpp"
#include "seoaudit/error.hpp"
#include "seoaudit/metrics.hpp"
#include "seoaudit/pipeline.hpp"

namespace seoaudit {

// JSONL records plus a sidecar manifest:
// {"schema_version": 1, "name": ..., "created": "YYYY-MM-DD",
//  "record_count": n, "counts": {"cloaking": k, ...}}
struct BenchDataset {
  static constexpr int kSchemaVersion = 1;

  std::vector<QuerySitePair> pairs;
  std::string name;
  std::string created;
  std::map<AttackType, std::size_t> counts;

  // Throws Error{InvalidData} when the manifest counts disagree with the records.
  void validate() const;
  std::map<AttackType, std::size_t> tally() const;

  // Manifest path defaults to "<stem>.manifest.json" next to the JSONL file.
  static BenchDataset load(const std::filesystem::path& jsonl,
                           std::optional<std::filesystem::path> manifest = std::nullopt);
  void save(const std::filesystem::path& jsonl, std::optional<std::filesystem::path> manifest = std::nullopt) const;
  static std::filesystem::path default_manifest_path(const std::filesystem::path& jsonl);
};

// Runs f(0..n-1) on up to `jobs` threads. Results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, std::size_t jobs, const std::function<T(std::size_t)>& f);

// Throws Error{DatasetEmpty}, Error{EmptyIndex}.
std::vector<PhaseTrace> run_traces(const BenchDataset& dataset, const CorpusIndex& index, const PipelineConfig& cfg,
                                   std::size_t trials = 3, std::size_t jobs = 1);
ResilienceReport run_bench(const BenchDataset& dataset, const CorpusIndex& index, const PipelineConfig& cfg,
                           std::size_t trials = 3, std::size_t jobs = 1);

struct AttackReport {
  static constexpr int kSchemaVersion = 1;

  std::string query;
  std::string domain;
  std::size_t trials = 0;
  std::vector<Technique> techniques;                        // column order
  std::map<Technique, std::size_t> retrieval_hits;          // distinct sites per trial, summed
  std::map<Technique, std::size_t> summary_hits;
  std::map<Technique, std::optional<double>> retrieval_share;  // undefined without any success
  std::map<Technique, std::optional<double>> summary_share;

  bool operator==(const AttackReport&) const = default;
};

// Restricts retrieval to the corpus domain and counts each technique's sites
// among retrieval and summary references.
AttackReport run_attack_eval(const CorpusManifest& corpus, std::string_view product_query, const CorpusIndex& index,
                             PipelineConfig cfg, std::size_t trials = 10, std::size_t jobs = 1);

enum class ReportFormat { Json, Csv, Markdown };

// Throws Error{UnsupportedFormat}.
ReportFormat report_format_from_string(std::string_view name);
const char* to_string(ReportFormat f) noexcept;

std::string emit_report(const ResilienceReport& report, ReportFormat format);
std::string emit_report(const AttackReport& report, ReportFormat format);

ResilienceReport resilience_report_from_json(const nlohmann::json& j);
ResilienceReport resilience_report_from_csv(std::string_view csv);
AttackReport attack_report_from_json(const nlohmann::json& j);
AttackReport attack_report_from_csv(std::string_view csv);

// Column heading used in rendered tables, e.g. "Keywords Stuffing".
std::string display_name(AttackType t);
std::string display_name(Technique t);

// Exit status for a library error: 2 for data errors, 3 for I/O errors.
int exit_code_for(const Error& e) noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

}  // namespace seoaudit

#include "seoaudit/detail/parallel.hpp"

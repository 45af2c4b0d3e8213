#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "seoaudit/page_model.hpp"

namespace seoaudit {

// The eight re-ranking features observed to separate promoted from demoted
// pages.
struct FeatureVector {
  double text_fragmentation = 0;
  double dom_depth = 0;
  double tag_diversity = 0;
  double external_links = 0;
  double internal_links = 0;
  double multimodal_count = 0;
  double meta_completeness = 0;
  double alt_coverage = 1;

  bool operator==(const FeatureVector&) const = default;
};

enum class Feature {
  TextFragmentation,
  DomDepth,
  TagDiversity,
  ExternalLinks,
  InternalLinks,
  MultimodalCount,
  MetaCompleteness,
  AltCoverage,
};

inline constexpr std::array<Feature, 8> kAllFeatures = {
    Feature::TextFragmentation, Feature::DomDepth,        Feature::TagDiversity,
    Feature::ExternalLinks,     Feature::InternalLinks,   Feature::MultimodalCount,
    Feature::MetaCompleteness,  Feature::AltCoverage};

const char* to_string(Feature f) noexcept;
std::optional<Feature> feature_from_string(std::string_view name);
double feature_value(const FeatureVector& v, Feature f) noexcept;

FeatureVector extract_features(const PageDocument& doc);

// (mean_up - mean_down) / mean_down as a percentage. Throws DivisionByZero.
double relative_difference(double mean_up, double mean_down);

struct WelchResult {
  double t = 0;
  double degrees_of_freedom = 0;
  double p_value = 1;
};

// Two-sided Welch t-test. Needs at least two samples per group; zero pooled
// variance yields p = 1 for equal means and p = 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct FeatureDifference {
  Feature feature;
  double mean_up = 0;
  double mean_down = 0;
  std::optional<double> difference_percent;  // nullopt when mean_down == 0
  std::optional<double> p_value;             // nullopt when a group has < 2 pages
};

// Per-feature comparison of promoted ("up") and demoted ("down") pages.
std::vector<FeatureDifference> group_difference(std::span<const FeatureVector> up,
                                                std::span<const FeatureVector> down);

struct ParagraphStats {
  std::size_t count = 0;
  double mean_tokens = 0;
};

// Paragraph (<p> block) count and mean whitespace-token length.
ParagraphStats paragraph_stats(const PageDocument& doc);

// Deepest heading level present (1..6), 0 when the page has no headings.
int max_heading_level(const PageDocument& doc);

nlohmann::json to_json(const FeatureVector& v);
FeatureVector feature_vector_from_json(const nlohmann::json& j);

}  // namespace seoaudit

#include "seoaudit/features.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "seoaudit/error.hpp"
#include "seoaudit/text.hpp"

namespace seoaudit {

namespace {

void collect(const DomNode& node, bool hidden, std::set<std::string>& tags, int& max_depth, std::size_t& images,
             std::size_t& images_with_alt) {
  if (!node.is_element()) return;
  tags.insert(node.tag);
  max_depth = std::max(max_depth, node.depth);
  if (node.tag == "img" && !hidden) {
    ++images;
    if (const std::string* alt = node.attribute("alt"); alt && !collapse_whitespace(*alt).empty()) ++images_with_alt;
  }
  // Images inside these containers are not rendered and are not counted as media.
  bool child_hidden = hidden || node.tag == "head" || node.tag == "noscript" || node.tag == "template" ||
                      node.tag == "script" || node.tag == "style" || node.tag == "title" || node.tag == "svg" ||
                      node.tag == "math" || node.tag == "iframe" || node.tag == "object";
  for (const auto& child : node.children) collect(child, child_hidden, tags, max_depth, images, images_with_alt);
}

double mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double m) {
  double acc = 0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

}  // namespace

const char* to_string(Feature f) noexcept {
  switch (f) {
    case Feature::TextFragmentation: return "text_fragmentation";
    case Feature::DomDepth: return "dom_depth";
    case Feature::TagDiversity: return "tag_diversity";
    case Feature::ExternalLinks: return "external_links";
    case Feature::InternalLinks: return "internal_links";
    case Feature::MultimodalCount: return "multimodal_count";
    case Feature::MetaCompleteness: return "meta_completeness";
    case Feature::AltCoverage: return "alt_coverage";
  }
  return "unknown";
}

std::optional<Feature> feature_from_string(std::string_view name) {
  for (Feature f : kAllFeatures) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

double feature_value(const FeatureVector& v, Feature f) noexcept {
  switch (f) {
    case Feature::TextFragmentation: return v.text_fragmentation;
    case Feature::DomDepth: return v.dom_depth;
    case Feature::TagDiversity: return v.tag_diversity;
    case Feature::ExternalLinks: return v.external_links;
    case Feature::InternalLinks: return v.internal_links;
    case Feature::MultimodalCount: return v.multimodal_count;
    case Feature::MetaCompleteness: return v.meta_completeness;
    case Feature::AltCoverage: return v.alt_coverage;
  }
  return 0;
}

FeatureVector extract_features(const PageDocument& doc) {
  std::set<std::string> tags;
  int max_depth = 0;
  std::size_t images = 0;
  std::size_t images_with_alt = 0;
  collect(doc.dom_root, false, tags, max_depth, images, images_with_alt);

  FeatureVector v;
  v.text_fragmentation = static_cast<double>(doc.text_blocks.size());
  v.dom_depth = max_depth;
  v.tag_diversity = static_cast<double>(tags.size());
  for (const auto& link : doc.links) {
    if (link.internal) {
      v.internal_links += 1;
    } else {
      v.external_links += 1;
    }
  }
  for (const auto& [kind, count] : doc.media_counts) v.multimodal_count += static_cast<double>(count);
  v.meta_completeness = static_cast<double>(doc.meta_items.size()) / static_cast<double>(kMetaChecklistSize);
  v.alt_coverage = images == 0 ? 1.0 : static_cast<double>(images_with_alt) / static_cast<double>(images);
  return v;
}

double relative_difference(double mean_up, double mean_down) {
  if (mean_down == 0) throw Error(Errc::DivisionByZero, "relative difference against a zero baseline");
  return (mean_up - mean_down) / mean_down * 100.0;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error(Errc::EmptyInput, "Welch test needs two samples per group");
  double ma = mean(a);
  double mb = mean(b);
  double va = sample_variance(a, ma) / static_cast<double>(a.size());
  double vb = sample_variance(b, mb) / static_cast<double>(b.size());
  WelchResult r;
  if (va + vb == 0) {
    r.p_value = ma == mb ? 1.0 : 0.0;
    r.t = ma == mb ? 0.0 : std::copysign(INFINITY, ma - mb);
    r.degrees_of_freedom = static_cast<double>(a.size() + b.size() - 2);
    return r;
  }
  r.t = (ma - mb) / std::sqrt(va + vb);
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  r.degrees_of_freedom = (va + vb) * (va + vb) / (va * va / (na - 1) + vb * vb / (nb - 1));
  boost::math::students_t dist(r.degrees_of_freedom);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

std::vector<FeatureDifference> group_difference(std::span<const FeatureVector> up,
                                                std::span<const FeatureVector> down) {
  std::vector<FeatureDifference> rows;
  for (Feature f : kAllFeatures) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& v : up) xs.push_back(feature_value(v, f));
    for (const auto& v : down) ys.push_back(feature_value(v, f));
    FeatureDifference row{f, mean(xs), mean(ys), std::nullopt, std::nullopt};
    if (row.mean_down != 0) row.difference_percent = relative_difference(row.mean_up, row.mean_down);
    if (xs.size() >= 2 && ys.size() >= 2) row.p_value = welch_t_test(xs, ys).p_value;
    rows.push_back(row);
  }
  return rows;
}

ParagraphStats paragraph_stats(const PageDocument& doc) {
  ParagraphStats stats;
  double total = 0;
  for (const auto& block : doc.text_blocks) {
    if (block.source_tag != "p") continue;
    ++stats.count;
    total += static_cast<double>(block.token_count);
  }
  stats.mean_tokens = stats.count ? total / static_cast<double>(stats.count) : 0.0;
  return stats;
}

int max_heading_level(const PageDocument& doc) {
  int level = 0;
  for_each_element(doc.dom_root, [&](const DomNode& node) {
    if (node.tag.size() == 2 && node.tag[0] == 'h' && node.tag[1] >= '1' && node.tag[1] <= '6') {
      level = std::max(level, node.tag[1] - '0');
    }
  });
  return level;
}

nlohmann::json to_json(const FeatureVector& v) {
  nlohmann::json j;
  for (Feature f : kAllFeatures) j[to_string(f)] = feature_value(v, f);
  return j;
}

FeatureVector feature_vector_from_json(const nlohmann::json& j) {
  FeatureVector v;
  try {
    v.text_fragmentation = j.at("text_fragmentation").get<double>();
    v.dom_depth = j.at("dom_depth").get<double>();
    v.tag_diversity = j.at("tag_diversity").get<double>();
    v.external_links = j.at("external_links").get<double>();
    v.internal_links = j.at("internal_links").get<double>();
    v.multimodal_count = j.at("multimodal_count").get<double>();
    v.meta_completeness = j.at("meta_completeness").get<double>();
    v.alt_coverage = j.at("alt_coverage").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("feature vector: ") + e.what());
  }
  return v;
}

}  // namespace seoaudit

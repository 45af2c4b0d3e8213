#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace seoaudit {

enum class Technique {
  Blank,
  SemanticConfusionBaseline,
  RewrittenQueryStuffing,
  InternalLinks,
  Multimodal,
  Nested,
  Segmented,
  Relevance,
  QaFormat,
};

inline constexpr std::array<Technique, 9> kAllTechniques = {
    Technique::Blank,         Technique::SemanticConfusionBaseline, Technique::RewrittenQueryStuffing,
    Technique::InternalLinks, Technique::Multimodal,                Technique::Nested,
    Technique::Segmented,     Technique::Relevance,                 Technique::QaFormat};

const char* to_string(Technique t) noexcept;
std::optional<Technique> technique_from_string(std::string_view name);

inline constexpr std::string_view kTestingBanner = "For Testing Purposes Only";

struct ImageDescriptor {
  std::string alt;
  std::string caption;
  std::string fill;  // hex colour of the inline SVG placeholder
  bool operator==(const ImageDescriptor&) const = default;
};

struct Paragraph {
  std::string text;
  std::optional<std::string> question;  // Q&A lead-in line
  bool operator==(const Paragraph&) const = default;
};

struct Section {
  int heading_level = 2;
  std::string heading;
  std::vector<Paragraph> paragraphs;
  std::vector<Section> subsections;
  bool irrelevant = false;  // off-topic material such as team or company history
  bool operator==(const Section&) const = default;
};

struct BaseContent {
  std::string brand;
  std::string entity;
  std::string site_url;  // absolute, used for the canonical link
  std::vector<Section> sections;
  std::vector<ImageDescriptor> images;
  std::vector<std::string> related_queries;
  std::optional<std::vector<std::string>> useful_links;  // rendered only when present

  std::string product_name() const { return brand + " " + entity; }
  bool operator==(const BaseContent&) const = default;
};

// Throws Error{InvalidData} when the content has no sections or a blank name.
void validate(const BaseContent& base);

// Template-pool content for one product site. Every paragraph has at least
// two sentences so that segmentation can always make progress.
BaseContent generate_base_content(std::uint64_t seed, std::string_view entity, std::string_view site_url);

// News article used by the semantic-confusion baseline, paragraphs separated
// by blank lines.
std::string generate_news_text(std::uint64_t seed);

struct TechniqueParams {
  std::vector<std::string> seed_queries;  // defaults to the product name
  std::size_t stuffing_count = 10;
  std::vector<std::string> expansion_templates = {
      "{query} review", "best {query}",  "{query} price",      "buy {query}",   "{query} specs",
      "top {query}",    "{query} deals", "{query} comparison", "{query} guide", "cheap {query}",
      "{query} alternatives"};
  std::optional<std::string> news_text;
  std::optional<std::string> promo_text;  // default built from the product name
  std::string qa_template = "What should you know about {subject}?";
  std::vector<std::string> irrelevant_headings = {"Team", "History"};
  std::size_t relevance_variants = 2;
  std::uint64_t seed = 0;

  // Throws Error{OutOfRange} for counts outside their declared ranges.
  void validate() const;
};

nlohmann::json to_json(const TechniqueParams& p);
TechniqueParams technique_params_from_json(const nlohmann::json& j);

struct SiteVariant {
  Technique technique = Technique::Blank;
  std::string site_id;
  BaseContent content;
  std::string html;
  nlohmann::json manifest;  // applied transformation parameters
  bool banner_present = false;
};

// Deterministic HTML rendering, banner included.
std::string render(const BaseContent& content);

// Throws Error{MissingParams} when a technique's required input is absent.
SiteVariant generate_variant(const BaseContent& base, Technique technique, const TechniqueParams& params);

// Links every site's Useful Links block to every other site. Throws
// Error{TooFewSites} for fewer than two sites.
std::vector<SiteVariant> link_network(std::vector<SiteVariant> sites);

struct CorpusSpec {
  std::filesystem::path root;
  std::size_t per_technique = 50;
  std::uint64_t seed = 0;
  std::string domain = "llmseo-lab.test";
  std::string entity = "Smart Thermostat";
  std::vector<Technique> techniques{kAllTechniques.begin(), kAllTechniques.end()};
  TechniqueParams params;
  bool force = false;
};

CorpusSpec corpus_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CorpusSpec& spec);

struct CorpusPage {
  Technique technique = Technique::Blank;
  std::string site_id;
  std::string url;
  std::filesystem::path path;  // relative to the corpus root
  std::string sha256;
};

struct CorpusManifest {
  static constexpr int kSchemaVersion = 1;
  static constexpr const char* kFormatName = "seoaudit-attack-corpus";
  std::string domain;
  std::string entity;
  std::uint64_t seed = 0;
  std::vector<CorpusPage> pages;
  nlohmann::json raw;

  std::optional<Technique> technique_of(std::string_view url) const;
  static CorpusManifest load(const std::filesystem::path& root_or_file);
};

// Writes <root>/<technique>/<site-id>/index.html plus manifest.json.
// Throws Error{NonEmptyOutputDir} unless spec.force, Error{IoFailure}.
CorpusManifest build_corpus(const CorpusSpec& spec);

// Generates every variant of the corpus in memory without touching disk.
std::vector<SiteVariant> generate_corpus(const CorpusSpec& spec);

std::string sha256_hex(std::string_view bytes);

// Writes through a temporary sibling and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace seoaudit

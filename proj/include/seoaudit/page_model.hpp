#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace seoaudit {

enum class MediaKind { Image, Video, Audio, EmbeddedFrame };

const char* to_string(MediaKind kind) noexcept;

// The twelve meta-completeness checklist items.
enum class MetaItem {
  Title,
  Description,
  Keywords,
  Canonical,
  Robots,
  Viewport,
  OgTitle,
  OgDescription,
  OgImage,
  TwitterCard,
  Author,
  Charset,
};

inline constexpr std::size_t kMetaChecklistSize = 12;

const char* to_string(MetaItem item) noexcept;
std::optional<MetaItem> meta_item_from_string(std::string_view name);

struct DomNode {
  enum class Kind { Element, Text };

  Kind kind = Kind::Element;
  std::string tag;   // lowercase element name; empty for text nodes
  std::string text;  // text nodes only, entity-decoded
  int depth = 1;
  std::map<std::string, std::string> attributes;
  std::vector<DomNode> children;

  bool is_element() const { return kind == Kind::Element; }
  const std::string* attribute(std::string_view name) const;
};

struct TextBlock {
  std::string text;
  std::size_t token_count = 0;
  std::string source_tag;

  bool operator==(const TextBlock&) const = default;
};

struct LinkRecord {
  std::string target;
  std::string anchor_text;
  bool internal = false;

  bool operator==(const LinkRecord&) const = default;
};

struct PageDocument {
  std::string url;
  DomNode dom_root;
  std::vector<TextBlock> text_blocks;
  std::vector<LinkRecord> links;
  std::set<MetaItem> meta_items;
  std::map<MediaKind, std::size_t> media_counts;
};

struct SnapshotPair {
  PageDocument crawler_view;
  PageDocument user_view;
  std::chrono::system_clock::time_point crawler_fetched_at{};
  std::chrono::system_clock::time_point user_fetched_at{};
};

// Tolerant HTML parse. Throws Error{EmptyDocument} when no element can be
// recovered and Error{InvalidBaseUrl} for a relative base.
PageDocument parse_html(std::string_view raw_bytes, std::string_view base_url);

// Text blocks joined by single newlines.
std::string visible_text(const PageDocument& doc);

// Serializes the DOM back to HTML. Re-parsing the result reproduces the
// text blocks, links and media counts.
std::string serialize_html(const PageDocument& doc);

nlohmann::json to_json(const PageDocument& doc);
nlohmann::json to_json(const DomNode& node);

// Pre-order traversal over element nodes.
void for_each_element(const DomNode& root, const std::function<void(const DomNode&)>& visit);

// Collapsed text content of a subtree, skipping script/style.
std::string text_content(const DomNode& node);

// Declared charset from the first 1024 bytes, lowercase, or empty.
std::string sniff_charset(std::string_view raw_bytes);

}  // namespace seoaudit

#include "seoaudit/page_model.hpp"

#include <iconv.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "seoaudit/error.hpp"
#include "seoaudit/text.hpp"
#include "seoaudit/url.hpp"

namespace seoaudit {

namespace {

const std::unordered_set<std::string_view> kVoidElements = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "keygen",
    "link", "meta", "param", "source", "track", "wbr"};

const std::unordered_set<std::string_view> kRawTextElements = {
    "script", "style", "xmp", "noembed", "noframes"};

const std::unordered_set<std::string_view> kRcdataElements = {"title", "textarea"};

// Start tags that close an open <p>.
const std::unordered_set<std::string_view> kClosesParagraph = {
    "address", "article", "aside", "blockquote", "details", "div", "dl", "fieldset",
    "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "hr", "main", "menu", "nav", "ol", "p", "pre", "section", "table", "ul"};

const std::unordered_set<std::string_view> kScopeBoundaries = {
    "html", "body", "table", "td", "th", "caption", "button", "object", "template", "marquee"};

const std::unordered_set<std::string_view> kHeadings = {"h1", "h2", "h3", "h4", "h5", "h6"};

// Elements that delimit text blocks. Text whose nearest such ancestor is the
// same element, uninterrupted by another block boundary, forms one block.
const std::unordered_set<std::string_view> kBlockElements = {
    "p", "div", "li", "h1", "h2", "h3", "h4", "h5", "h6", "td", "th", "blockquote",
    "pre", "section", "article", "header", "footer", "main", "nav", "aside", "ul",
    "ol", "dl", "dt", "dd", "table", "tr", "caption", "figure", "figcaption", "form",
    "address", "details", "summary", "body", "html"};

// Subtrees that never render text.
const std::unordered_set<std::string_view> kInvisible = {
    "head", "script", "style", "noscript", "template", "title", "svg", "math",
    "iframe", "object", "noembed", "noframes"};

const std::unordered_map<std::string_view, char32_t> kNamedEntities = {
    {"amp", '&'},       {"lt", '<'},         {"gt", '>'},         {"quot", '"'},
    {"apos", '\''},     {"nbsp", 0xA0},      {"copy", 0xA9},      {"reg", 0xAE},
    {"trade", 0x2122},  {"hellip", 0x2026},  {"mdash", 0x2014},   {"ndash", 0x2013},
    {"lsquo", 0x2018},  {"rsquo", 0x2019},   {"ldquo", 0x201C},   {"rdquo", 0x201D},
    {"laquo", 0xAB},    {"raquo", 0xBB},     {"middot", 0xB7},    {"bull", 0x2022},
    {"euro", 0x20AC},   {"pound", 0xA3},     {"yen", 0xA5},       {"cent", 0xA2},
    {"sect", 0xA7},     {"deg", 0xB0},       {"plusmn", 0xB1},    {"times", 0xD7},
    {"divide", 0xF7},   {"frac12", 0xBD},    {"frac14", 0xBC},    {"frac34", 0xBE},
    {"iexcl", 0xA1},    {"iquest", 0xBF},    {"shy", 0xAD},       {"ensp", 0x2002},
    {"emsp", 0x2003},   {"thinsp", 0x2009},  {"zwnj", 0x200C},    {"zwj", 0x200D},
    {"larr", 0x2190},   {"rarr", 0x2192},    {"uarr", 0x2191},    {"darr", 0x2193},
    {"eacute", 0xE9},   {"egrave", 0xE8},    {"ecirc", 0xEA},     {"aacute", 0xE1},
    {"agrave", 0xE0},   {"acirc", 0xE2},     {"auml", 0xE4},      {"ouml", 0xF6},
    {"uuml", 0xFC},     {"Auml", 0xC4},      {"Ouml", 0xD6},      {"Uuml", 0xDC},
    {"szlig", 0xDF},    {"ccedil", 0xE7},    {"ntilde", 0xF1},    {"oacute", 0xF3},
    {"uacute", 0xFA},   {"iacute", 0xED},    {"Eacute", 0xC9},    {"aring", 0xE5},
    {"oslash", 0xF8},   {"aelig", 0xE6},
};

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string decode_entities(std::string_view s, bool in_attribute) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    std::size_t j = i + 1;
    if (j < s.size() && s[j] == '#') {
      ++j;
      bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
      if (hex) ++j;
      std::size_t digits_begin = j;
      char32_t cp = 0;
      while (j < s.size() && (hex ? std::isxdigit(static_cast<unsigned char>(s[j]))
                                  : std::isdigit(static_cast<unsigned char>(s[j])))) {
        int d = std::isdigit(static_cast<unsigned char>(s[j]))
                    ? s[j] - '0'
                    : std::tolower(static_cast<unsigned char>(s[j])) - 'a' + 10;
        cp = cp > 0x10FFFF ? cp : cp * (hex ? 16 : 10) + d;
        ++j;
      }
      if (j == digits_begin) {
        out += s[i++];
        continue;
      }
      if (j < s.size() && s[j] == ';') ++j;
      if (cp == 0) cp = 0xFFFD;
      append_utf8(out, cp);
      i = j;
      continue;
    }
    while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j])) && j - i <= 32) ++j;
    std::string_view name = s.substr(i + 1, j - i - 1);
    bool terminated = j < s.size() && s[j] == ';';
    auto it = kNamedEntities.find(name);
    // Unterminated references inside attributes stay literal (query strings).
    if (it != kNamedEntities.end() && (terminated || !in_attribute)) {
      append_utf8(out, it->second);
      i = terminated ? j + 1 : j;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string transcode_to_utf8(std::string_view bytes, const std::string& charset) {
  iconv_t cd = iconv_open("UTF-8", charset.c_str());
  if (cd == reinterpret_cast<iconv_t>(-1)) return sanitize_utf8(bytes);
  std::string out;
  std::string input(bytes);
  char* in_ptr = input.data();
  std::size_t in_left = input.size();
  std::array<char, 4096> buffer{};
  while (in_left > 0) {
    char* out_ptr = buffer.data();
    std::size_t out_left = buffer.size();
    std::size_t rc = iconv(cd, &in_ptr, &in_left, &out_ptr, &out_left);
    out.append(buffer.data(), buffer.size() - out_left);
    if (rc == static_cast<std::size_t>(-1)) {
      if (errno == E2BIG) continue;
      // Unconvertible or truncated input: substitute and skip one byte.
      out += "\xEF\xBF\xBD";
      ++in_ptr;
      --in_left;
    }
  }
  iconv_close(cd);
  return sanitize_utf8(out);
}

// --- tokenizer -----------------------------------------------------------

struct Token {
  enum class Type { StartTag, EndTag, Text };
  Type type = Type::Text;
  std::string name;
  std::string data;
  std::vector<std::pair<std::string, std::string>> attributes;
  bool self_closing = false;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view input) : in_(input) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    std::string text;
    auto flush_text = [&] {
      if (!text.empty()) {
        tokens.push_back(Token{Token::Type::Text, {}, decode_entities(text, false), {}, false});
        text.clear();
      }
    };
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (c != '<') {
        text += c;
        ++pos_;
        continue;
      }
      std::string_view rest = in_.substr(pos_);
      if (rest.substr(0, 4) == "<!--") {
        flush_text();
        auto end = in_.find("-->", pos_ + 4);
        pos_ = end == std::string_view::npos ? in_.size() : end + 3;
      } else if (rest.size() > 1 && (rest[1] == '!' || rest[1] == '?')) {
        flush_text();
        auto end = in_.find('>', pos_);
        pos_ = end == std::string_view::npos ? in_.size() : end + 1;
      } else if (rest.size() > 2 && rest[1] == '/' && std::isalpha(static_cast<unsigned char>(rest[2]))) {
        flush_text();
        pos_ += 2;
        Token tok{Token::Type::EndTag, read_name(), {}, {}, false};
        auto end = in_.find('>', pos_);
        pos_ = end == std::string_view::npos ? in_.size() : end + 1;
        tokens.push_back(std::move(tok));
      } else if (rest.size() > 1 && std::isalpha(static_cast<unsigned char>(rest[1]))) {
        flush_text();
        ++pos_;
        Token tok = read_start_tag();
        const std::string name = tok.name;
        tokens.push_back(std::move(tok));
        if (kRawTextElements.count(name) || kRcdataElements.count(name)) {
          std::string body = read_raw_until_end(name);
          if (!body.empty()) {
            tokens.push_back(Token{Token::Type::Text, {},
                                   kRcdataElements.count(name) ? decode_entities(body, false) : body,
                                   {}, false});
          }
          tokens.push_back(Token{Token::Type::EndTag, name, {}, {}, false});
        } else if (name == "plaintext") {
          tokens.push_back(Token{Token::Type::Text, {}, std::string(in_.substr(pos_)), {}, false});
          pos_ = in_.size();
        }
      } else if (rest.size() > 2 && rest[1] == '/' && rest[2] == '>') {
        flush_text();
        pos_ += 3;
      } else {
        text += c;
        ++pos_;
      }
    }
    flush_text();
    return tokens;
  }

 private:
  std::string read_name() {
    std::string name;
    while (pos_ < in_.size() && !is_ascii_space(in_[pos_]) && in_[pos_] != '>' && in_[pos_] != '/') {
      name += static_cast<char>(std::tolower(static_cast<unsigned char>(in_[pos_])));
      ++pos_;
    }
    return name;
  }

  void skip_spaces() {
    while (pos_ < in_.size() && is_ascii_space(in_[pos_])) ++pos_;
  }

  Token read_start_tag() {
    Token tok{Token::Type::StartTag, read_name(), {}, {}, false};
    std::unordered_set<std::string> seen;
    while (pos_ < in_.size()) {
      skip_spaces();
      if (pos_ >= in_.size()) break;
      char c = in_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < in_.size() && in_[pos_] == '>') {
          tok.self_closing = true;
          ++pos_;
          break;
        }
        continue;
      }
      std::string name;
      while (pos_ < in_.size() && !is_ascii_space(in_[pos_]) && in_[pos_] != '>' &&
             in_[pos_] != '=' && !(in_[pos_] == '/' && name.size() > 0)) {
        name += static_cast<char>(std::tolower(static_cast<unsigned char>(in_[pos_])));
        ++pos_;
      }
      skip_spaces();
      std::string value;
      if (pos_ < in_.size() && in_[pos_] == '=') {
        ++pos_;
        skip_spaces();
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          char quote = in_[pos_++];
          auto end = in_.find(quote, pos_);
          if (end == std::string_view::npos) end = in_.size();
          value = std::string(in_.substr(pos_, end - pos_));
          pos_ = std::min(end + 1, in_.size());
        } else {
          while (pos_ < in_.size() && !is_ascii_space(in_[pos_]) && in_[pos_] != '>') value += in_[pos_++];
        }
      }
      if (!name.empty() && seen.insert(name).second) {
        tok.attributes.emplace_back(std::move(name), decode_entities(value, true));
      }
    }
    return tok;
  }

  std::string read_raw_until_end(const std::string& name) {
    std::size_t search = pos_;
    while (true) {
      auto lt = in_.find("</", search);
      if (lt == std::string_view::npos) {
        std::string body(in_.substr(pos_));
        pos_ = in_.size();
        return body;
      }
      std::string candidate = to_lower_ascii(in_.substr(lt + 2, name.size()));
      std::size_t after = lt + 2 + name.size();
      bool boundary = after >= in_.size() || is_ascii_space(in_[after]) || in_[after] == '>' || in_[after] == '/';
      if (candidate == name && boundary) {
        std::string body(in_.substr(pos_, lt - pos_));
        auto end = in_.find('>', after);
        pos_ = end == std::string_view::npos ? in_.size() : end + 1;
        return body;
      }
      search = lt + 2;
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

// --- tree builder --------------------------------------------------------

struct BuildNode {
  DomNode::Kind kind = DomNode::Kind::Element;
  std::string tag;
  std::string text;
  std::map<std::string, std::string> attributes;
  std::vector<std::unique_ptr<BuildNode>> children;
};

class TreeBuilder {
 public:
  TreeBuilder() {
    root_ = std::make_unique<BuildNode>();
    root_->tag = "html";
    stack_.push_back(root_.get());
  }

  void feed(Token& tok) {
    switch (tok.type) {
      case Token::Type::Text: add_text(tok.data); break;
      case Token::Type::StartTag: start_tag(tok); break;
      case Token::Type::EndTag: end_tag(tok.name); break;
    }
  }

  bool saw_element() const { return saw_element_; }
  std::unique_ptr<BuildNode> take_root() { return std::move(root_); }

 private:
  BuildNode* current() { return stack_.back(); }

  bool in_foreign_content() const {
    return std::any_of(stack_.begin(), stack_.end(),
                       [](const BuildNode* n) { return n->tag == "svg" || n->tag == "math"; });
  }

  void add_text(const std::string& data) {
    BuildNode* parent = current();
    if (!parent->children.empty() && parent->children.back()->kind == DomNode::Kind::Text) {
      parent->children.back()->text += data;
      return;
    }
    auto node = std::make_unique<BuildNode>();
    node->kind = DomNode::Kind::Text;
    node->text = data;
    parent->children.push_back(std::move(node));
  }

  // Pops through the nearest open element named in `targets`, searching no
  // further than a scope boundary or any tag in `stops`.
  void close_in_scope(const std::unordered_set<std::string_view>& targets,
                      const std::unordered_set<std::string_view>& stops = {}) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& tag = stack_[i]->tag;
      if (targets.count(tag)) {
        stack_.resize(i);
        return;
      }
      if (kScopeBoundaries.count(tag) || stops.count(tag)) return;
    }
  }

  void merge_attributes(BuildNode* node, const Token& tok) {
    for (const auto& [k, v] : tok.attributes) node->attributes.emplace(k, v);
  }

  void start_tag(Token& tok) {
    saw_element_ = true;
    const std::string& name = tok.name;
    if (name == "html") {
      merge_attributes(root_.get(), tok);
      return;
    }
    if ((name == "body" && seen_body_) || (name == "head" && seen_head_)) {
      BuildNode* existing = find_child(name);
      if (existing) merge_attributes(existing, tok);
      return;
    }
    if (name == "body") seen_body_ = true;
    if (name == "head") seen_head_ = true;

    if (!in_foreign_content()) {
      if (kClosesParagraph.count(name)) close_in_scope({"p"});
      if (kHeadings.count(name) && kHeadings.count(current()->tag)) stack_.pop_back();
      if (name == "li") close_in_scope({"li"}, {"ul", "ol"});
      if (name == "dt" || name == "dd") close_in_scope({"dt", "dd"}, {"dl"});
      if (name == "td" || name == "th") close_in_scope({"td", "th"}, {"tr"});
      if (name == "tr") close_in_scope({"tr"}, {"thead", "tbody", "tfoot"});
      if (name == "thead" || name == "tbody" || name == "tfoot") close_in_scope({"thead", "tbody", "tfoot"});
      if (name == "option") close_in_scope({"option"}, {"select"});
      if (name == "a") close_in_scope({"a"});
    }

    auto node = std::make_unique<BuildNode>();
    node->tag = name;
    for (auto& [k, v] : tok.attributes) node->attributes.emplace(std::move(k), std::move(v));
    BuildNode* raw = node.get();
    current()->children.push_back(std::move(node));

    bool is_void = kVoidElements.count(name) || (tok.self_closing && in_foreign_content());
    if (!is_void) stack_.push_back(raw);
  }

  BuildNode* find_child(const std::string& name) {
    for (auto& child : root_->children) {
      if (child->kind == DomNode::Kind::Element && child->tag == name) return child.get();
    }
    return nullptr;
  }

  void end_tag(const std::string& name) {
    if (name == "html" || name == "body") return;
    if (name == "br") {
      Token tok{Token::Type::StartTag, "br", {}, {}, false};
      start_tag(tok);
      return;
    }
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag == name) {
        stack_.resize(i);
        return;
      }
    }
  }

  std::unique_ptr<BuildNode> root_;
  std::vector<BuildNode*> stack_;
  bool saw_element_ = false;
  bool seen_body_ = false;
  bool seen_head_ = false;
};

DomNode freeze(BuildNode& node, int depth) {
  DomNode out;
  out.kind = node.kind;
  out.tag = std::move(node.tag);
  out.text = std::move(node.text);
  out.depth = depth;
  out.attributes = std::move(node.attributes);
  out.children.reserve(node.children.size());
  for (auto& child : node.children) out.children.push_back(freeze(*child, depth + 1));
  return out;
}

// --- extraction ----------------------------------------------------------

class Extractor {
 public:
  Extractor(PageDocument& doc) : doc_(doc), page_domain_(registrable_domain_of_url(doc.url)) {}

  void run() {
    walk(doc_.dom_root, nullptr, false);
    flush();
  }

 private:
  void flush() {
    std::string text = collapse_whitespace(run_text_);
    if (!text.empty() && run_block_) {
      doc_.text_blocks.push_back(TextBlock{text, count_whitespace_tokens(text), run_block_->tag});
    }
    run_text_.clear();
    run_block_ = nullptr;
  }

  void walk(const DomNode& node, const DomNode* block, bool hidden) {
    if (!node.is_element()) {
      if (!hidden) {
        run_block_ = block;
        run_text_ += node.text;
      }
      return;
    }
    const std::string& tag = node.tag;
    bool now_hidden = hidden || kInvisible.count(tag) > 0;
    inspect(node, hidden);

    bool is_block = kBlockElements.count(tag) > 0;
    if (is_block && !now_hidden) flush();
    if (tag == "br" && !now_hidden) run_text_ += ' ';
    const DomNode* child_block = is_block ? &node : block;
    for (const auto& child : node.children) walk(child, child_block, now_hidden);
    if (is_block && !now_hidden) flush();
  }

  void inspect(const DomNode& node, bool hidden) {
    const std::string& tag = node.tag;
    if (!hidden) {
      if (tag == "img") ++doc_.media_counts[MediaKind::Image];
      if (tag == "video") ++doc_.media_counts[MediaKind::Video];
      if (tag == "audio") ++doc_.media_counts[MediaKind::Audio];
      if (tag == "iframe" || tag == "embed" || tag == "object") ++doc_.media_counts[MediaKind::EmbeddedFrame];
      if (tag == "a" || tag == "area") add_link(node);
    }
    if (tag == "title" && !text_content(node).empty()) doc_.meta_items.insert(MetaItem::Title);
    if (tag == "meta") inspect_meta(node);
    if (tag == "link") {
      const std::string* rel = node.attribute("rel");
      const std::string* href = node.attribute("href");
      if (rel && href && !href->empty()) {
        for (const auto& r : whitespace_tokens(to_lower_ascii(*rel))) {
          if (r == "canonical") doc_.meta_items.insert(MetaItem::Canonical);
        }
      }
    }
  }

  void inspect_meta(const DomNode& node) {
    if (const std::string* cs = node.attribute("charset"); cs && !collapse_whitespace(*cs).empty()) {
      doc_.meta_items.insert(MetaItem::Charset);
    }
    const std::string* content = node.attribute("content");
    bool has_content = content && !collapse_whitespace(*content).empty();
    if (const std::string* equiv = node.attribute("http-equiv");
        equiv && to_lower_ascii(*equiv) == "content-type" && has_content &&
        to_lower_ascii(*content).find("charset=") != std::string::npos) {
      doc_.meta_items.insert(MetaItem::Charset);
    }
    if (!has_content) return;
    for (const char* key : {"name", "property"}) {
      const std::string* attr = node.attribute(key);
      if (!attr) continue;
      std::string name = to_lower_ascii(collapse_whitespace(*attr));
      static const std::unordered_map<std::string_view, MetaItem> kByName = {
          {"description", MetaItem::Description}, {"keywords", MetaItem::Keywords},
          {"robots", MetaItem::Robots},           {"viewport", MetaItem::Viewport},
          {"og:title", MetaItem::OgTitle},        {"og:description", MetaItem::OgDescription},
          {"og:image", MetaItem::OgImage},        {"twitter:card", MetaItem::TwitterCard},
          {"author", MetaItem::Author}};
      if (auto it = kByName.find(name); it != kByName.end()) doc_.meta_items.insert(it->second);
    }
  }

  void add_link(const DomNode& node) {
    const std::string* href = node.attribute("href");
    if (!href) return;
    auto resolved = resolve_url(doc_.url, *href);
    if (!resolved) return;
    auto parsed = parse_url(*resolved);
    if (!parsed || (parsed->scheme != "http" && parsed->scheme != "https") || parsed->host.empty()) return;
    LinkRecord link;
    link.target = *resolved;
    if (node.tag == "area") {
      const std::string* alt = node.attribute("alt");
      link.anchor_text = alt ? collapse_whitespace(*alt) : std::string{};
    } else {
      link.anchor_text = text_content(node);
    }
    link.internal = !page_domain_.empty() && registrable_domain(parsed->host) == page_domain_;
    doc_.links.push_back(std::move(link));
  }

  PageDocument& doc_;
  std::string page_domain_;
  const DomNode* run_block_ = nullptr;
  std::string run_text_;
};

void append_text_content(const DomNode& node, std::string& out) {
  if (!node.is_element()) {
    out += node.text;
    return;
  }
  if (node.tag == "script" || node.tag == "style" || node.tag == "template") return;
  if (node.tag == "br") out += ' ';
  for (const auto& child : node.children) append_text_content(child, out);
}

std::string escape_text(std::string_view s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += attribute ? "<" : "&lt;"; break;
      case '>': out += attribute ? ">" : "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      default: out += c;
    }
  }
  return out;
}

void serialize_node(const DomNode& node, std::string& out, bool raw_parent) {
  if (!node.is_element()) {
    out += raw_parent ? node.text : escape_text(node.text, false);
    return;
  }
  out += '<';
  out += node.tag;
  for (const auto& [k, v] : node.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape_text(v, true);
    out += '"';
  }
  out += '>';
  if (kVoidElements.count(node.tag)) return;
  bool raw = kRawTextElements.count(node.tag) > 0;
  for (const auto& child : node.children) serialize_node(child, out, raw);
  out += "</";
  out += node.tag;
  out += '>';
}

}  // namespace

const char* to_string(MediaKind kind) noexcept {
  switch (kind) {
    case MediaKind::Image: return "image";
    case MediaKind::Video: return "video";
    case MediaKind::Audio: return "audio";
    case MediaKind::EmbeddedFrame: return "embedded-frame";
  }
  return "unknown";
}

const char* to_string(MetaItem item) noexcept {
  switch (item) {
    case MetaItem::Title: return "title";
    case MetaItem::Description: return "meta-description";
    case MetaItem::Keywords: return "meta-keywords";
    case MetaItem::Canonical: return "canonical";
    case MetaItem::Robots: return "robots";
    case MetaItem::Viewport: return "viewport";
    case MetaItem::OgTitle: return "og:title";
    case MetaItem::OgDescription: return "og:description";
    case MetaItem::OgImage: return "og:image";
    case MetaItem::TwitterCard: return "twitter:card";
    case MetaItem::Author: return "author";
    case MetaItem::Charset: return "charset";
  }
  return "unknown";
}

std::optional<MetaItem> meta_item_from_string(std::string_view name) {
  for (int i = 0; i < static_cast<int>(kMetaChecklistSize); ++i) {
    auto item = static_cast<MetaItem>(i);
    if (name == to_string(item)) return item;
  }
  return std::nullopt;
}

const std::string* DomNode::attribute(std::string_view name) const {
  auto it = attributes.find(std::string(name));
  return it == attributes.end() ? nullptr : &it->second;
}

std::string sniff_charset(std::string_view raw_bytes) {
  std::string head = to_lower_ascii(raw_bytes.substr(0, 1024));
  std::size_t pos = 0;
  while ((pos = head.find("<meta", pos)) != std::string::npos) {
    auto end = head.find('>', pos);
    std::string tag = head.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    auto cs = tag.find("charset");
    if (cs != std::string::npos) {
      std::size_t i = cs + 7;
      while (i < tag.size() && (is_ascii_space(tag[i]) || tag[i] == '=' || tag[i] == '"' || tag[i] == '\'')) ++i;
      std::string value;
      while (i < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[i])) || tag[i] == '-' || tag[i] == '_' ||
                                tag[i] == ':' || tag[i] == '.')) {
        value += tag[i++];
      }
      if (!value.empty()) return value;
    }
    pos += 5;
  }
  return {};
}

PageDocument parse_html(std::string_view raw_bytes, std::string_view base_url) {
  auto base = parse_url(base_url);
  if (!base || !base->is_absolute() || (base->has_authority && base->host.empty())) {
    throw Error(Errc::InvalidBaseUrl, "base URL must be absolute: " + std::string(base_url));
  }
  if (raw_bytes.empty()) throw Error(Errc::EmptyDocument, "empty input");

  std::string charset = sniff_charset(raw_bytes);
  std::string decoded = (charset.empty() || charset == "utf-8" || charset == "utf8")
                            ? sanitize_utf8(raw_bytes)
                            : transcode_to_utf8(raw_bytes, charset);
  // A leading byte-order mark is not content.
  if (decoded.rfind("\xEF\xBB\xBF", 0) == 0) decoded.erase(0, 3);

  Tokenizer tokenizer(decoded);
  auto tokens = tokenizer.run();
  TreeBuilder builder;
  for (auto& tok : tokens) builder.feed(tok);
  if (!builder.saw_element()) throw Error(Errc::EmptyDocument, "no element could be recovered");

  PageDocument doc;
  doc.url = base->str();
  auto root = builder.take_root();
  doc.dom_root = freeze(*root, 1);
  Extractor(doc).run();
  return doc;
}

std::string visible_text(const PageDocument& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.text_blocks.size(); ++i) {
    if (i) out += '\n';
    out += doc.text_blocks[i].text;
  }
  return out;
}

std::string serialize_html(const PageDocument& doc) {
  std::string out = "<!DOCTYPE html>";
  serialize_node(doc.dom_root, out, false);
  return out;
}

void for_each_element(const DomNode& root, const std::function<void(const DomNode&)>& visit) {
  if (!root.is_element()) return;
  visit(root);
  for (const auto& child : root.children) for_each_element(child, visit);
}

std::string text_content(const DomNode& node) {
  std::string raw;
  append_text_content(node, raw);
  return collapse_whitespace(raw);
}

nlohmann::json to_json(const DomNode& node) {
  if (!node.is_element()) return nlohmann::json{{"text", node.text}};
  nlohmann::json children = nlohmann::json::array();
  for (const auto& child : node.children) children.push_back(to_json(child));
  return nlohmann::json{{"tag", node.tag},
                        {"depth", node.depth},
                        {"attributes", node.attributes},
                        {"children", std::move(children)}};
}

nlohmann::json to_json(const PageDocument& doc) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : doc.text_blocks) {
    blocks.push_back({{"text", b.text}, {"token_count", b.token_count}, {"source_tag", b.source_tag}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : doc.links) {
    links.push_back({{"target", l.target}, {"anchor_text", l.anchor_text}, {"internal", l.internal}});
  }
  nlohmann::json meta = nlohmann::json::array();
  for (auto item : doc.meta_items) meta.push_back(to_string(item));
  nlohmann::json media = nlohmann::json::object();
  for (auto kind : {MediaKind::Image, MediaKind::Video, MediaKind::Audio, MediaKind::EmbeddedFrame}) {
    auto it = doc.media_counts.find(kind);
    media[to_string(kind)] = it == doc.media_counts.end() ? 0 : it->second;
  }
  return nlohmann::json{{"schema_version", 1},
                        {"url", doc.url},
                        {"text_blocks", std::move(blocks)},
                        {"links", std::move(links)},
                        {"meta_items", std::move(meta)},
                        {"media_counts", std::move(media)},
                        {"dom", to_json(doc.dom_root)}};
}

}  // namespace seoaudit

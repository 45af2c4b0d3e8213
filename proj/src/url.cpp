#include "seoaudit/url.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

namespace seoaudit {

namespace detail {
extern const std::string_view kBundledPublicSuffixes;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_scheme_char(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c))) return true;
  if (first) return false;
  return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

std::string remove_dot_segments(std::string_view input) {
  std::vector<std::string> out;
  bool absolute = !input.empty() && input.front() == '/';
  bool trailing_slash = false;
  std::size_t pos = absolute ? 1 : 0;
  while (pos <= input.size()) {
    std::size_t next = input.find('/', pos);
    if (next == std::string_view::npos) next = input.size();
    std::string_view seg = input.substr(pos, next - pos);
    bool last = next == input.size();
    if (seg == ".") {
      trailing_slash = last;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = last;
    } else {
      out.emplace_back(seg);
      trailing_slash = false;
    }
    pos = next + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result += '/';
    result += out[i];
  }
  if (trailing_slash && (result.empty() || result.back() != '/')) result += '/';
  return result;
}

bool looks_like_ip(std::string_view host) {
  if (!host.empty() && host.front() == '[') return true;
  return !host.empty() && std::all_of(host.begin(), host.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  });
}

}  // namespace

std::string Url::str() const {
  std::string out;
  if (!scheme.empty()) out += scheme + ":";
  if (has_authority) {
    out += "//" + host;
    if (!port.empty()) out += ":" + port;
  }
  out += path;
  if (query) out += "?" + *query;
  if (fragment) out += "#" + *fragment;
  return out;
}

std::optional<Url> parse_url(std::string_view text) {
  // Trim surrounding whitespace and drop tabs/newlines inside, as browsers do.
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    if (c != '\t' && c != '\n' && c != '\r') cleaned += c;
  }
  std::string_view s = cleaned;
  while (!s.empty() && static_cast<unsigned char>(s.front()) <= ' ') s.remove_prefix(1);
  while (!s.empty() && static_cast<unsigned char>(s.back()) <= ' ') s.remove_suffix(1);

  Url url;
  std::size_t i = 0;
  if (!s.empty() && is_scheme_char(s[0], true)) {
    std::size_t j = 1;
    while (j < s.size() && is_scheme_char(s[j], false)) ++j;
    if (j < s.size() && s[j] == ':') {
      url.scheme = lower(s.substr(0, j));
      i = j + 1;
    }
  }
  std::string_view rest = s.substr(i);
  if (auto hash = rest.find('#'); hash != std::string_view::npos) {
    url.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    url.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  if (rest.substr(0, 2) == "//") {
    url.has_authority = true;
    rest.remove_prefix(2);
    std::size_t end = rest.find('/');
    std::string_view authority = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
    std::size_t colon = std::string_view::npos;
    if (!authority.empty() && authority.front() == '[') {
      auto close = authority.find(']');
      if (close == std::string_view::npos) return std::nullopt;
      if (close + 1 < authority.size() && authority[close + 1] == ':') colon = close + 1;
    } else {
      colon = authority.rfind(':');
    }
    if (colon != std::string_view::npos) {
      url.port = std::string(authority.substr(colon + 1));
      authority = authority.substr(0, colon);
      if (!std::all_of(url.port.begin(), url.port.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return std::nullopt;
      }
    }
    url.host = lower(authority);
    while (!url.host.empty() && url.host.back() == '.') url.host.pop_back();
    if ((url.scheme == "http" && url.port == "80") || (url.scheme == "https" && url.port == "443")) {
      url.port.clear();
    }
    if (rest.empty() && (url.scheme == "http" || url.scheme == "https")) rest = "/";
  }
  url.path = std::string(rest);
  if (url.is_absolute() && url.has_authority && url.host.empty() &&
      (url.scheme == "http" || url.scheme == "https")) {
    return std::nullopt;
  }
  return url;
}

bool is_absolute_url(std::string_view text) {
  auto url = parse_url(text);
  return url && url->is_absolute();
}

std::optional<std::string> resolve_url(std::string_view base_text, std::string_view reference) {
  auto base = parse_url(base_text);
  if (!base || !base->is_absolute()) return std::nullopt;
  auto ref = parse_url(reference);
  if (!ref) return std::nullopt;

  Url target;
  if (ref->is_absolute()) {
    target = *ref;
    target.path = remove_dot_segments(target.path);
    if (target.has_authority && target.path.empty()) target.path = "/";
    return target.str();
  }
  target.scheme = base->scheme;
  if (ref->has_authority) {
    target.has_authority = true;
    target.host = ref->host;
    target.port = ref->port;
    target.path = remove_dot_segments(ref->path.empty() ? "/" : ref->path);
    target.query = ref->query;
  } else {
    target.has_authority = base->has_authority;
    target.host = base->host;
    target.port = base->port;
    if (ref->path.empty()) {
      target.path = base->path;
      target.query = ref->query ? ref->query : base->query;
    } else {
      if (ref->path.front() == '/') {
        target.path = remove_dot_segments(ref->path);
      } else {
        std::string merged;
        if (base->has_authority && base->path.empty()) {
          merged = "/" + ref->path;
        } else {
          auto slash = base->path.rfind('/');
          merged = (slash == std::string::npos ? std::string{} : base->path.substr(0, slash + 1)) + ref->path;
        }
        target.path = remove_dot_segments(merged);
      }
      target.query = ref->query;
    }
  }
  target.fragment = ref->fragment;
  return target.str();
}

std::string url_host(std::string_view url) {
  auto parsed = parse_url(url);
  if (!parsed || !parsed->is_absolute()) return {};
  return parsed->host;
}

PublicSuffixList PublicSuffixList::parse(std::istream& in) {
  PublicSuffixList list;
  std::string line;
  while (std::getline(in, line)) {
    auto end = line.find_first_of(" \t\r");
    if (end != std::string::npos) line.resize(end);
    if (line.empty() || line.rfind("//", 0) == 0) continue;
    line = lower(line);
    if (line.front() == '!') {
      list.exceptions_.insert(line.substr(1));
    } else if (line.rfind("*.", 0) == 0) {
      list.wildcards_.insert(line.substr(2));
    } else {
      list.rules_.insert(line);
    }
  }
  return list;
}

PublicSuffixList PublicSuffixList::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

const PublicSuffixList& PublicSuffixList::bundled() {
  static const PublicSuffixList list = parse(detail::kBundledPublicSuffixes);
  return list;
}

std::string PublicSuffixList::public_suffix(std::string_view host_view) const {
  std::string host = lower(host_view);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty()) return {};

  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < host.size(); ++i) {
    if (host[i] == '.') starts.push_back(i + 1);
  }
  // Walk candidate suffixes from longest to shortest; the first hit is the
  // longest matching rule.
  for (std::size_t k = 0; k < starts.size(); ++k) {
    std::string candidate = host.substr(starts[k]);
    if (exceptions_.count(candidate)) {
      // Exception rules strip their leftmost label.
      return k + 1 < starts.size() ? host.substr(starts[k + 1]) : candidate;
    }
    if (rules_.count(candidate)) return candidate;
    if (k + 1 < starts.size() && wildcards_.count(host.substr(starts[k + 1]))) return candidate;
  }
  return host.substr(starts.back());
}

std::string PublicSuffixList::registrable_domain(std::string_view host_view) const {
  std::string host = lower(host_view);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || looks_like_ip(host)) return host;
  std::string suffix = public_suffix(host);
  if (suffix.size() >= host.size()) return host;
  std::string_view head(host.data(), host.size() - suffix.size() - 1);
  auto dot = head.rfind('.');
  return host.substr(dot == std::string_view::npos ? 0 : dot + 1);
}

std::string registrable_domain(std::string_view host) {
  return PublicSuffixList::bundled().registrable_domain(host);
}

std::string registrable_domain_of_url(std::string_view url) {
  std::string host = url_host(url);
  return host.empty() ? std::string{} : registrable_domain(host);
}

}  // namespace seoaudit

#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace seoaudit {

// RFC 3986 components of an absolute or relative reference. Scheme and host
// are stored lowercase.
struct Url {
  std::string scheme;
  std::string host;
  std::string port;
  std::string path;
  std::optional<std::string> query;
  std::optional<std::string> fragment;
  bool has_authority = false;

  bool is_absolute() const { return !scheme.empty(); }
  std::string str() const;
};

std::optional<Url> parse_url(std::string_view text);

bool is_absolute_url(std::string_view text);

// Resolves `reference` against an absolute `base`. Returns nullopt when the
// base is not absolute or the reference cannot be parsed.
std::optional<std::string> resolve_url(std::string_view base, std::string_view reference);

// Lowercased host of an absolute URL, or empty.
std::string url_host(std::string_view url);

class PublicSuffixList {
 public:
  PublicSuffixList() = default;

  static PublicSuffixList parse(std::istream& in);
  static PublicSuffixList parse(std::string_view text);
  static const PublicSuffixList& bundled();

  // Longest matching public suffix of `host` (default rule "*").
  std::string public_suffix(std::string_view host) const;

  // Public suffix plus one label. IP literals and bare suffixes map to the
  // host itself.
  std::string registrable_domain(std::string_view host) const;

  std::size_t rule_count() const { return rules_.size() + wildcards_.size() + exceptions_.size(); }

 private:
  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcards_;   // stored without the "*." prefix
  std::unordered_set<std::string> exceptions_;  // stored without the "!" prefix
};

// Registrable domain of a host under the bundled snapshot.
std::string registrable_domain(std::string_view host);

// Registrable domain of an absolute URL's host, or empty.
std::string registrable_domain_of_url(std::string_view url);

}  // namespace seoaudit

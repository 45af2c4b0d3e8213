#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seoaudit/detectors.hpp"
#include "seoaudit/page_model.hpp"

namespace seoaudit {

enum class View { Crawler, User };

const char* to_string(View v) noexcept;

struct Response {
  int status = 0;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
  std::string final_url;
  std::vector<std::string> hops;  // URLs visited inside the transport, if any
};

struct RequestRecord {
  std::string url;
  std::string host;
  View view = View::User;
  std::chrono::steady_clock::time_point started;
  std::chrono::steady_clock::time_point finished;
};

// One request, no redirect following. Implementations are safe for
// concurrent calls.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Response fetch(std::string_view url, View view) = 0;
  virtual std::vector<RequestRecord> request_log() const = 0;
};

// Serves recorded responses from a fixture; never touches the network.
//
// {"schema_version": 1, "format": "seoaudit-playback",
//  "responses": [{"url": ..., "view": "crawler"|"user"|"any", "status": 200,
//                 "headers": {...}, "body": "..." | "body_file": "rel/path"}]}
class PlaybackTransport final : public Transport {
 public:
  static constexpr const char* kFormatName = "seoaudit-playback";

  PlaybackTransport() = default;
  static PlaybackTransport from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PlaybackTransport load(const std::filesystem::path& path);

  void add(std::string url, std::optional<View> view, Response response);

  // Throws Error{FetchFailure} for unrecorded URLs.
  Response fetch(std::string_view url, View view) override;
  std::vector<RequestRecord> request_log() const override;

 private:
  std::map<std::pair<std::string, int>, Response> responses_;  // view -1 = any
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  std::vector<RequestRecord> log_;
};

struct LiveTransportOptions {
  std::string crawler_user_agent = "Mozilla/5.0 (compatible; Googlebot/2.1; +http://www.google.com/bot.html)";
  std::string user_user_agent =
      "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/124.0 Safari/537.36";
  std::chrono::milliseconds per_host_delay{1000};
  std::size_t max_concurrency = 4;
  std::chrono::seconds timeout{15};
  std::size_t max_body_bytes = 8 * 1024 * 1024;
  bool use_proxy_env = true;  // HTTPS_PROXY / HTTP_PROXY and lowercase forms
};

class LiveTransport final : public Transport {
 public:
  explicit LiveTransport(LiveTransportOptions options = {});
  ~LiveTransport() override;

  // Throws Error{FetchFailure} or Error{TimeoutExceeded}.
  Response fetch(std::string_view url, View view) override;
  std::vector<RequestRecord> request_log() const override;
  const LiveTransportOptions& options() const { return options_; }

 private:
  struct Impl;
  LiveTransportOptions options_;
  Impl* impl_;
};

// Number of requests and lookups that reached the real network in this
// process. The offline test suite asserts it stays at zero.
std::uint64_t live_network_calls() noexcept;

// Fetches the crawler and user views. Throws Error{FetchFailure} naming the
// view on transport errors and non-2xx statuses.
SnapshotPair fetch_pair(std::string_view url, Transport& transport);

// Walks HTTP 3xx, meta refresh and inline-script location changes. Stops at
// the first non-redirecting response; at max_hops the chain is returned with
// truncated set.
RedirectChain follow_redirects(std::string_view url, Transport& transport, std::size_t max_hops = 10,
                               View view = View::User);

// Next location announced by a response, if any.
std::optional<std::pair<std::string, RedirectMechanism>> redirect_target(const Response& response,
                                                                         std::string_view url);

class DnsResolver {
 public:
  virtual ~DnsResolver() = default;
  // Addresses for a host; empty when the name does not exist. Throws
  // Error{ResolverFailure} on resolver errors.
  virtual std::vector<std::string> resolve(std::string_view host) = 0;
};

class LiveDnsResolver final : public DnsResolver {
 public:
  std::vector<std::string> resolve(std::string_view host) override;
};

// {"schema_version": 1, "records": {"host": ["addr", ...], "*.zone": [...]}}
class FixtureDnsResolver final : public DnsResolver {
 public:
  FixtureDnsResolver() = default;
  static FixtureDnsResolver from_json(const nlohmann::json& j);
  static FixtureDnsResolver load(const std::filesystem::path& path);
  void add(std::string host, std::vector<std::string> addresses);
  std::vector<std::string> resolve(std::string_view host) override;
  std::vector<std::string> queries() const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> records_;
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  std::vector<std::string> queries_;
};

struct DnsProbeResult {
  std::string domain;
  bool wildcard_detected = false;
  std::vector<std::string> probe_labels;
};

bool is_valid_domain(std::string_view domain);

// Resolves k random 16-character labels under the domain. Wildcard when every
// probe answers with the same non-empty address set. Throws
// Error{InvalidData} for a malformed domain.
DnsProbeResult dns_wildcard_probe(std::string_view domain, DnsResolver& resolver, std::uint64_t seed = 0,
                                  std::size_t k = 3);

nlohmann::json to_json(const RedirectChain& chain);
nlohmann::json to_json(const DnsProbeResult& r);

}  // namespace seoaudit

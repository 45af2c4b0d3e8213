#include "seoaudit/netio.hpp"

#include <httplib.h>
#include <netdb.h>
#include <arpa/inet.h>
#include <sys/socket.h>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <thread>

#include "seoaudit/error.hpp"
#include "seoaudit/text.hpp"
#include "seoaudit/url.hpp"

namespace seoaudit {

namespace {

std::atomic<std::uint64_t> g_live_calls{0};

std::optional<View> view_from_string(std::string_view s) {
  if (s == "crawler") return View::Crawler;
  if (s == "user") return View::User;
  return std::nullopt;
}

std::string trim_quotes(std::string s) {
  s = collapse_whitespace(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

// "5; url=/next" -> "/next"
std::optional<std::string> refresh_target(std::string_view content) {
  std::string lower = to_lower_ascii(content);
  auto pos = lower.find("url");
  if (pos == std::string::npos) return std::nullopt;
  pos = lower.find('=', pos);
  if (pos == std::string::npos) return std::nullopt;
  std::string target = trim_quotes(std::string(content.substr(pos + 1)));
  if (target.empty()) return std::nullopt;
  return target;
}

const std::regex& script_location_pattern() {
  static const std::regex re(
      R"re((?:(?:window|document|top|self|parent)\s*\.\s*)?location(?:\s*\.\s*href)?\s*=\s*["']([^"']+)["']|location\s*\.\s*(?:replace|assign)\s*\(\s*["']([^"']+)["'])re");
  return re;
}

void collect_text(const DomNode& node, std::string& out) {
  for (const auto& child : node.children) {
    if (child.is_element()) {
      collect_text(child, out);
    } else {
      out += child.text;
    }
  }
}

class Semaphore {
 public:
  explicit Semaphore(std::size_t n) : available_(n) {}
  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }
  void release() {
    {
      std::lock_guard lock(mutex_);
      ++available_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t available_;
};

}  // namespace

const char* to_string(View v) noexcept { return v == View::Crawler ? "crawler" : "user"; }

std::uint64_t live_network_calls() noexcept { return g_live_calls.load(); }

// --- playback ----------------------------------------------------------------

void PlaybackTransport::add(std::string url, std::optional<View> view, Response response) {
  if (response.final_url.empty()) response.final_url = url;
  std::lock_guard lock(*mutex_);
  responses_[{std::move(url), view ? static_cast<int>(*view) : -1}] = std::move(response);
}

PlaybackTransport PlaybackTransport::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (j.value("format", std::string{}) != kFormatName) throw Error(Errc::InvalidData, "not a playback fixture");
  if (j.value("schema_version", 0) != 1) throw Error(Errc::InvalidData, "unsupported playback schema_version");
  PlaybackTransport t;
  try {
    for (const auto& r : j.at("responses")) {
      Response resp;
      resp.status = r.value("status", 200);
      if (auto it = r.find("headers"); it != r.end()) {
        for (const auto& [k, v] : it->items()) resp.headers[to_lower_ascii(k)] = v.get<std::string>();
      }
      if (r.contains("body_file")) {
        auto path = base_dir / r.at("body_file").get<std::string>();
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(Errc::IoFailure, "cannot read fixture body " + path.string());
        resp.body.assign(std::istreambuf_iterator<char>(in), {});
      } else {
        resp.body = r.value("body", std::string{});
      }
      std::string view = r.value("view", std::string("any"));
      std::optional<View> v = view_from_string(view);
      if (!v && view != "any") throw Error(Errc::InvalidData, "unknown view " + view);
      t.add(r.at("url").get<std::string>(), v, std::move(resp));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("playback fixture: ") + e.what());
  }
  return t;
}

PlaybackTransport PlaybackTransport::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

Response PlaybackTransport::fetch(std::string_view url, View view) {
  auto now = std::chrono::steady_clock::now();
  std::lock_guard lock(*mutex_);
  log_.push_back(RequestRecord{std::string(url), url_host(url), view, now, now});
  auto it = responses_.find({std::string(url), static_cast<int>(view)});
  if (it == responses_.end()) it = responses_.find({std::string(url), -1});
  if (it == responses_.end()) {
    throw Error(Errc::FetchFailure, std::string(to_string(view)) + " view: no recorded response for " + std::string(url));
  }
  return it->second;
}

std::vector<RequestRecord> PlaybackTransport::request_log() const {
  std::lock_guard lock(*mutex_);
  return log_;
}

// --- live --------------------------------------------------------------------

struct LiveTransport::Impl {
  explicit Impl(std::size_t cap) : slots(cap) {}
  Semaphore slots;
  std::mutex mutex;
  std::map<std::string, std::chrono::steady_clock::time_point> next_allowed;
  std::vector<RequestRecord> log;
};

LiveTransport::LiveTransport(LiveTransportOptions options)
    : options_(std::move(options)), impl_(new Impl(std::max<std::size_t>(1, options_.max_concurrency))) {}

LiveTransport::~LiveTransport() { delete impl_; }

Response LiveTransport::fetch(std::string_view url_text, View view) {
  auto url = parse_url(url_text);
  if (!url || (url->scheme != "http" && url->scheme != "https") || url->host.empty()) {
    throw Error(Errc::FetchFailure, std::string(to_string(view)) + " view: unsupported URL " + std::string(url_text));
  }

  // Per-host politeness: reserve the next slot, then wait for it.
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(impl_->mutex);
    auto now = std::chrono::steady_clock::now();
    auto& next = impl_->next_allowed[url->host];
    slot = std::max(now, next);
    next = slot + options_.per_host_delay;
  }
  std::this_thread::sleep_until(slot);

  impl_->slots.acquire();
  struct Release {
    Semaphore& s;
    ~Release() { s.release(); }
  } release{impl_->slots};

  auto started = std::chrono::steady_clock::now();
  std::string origin = url->scheme + "://" + url->host;
  if (!url->port.empty()) origin += ":" + url->port;
  httplib::Client client(origin);
  client.set_follow_location(false);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  if (options_.use_proxy_env) {
    const char* names[] = {url->scheme == "https" ? "HTTPS_PROXY" : "HTTP_PROXY",
                           url->scheme == "https" ? "https_proxy" : "http_proxy"};
    for (const char* name : names) {
      const char* value = std::getenv(name);
      if (!value || !*value) continue;
      std::string proxy = value;
      if (!is_absolute_url(proxy)) proxy = "http://" + proxy;
      if (auto p = parse_url(proxy); p && !p->host.empty()) {
        client.set_proxy(p->host, p->port.empty() ? 80 : std::stoi(p->port));
        break;
      }
    }
  }
  httplib::Headers headers{
      {"User-Agent", view == View::Crawler ? options_.crawler_user_agent : options_.user_user_agent},
      {"Accept", "text/html,application/xhtml+xml;q=0.9,*/*;q=0.8"}};
  std::string target = url->path.empty() ? "/" : url->path;
  if (url->query) target += "?" + *url->query;

  ++g_live_calls;
  std::string body;
  bool too_large = false;
  auto result = client.Get(target, headers, [&](const char* data, std::size_t len) {
    if (body.size() + len > options_.max_body_bytes) {
      too_large = true;
      return false;
    }
    body.append(data, len);
    return true;
  });
  auto finished = std::chrono::steady_clock::now();
  {
    std::lock_guard lock(impl_->mutex);
    impl_->log.push_back(RequestRecord{std::string(url_text), url->host, view, started, finished});
  }
  if (!result) {
    auto err = result.error();
    std::string cause = httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw Error(Errc::TimeoutExceeded, std::string(to_string(view)) + " view: " + cause);
    }
    if (!(err == httplib::Error::Canceled && too_large)) {
      throw Error(Errc::FetchFailure, std::string(to_string(view)) + " view: " + cause);
    }
  }
  Response resp;
  resp.status = result ? result->status : 200;
  if (result) {
    for (const auto& [k, v] : result->headers) resp.headers[to_lower_ascii(k)] = v;
  }
  resp.body = std::move(body);
  resp.final_url = std::string(url_text);
  return resp;
}

std::vector<RequestRecord> LiveTransport::request_log() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->log;
}

// --- operations --------------------------------------------------------------

SnapshotPair fetch_pair(std::string_view url, Transport& transport) {
  if (!is_absolute_url(url)) throw Error(Errc::InvalidBaseUrl, "fetch_pair needs an absolute URL");
  SnapshotPair pair;
  auto get = [&](View view, std::chrono::system_clock::time_point& at) {
    Response r = transport.fetch(url, view);
    at = std::chrono::system_clock::now();
    if (r.status < 200 || r.status >= 300) {
      throw Error(Errc::FetchFailure, std::string(to_string(view)) + " view: HTTP status " + std::to_string(r.status));
    }
    return parse_html(r.body, r.final_url.empty() ? url : std::string_view(r.final_url));
  };
  pair.crawler_view = get(View::Crawler, pair.crawler_fetched_at);
  pair.user_view = get(View::User, pair.user_fetched_at);
  return pair;
}

std::optional<std::pair<std::string, RedirectMechanism>> redirect_target(const Response& response,
                                                                         std::string_view url) {
  auto resolve = [&](const std::string& ref) -> std::optional<std::string> { return resolve_url(url, ref); };
  if (response.status >= 300 && response.status < 400) {
    auto it = response.headers.find("location");
    if (it != response.headers.end() && !it->second.empty()) {
      if (auto target = resolve(it->second)) return std::make_pair(*target, RedirectMechanism::Http3xx);
    }
    return std::nullopt;
  }
  if (response.body.empty()) return std::nullopt;
  PageDocument doc;
  try {
    doc = parse_html(response.body, url);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::optional<std::pair<std::string, RedirectMechanism>> found;
  for_each_element(doc.dom_root, [&](const DomNode& node) {
    if (found || node.tag != "meta") return;
    const std::string* equiv = node.attribute("http-equiv");
    const std::string* content = node.attribute("content");
    if (!equiv || !content || to_lower_ascii(*equiv) != "refresh") return;
    if (auto ref = refresh_target(*content)) {
      if (auto target = resolve(*ref)) found = std::make_pair(*target, RedirectMechanism::MetaRefresh);
    }
  });
  if (found) return found;
  // Inline scripts are scanned, never executed.
  for_each_element(doc.dom_root, [&](const DomNode& node) {
    if (found || node.tag != "script" || node.attribute("src")) return;
    std::string code;
    collect_text(node, code);
    std::smatch m;
    if (std::regex_search(code, m, script_location_pattern())) {
      std::string ref = m[1].matched ? m[1].str() : m[2].str();
      if (auto target = resolve(ref)) found = std::make_pair(*target, RedirectMechanism::ScriptLocation);
    }
  });
  return found;
}

RedirectChain follow_redirects(std::string_view url, Transport& transport, std::size_t max_hops, View view) {
  if (max_hops < 1) throw Error(Errc::OutOfRange, "max_hops must be >= 1");
  RedirectChain chain;
  chain.hops.push_back(RedirectHop{std::string(url), std::nullopt});
  while (true) {
    const std::string current = chain.hops.back().url;
    Response r = transport.fetch(current, view);
    auto next = redirect_target(r, current);
    if (!next) {
      chain.landing_body = std::move(r.body);
      break;
    }
    if (chain.hops.size() >= max_hops) {
      chain.truncated = true;
      chain.landing_body = std::move(r.body);
      break;
    }
    chain.hops.push_back(RedirectHop{next->first, next->second});
  }
  return chain;
}

// --- DNS ---------------------------------------------------------------------

std::vector<std::string> LiveDnsResolver::resolve(std::string_view host) {
  ++g_live_calls;
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  int rc = getaddrinfo(std::string(host).c_str(), nullptr, &hints, &res);
  if (rc == EAI_NONAME
#ifdef EAI_NODATA
      || rc == EAI_NODATA
#endif
  ) {
    return {};
  }
  if (rc != 0) throw Error(Errc::ResolverFailure, std::string(host) + ": " + gai_strerror(rc));
  std::set<std::string> addresses;
  for (addrinfo* p = res; p; p = p->ai_next) {
    char buf[INET6_ADDRSTRLEN] = {};
    const void* addr = p->ai_family == AF_INET
                           ? static_cast<const void*>(&reinterpret_cast<sockaddr_in*>(p->ai_addr)->sin_addr)
                           : static_cast<const void*>(&reinterpret_cast<sockaddr_in6*>(p->ai_addr)->sin6_addr);
    if (inet_ntop(p->ai_family, addr, buf, sizeof buf)) addresses.insert(buf);
  }
  freeaddrinfo(res);
  return {addresses.begin(), addresses.end()};
}

FixtureDnsResolver FixtureDnsResolver::from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != 1) throw Error(Errc::InvalidData, "unsupported DNS fixture schema_version");
  FixtureDnsResolver r;
  try {
    for (const auto& [host, addrs] : j.at("records").items()) r.add(host, addrs.get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("DNS fixture: ") + e.what());
  }
  return r;
}

FixtureDnsResolver FixtureDnsResolver::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, path.string() + ": " + e.what());
  }
  return from_json(j);
}

void FixtureDnsResolver::add(std::string host, std::vector<std::string> addresses) {
  std::lock_guard lock(*mutex_);
  records_[to_lower_ascii(host)] = std::move(addresses);
}

std::vector<std::string> FixtureDnsResolver::resolve(std::string_view host_in) {
  std::string host = to_lower_ascii(host_in);
  std::lock_guard lock(*mutex_);
  queries_.push_back(host);
  if (auto it = records_.find(host); it != records_.end()) return it->second;
  // Closest enclosing wildcard record.
  for (auto dot = host.find('.'); dot != std::string::npos; dot = host.find('.', dot + 1)) {
    if (auto it = records_.find("*" + host.substr(dot)); it != records_.end()) return it->second;
  }
  return {};
}

std::vector<std::string> FixtureDnsResolver::queries() const {
  std::lock_guard lock(*mutex_);
  return queries_;
}

bool is_valid_domain(std::string_view domain) {
  if (domain.empty() || domain.size() > 253) return false;
  if (domain.back() == '.') domain.remove_suffix(1);
  std::size_t labels = 0;
  std::size_t start = 0;
  while (start <= domain.size()) {
    auto end = domain.find('.', start);
    if (end == std::string_view::npos) end = domain.size();
    auto label = domain.substr(start, end - start);
    if (label.empty() || label.size() > 63 || label.front() == '-' || label.back() == '-') return false;
    for (char c : label) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
      if (!ok) return false;
    }
    ++labels;
    start = end + 1;
  }
  return labels >= 2;
}

DnsProbeResult dns_wildcard_probe(std::string_view domain, DnsResolver& resolver, std::uint64_t seed, std::size_t k) {
  if (!is_valid_domain(domain)) throw Error(Errc::InvalidData, "invalid domain: " + std::string(domain));
  if (k < 1) throw Error(Errc::OutOfRange, "probe count must be >= 1");
  DnsProbeResult result;
  result.domain = to_lower_ascii(domain);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a, stable across platforms
  for (unsigned char c : result.domain) h = (h ^ c) * 0x100000001b3ULL;
  std::mt19937_64 rng(seed ^ h);
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::optional<std::set<std::string>> first;
  bool wildcard = true;
  for (std::size_t i = 0; i < k; ++i) {
    std::string label;
    for (int c = 0; c < 16; ++c) label += kAlphabet[rng() % kAlphabet.size()];
    result.probe_labels.push_back(label);
    auto addrs = resolver.resolve(label + "." + result.domain);
    std::set<std::string> set(addrs.begin(), addrs.end());
    if (set.empty()) wildcard = false;
    if (!first) {
      first = set;
    } else if (*first != set) {
      wildcard = false;
    }
  }
  result.wildcard_detected = wildcard;
  return result;
}

nlohmann::json to_json(const RedirectChain& chain) {
  nlohmann::json hops = nlohmann::json::array();
  for (const auto& h : chain.hops) {
    hops.push_back({{"url", h.url}, {"via", h.via ? nlohmann::json(to_string(*h.via)) : nlohmann::json(nullptr)}});
  }
  return nlohmann::json{{"schema_version", 1},
                        {"hops", hops},
                        {"origin_query_class", to_string(chain.origin_query_class)},
                        {"truncated", chain.truncated}};
}

nlohmann::json to_json(const DnsProbeResult& r) {
  return nlohmann::json{{"schema_version", 1},
                        {"domain", r.domain},
                        {"wildcard_detected", r.wildcard_detected},
                        {"probe_labels", r.probe_labels}};
}

}  // namespace seoaudit

#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <set>
#include <thread>

#include "helpers.hpp"
#include "seoaudit/error.hpp"
#include "seoaudit/netio.hpp"

using namespace seoaudit;

namespace {

PlaybackTransport fixture_transport() { return PlaybackTransport::load(testutil::fixtures() / "netio" / "playback.json"); }

// Answers one in three lookups.
class PartialResolver final : public DnsResolver {
 public:
  std::vector<std::string> resolve(std::string_view) override {
    return (calls_++ % 3 == 0) ? std::vector<std::string>{"192.0.2.1"} : std::vector<std::string>{};
  }

 private:
  int calls_ = 0;
};

}  // namespace

TEST_SUITE("netio") {
  TEST_CASE("single 200 response is a one-hop chain") {
    auto t = fixture_transport();
    auto chain = follow_redirects("http://plain.example.org/", t);
    REQUIRE(chain.hops.size() == 1);
    CHECK_FALSE(chain.hops[0].via.has_value());
    CHECK_FALSE(chain.truncated);
  }

  TEST_CASE("301 then meta refresh") {
    auto t = fixture_transport();
    auto chain = follow_redirects("http://a.example.org/start", t);
    REQUIRE(chain.hops.size() == 3);
    CHECK(chain.hops[1].url == "http://b.example.org/hop");
    CHECK(chain.hops[1].via == RedirectMechanism::Http3xx);
    CHECK(chain.hops[2].url == "http://landing.example.org/final");
    CHECK(chain.hops[2].via == RedirectMechanism::MetaRefresh);
    CHECK(chain.landing_body.find("jackpot") != std::string::npos);
  }

  TEST_CASE("script location change is found statically") {
    auto t = fixture_transport();
    auto chain = follow_redirects("http://script.example.org/", t);
    REQUIRE(chain.hops.size() == 2);
    CHECK(chain.hops[1].url == "http://script.example.org/next");
    CHECK(chain.hops[1].via == RedirectMechanism::ScriptLocation);
  }

  TEST_CASE("redirect loop is truncated at the hop limit") {
    auto t = fixture_transport();
    auto chain = follow_redirects("http://loop.example.org/a", t, 10);
    CHECK(chain.hops.size() == 10);
    CHECK(chain.truncated);
    CHECK_THROWS_AS(follow_redirects("http://loop.example.org/a", t, 0), Error);
  }

  TEST_CASE("redirect target parsing") {
    Response r;
    r.status = 302;
    r.headers["location"] = "../up";
    auto t = redirect_target(r, "http://x.test/a/b");
    REQUIRE(t.has_value());
    CHECK(t->first == "http://x.test/up");
    Response s;
    s.status = 200;
    s.body = "<script>location.replace(\"https://y.test/\")</script>";
    CHECK(redirect_target(s, "http://x.test/")->second == RedirectMechanism::ScriptLocation);
    Response plain;
    plain.status = 200;
    plain.body = "<p>nothing</p>";
    CHECK_FALSE(redirect_target(plain, "http://x.test/").has_value());
  }

  TEST_CASE("dual-view fetch") {
    auto t = fixture_transport();
    auto same = fetch_pair("http://same.example.com/", t);
    CHECK(visible_text(same.crawler_view) == visible_text(same.user_view));
    CHECK(cloaking_similarities(same, "sourdough").signature_sim == 1.0);
    auto cloaked = fetch_pair("http://cloak.example.com/", t);
    CHECK(visible_text(cloaked.crawler_view) != visible_text(cloaked.user_view));
    auto log = t.request_log();
    REQUIRE(log.size() == 4);
    CHECK(log[2].view == View::Crawler);
    CHECK(log[3].view == View::User);
  }

  TEST_CASE("fetch failures name the view") {
    auto t = fixture_transport();
    try {
      fetch_pair("http://broken.example.com/", t);
      FAIL("expected FetchFailure");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::FetchFailure);
      CHECK(std::string(e.what()).find("crawler") != std::string::npos);
    }
    CHECK_THROWS_AS(t.fetch("http://unrecorded.example.com/", View::User), Error);
  }

  TEST_CASE("playback rejects wrong formats") {
    CHECK_THROWS_AS(PlaybackTransport::from_json(nlohmann::json{{"schema_version", 2}}), Error);
    CHECK_THROWS_AS(PlaybackTransport::load(testutil::fixtures() / "netio" / "missing.json"), Error);
  }

  TEST_CASE("dns wildcard probe") {
    auto dns = FixtureDnsResolver::load(testutil::fixtures() / "netio" / "dns.json");
    auto wild = dns_wildcard_probe("wild.example.net", dns, 1);
    CHECK(wild.wildcard_detected);
    REQUIRE(wild.probe_labels.size() == 3);
    for (const auto& l : wild.probe_labels) {
      CHECK(l.size() == 16);
      CHECK(std::all_of(l.begin(), l.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }));
    }
    CHECK(dns.queries().size() == 3);
    CHECK_FALSE(dns_wildcard_probe("tame.example.net", dns, 1).wildcard_detected);
    PartialResolver partial;
    CHECK_FALSE(dns_wildcard_probe("partial.example.net", partial, 1).wildcard_detected);
    CHECK(dns_wildcard_probe("wild.example.net", dns, 9).probe_labels == dns_wildcard_probe("wild.example.net", dns, 9).probe_labels);
    CHECK_THROWS_AS(dns_wildcard_probe("localhost", dns), Error);
    CHECK_FALSE(is_valid_domain("bad..domain"));
  }

  TEST_CASE("no test in this suite reached a real network host") {
    // The loopback case below talks to 127.0.0.1 only; everything before it is playback.
    CHECK(live_network_calls() == 0);
  }

  TEST_CASE("live transport politeness against a loopback server" * doctest::timeout(30)) {
    httplib::Server server;
    std::atomic<int> in_flight{0};
    std::atomic<int> peak{0};
    server.Get("/.*", [&](const httplib::Request& req, httplib::Response& res) {
      int now = ++in_flight;
      int prev = peak.load();
      while (now > prev && !peak.compare_exchange_weak(prev, now)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(60));
      --in_flight;
      res.set_content("<p>ua " + req.get_header_value("User-Agent") + "</p>", "text/html");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    LiveTransportOptions opt;
    opt.per_host_delay = std::chrono::milliseconds(120);
    opt.max_concurrency = 2;
    opt.use_proxy_env = false;
    LiveTransport live(opt);
    std::string base = "http://127.0.0.1:" + std::to_string(port);

    std::vector<std::thread> workers;
    for (int i = 0; i < 4; ++i) {
      workers.emplace_back([&, i] { live.fetch(base + "/p" + std::to_string(i), View::User); });
    }
    for (auto& w : workers) w.join();
    auto log = live.request_log();
    REQUIRE(log.size() == 4);
    std::sort(log.begin(), log.end(), [](const auto& a, const auto& b) { return a.started < b.started; });
    for (std::size_t i = 1; i < log.size(); ++i) {
      CHECK(log[i].started - log[i - 1].started >= std::chrono::milliseconds(115));
    }
    CHECK(peak.load() <= 2);

    // Without a delay the concurrency cap is what limits overlap.
    LiveTransportOptions burst = opt;
    burst.per_host_delay = std::chrono::milliseconds(0);
    LiveTransport capped(burst);
    peak = 0;
    workers.clear();
    for (int i = 0; i < 6; ++i) {
      workers.emplace_back([&, i] { capped.fetch(base + "/b" + std::to_string(i), View::User); });
    }
    for (auto& w : workers) w.join();
    CHECK(peak.load() <= 2);
    CHECK(capped.request_log().size() == 6);

    auto crawler = live.fetch(base + "/ua", View::Crawler);
    CHECK(crawler.body.find("Googlebot") != std::string::npos);
    CHECK(crawler.status == 200);

    server.stop();
    runner.join();
    CHECK_THROWS_AS(live.fetch("http://127.0.0.1:1/", View::User), Error);
  }
}

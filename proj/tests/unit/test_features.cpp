#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seoaudit/error.hpp"
#include "seoaudit/features.hpp"

using namespace seoaudit;

namespace {

FeatureVector features_of(const std::string& html) { return extract_features(parse_html(html, "http://a.test/")); }

double mean_of(const std::vector<FeatureVector>& v, Feature f) {
  double s = 0;
  for (const auto& x : v) s += feature_value(x, f);
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("hand-counted fixture") {
    auto v = features_of("<html><body><p>a</p><p>b</p><img src=x alt=\"d\"></body></html>");
    CHECK(v.text_fragmentation == 2);
    CHECK(v.dom_depth == 3);
    CHECK(v.alt_coverage == 1.0);
    CHECK(v.multimodal_count == 1);
  }

  TEST_CASE("vacuous alt coverage") {
    CHECK(features_of("<p>no images here</p>").alt_coverage == 1.0);
    CHECK(features_of("<p>x</p><img src=a><img src=b alt=ok>").alt_coverage == doctest::Approx(0.5));
  }

  TEST_CASE("full meta checklist") {
    auto v = features_of(
        "<html><head><meta charset=utf-8><title>T</title><meta name=description content=d>"
        "<meta name=keywords content=k><link rel=canonical href=/c><meta name=robots content=all>"
        "<meta name=viewport content=w><meta property=og:title content=a><meta property=og:description content=b>"
        "<meta property=og:image content=c><meta name=twitter:card content=s><meta name=author content=me>"
        "</head><body><p>x</p></body></html>");
    CHECK(v.meta_completeness == 1.0);
    CHECK(features_of("<html><head><title>x</title></head><body><p>y</p></body></html>").meta_completeness ==
          doctest::Approx(1.0 / 12.0));
  }

  TEST_CASE("link and tag counts") {
    auto v = features_of("<body><p><a href=/a>1</a><a href=/b>2</a><a href=http://z.test/>3</a></p></body>");
    CHECK(v.internal_links == 2);
    CHECK(v.external_links == 1);
    CHECK(v.tag_diversity == 4);  // html body p a; no implied head
  }

  TEST_CASE("relative difference against published feature rows") {
    // table cells are percentages; tolerance is 0.01 percentage points
    CHECK(std::abs(relative_difference(60.09, 50.48) - 19.04) <= 0.01);
    CHECK(std::abs(relative_difference(13.93, 12.51) - 11.36) <= 0.01);
    CHECK(relative_difference(5, 5) == 0.0);
    CHECK_THROWS_AS(relative_difference(1, 0), Error);
  }

  TEST_CASE("welch t-test against a hand computation") {
    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b = {2, 4, 6, 8, 10};
    // means 3 and 6, variances 2.5 and 10, n = 5
    double se = std::sqrt(2.5 / 5 + 10.0 / 5);
    double df = std::pow(2.5 / 5 + 10.0 / 5, 2) / (std::pow(2.5 / 5, 2) / 4 + std::pow(10.0 / 5, 2) / 4);
    auto r = welch_t_test(a, b);
    CHECK(r.t == doctest::Approx(-3.0 / se));
    CHECK(r.degrees_of_freedom == doctest::Approx(df));
    CHECK(r.p_value == doctest::Approx(0.10753119493062718).epsilon(1e-6));  // scipy.stats.ttest_ind(equal_var=False)
    std::vector<double> c = {1, 1, 1};
    CHECK(welch_t_test(c, c).p_value == 1.0);
  }

  TEST_CASE("paragraph stats and heading depth") {
    auto doc = parse_html("<h1>T</h1><h3>s</h3><p>one two</p><p>three four five six</p>", "http://a.test/");
    auto s = paragraph_stats(doc);
    CHECK(s.count == 2);
    CHECK(s.mean_tokens == 3.0);
    CHECK(max_heading_level(doc) == 3);
  }

  TEST_CASE("json round trip") {
    auto v = features_of("<p>x</p><img src=a alt=b><a href=http://q.test/>q</a>");
    CHECK(feature_vector_from_json(to_json(v)) == v);
  }

  TEST_CASE("property: adding an alt-text image is monotone") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      std::string body = "<p>text</p>";
      std::size_t n = rng() % 5;
      for (std::size_t k = 0; k < n; ++k) body += rng() % 2 ? "<img src=a alt=x>" : "<img src=b>";
      auto before = features_of(body);
      auto after = features_of(body + "<img src=c alt=new>");
      CHECK(after.multimodal_count >= before.multimodal_count);
      if (before.alt_coverage < 1.0) CHECK(after.alt_coverage >= before.alt_coverage);
    }
  }

  // Inline text siblings merge into one block when adjacent, so the permuted
  // siblings are block-level or text-free.
  TEST_CASE("property: sibling order does not change features") {
    std::vector<std::string> parts = {"<p>a b</p>", "<div><span>c</span></div>", "<img src=x alt=y>",
                                      "<p><a href=/in>i</a></p>", "<div><a href=http://out.test/>o</a></div>",
                                      "<ul><li>z</li></ul>", "<video src=v></video>"};
    auto reference = features_of("<body>" + std::accumulate(parts.begin(), parts.end(), std::string{}) + "</body>");
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      std::shuffle(parts.begin(), parts.end(), rng);
      CHECK(features_of("<body>" + std::accumulate(parts.begin(), parts.end(), std::string{}) + "</body>") == reference);
    }
  }

  TEST_CASE("property: group difference matches a recount from raw vectors") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1.0, 50.0);
    for (int round = 0; round < 50; ++round) {
      std::vector<FeatureVector> up(2 + rng() % 6), down(2 + rng() % 6);
      for (auto* group : {&up, &down}) {
        for (auto& v : *group) {
          v = {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng) / 50, u(rng) / 50};
        }
      }
      auto diffs = group_difference(up, down);
      REQUIRE(diffs.size() == kAllFeatures.size());
      for (const auto& d : diffs) {
        double mu = mean_of(up, d.feature);
        double md = mean_of(down, d.feature);
        REQUIRE(d.difference_percent.has_value());
        CHECK(*d.difference_percent == doctest::Approx((mu - md) / md * 100.0).epsilon(1e-4));
        CHECK(d.p_value.has_value());
      }
    }
  }
}

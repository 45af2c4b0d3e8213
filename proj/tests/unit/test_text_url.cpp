#include <doctest.h>

#include "seoaudit/text.hpp"
#include "seoaudit/url.hpp"

using namespace seoaudit;

TEST_SUITE("text_url") {
  TEST_CASE("word tokens split on punctuation and lowercase") {
    CHECK(word_tokens("Best Widget-Pro, Review!") == std::vector<std::string>{"best", "widget", "pro", "review"});
    CHECK(word_tokens("   ").empty());
  }

  TEST_CASE("whitespace collapsing handles nbsp") {
    CHECK(collapse_whitespace("  a \t b\xC2\xA0 c  ") == "a b c");
    CHECK(count_whitespace_tokens(" one  two three ") == 3);
  }

  TEST_CASE("sentence split keeps terminators") {
    auto s = split_sentences("First one. Second? Third! tail");
    REQUIRE(s.size() == 4);
    CHECK(s[0] == "First one.");
    CHECK(s[3] == "tail");
    CHECK(split_sentences("v1.2 is out.").size() == 1);
  }

  TEST_CASE("invalid utf8 becomes replacement characters") {
    std::string bad = "a\xFF" "b";
    CHECK(sanitize_utf8(bad) == "a\xEF\xBF\xBD" "b");
    CHECK(utf8_to_scalars("h\xC3\xA9") == std::u32string{U'h', U'é'});
  }

  TEST_CASE("percent formatting") {
    CHECK(format_percent(0.9978, 2) == "99.78%");
    CHECK(format_fixed(0.15, 1) == "0.1");  // round-half-even on the binary value
  }

  TEST_CASE("url resolution") {
    CHECK(resolve_url("http://a.test/dir/page", "../x?q=1") == "http://a.test/x?q=1");
    CHECK(resolve_url("http://a.test/", "//b.test/y") == "http://b.test/y");
    CHECK_FALSE(resolve_url("relative/base", "x").has_value());
    CHECK(url_host("HTTPS://WWW.Example.COM:8443/p") == "www.example.com");
    CHECK_FALSE(is_absolute_url("/x"));
  }

  TEST_CASE("registrable domains from the bundled suffix list") {
    CHECK(registrable_domain("www.example.co.uk") == "example.co.uk");
    CHECK(registrable_domain("a.b.example.com") == "example.com");
    CHECK(registrable_domain("127.0.0.1") == "127.0.0.1");
    CHECK(registrable_domain_of_url("http://news.bbc.co.uk/x") == "bbc.co.uk");
    CHECK(PublicSuffixList::bundled().rule_count() > 1000);
  }

  TEST_CASE("suffix list wildcard and exception rules") {
    auto psl = PublicSuffixList::parse("// comment\ncom\n*.ck\n!www.ck\n");
    CHECK(psl.registrable_domain("a.b.example.com") == "example.com");
    CHECK(psl.registrable_domain("shop.foo.ck") == "shop.foo.ck");
    CHECK(psl.registrable_domain("www.ck") == "www.ck");
    CHECK(psl.public_suffix("x.unknowntld") == "unknowntld");
  }
}

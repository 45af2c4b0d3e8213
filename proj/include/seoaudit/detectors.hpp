#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "seoaudit/page_model.hpp"
#include "seoaudit/scorer.hpp"

namespace seoaudit {

enum class AttackType { SemanticConfusion, Redirection, Cloaking, KeywordStuffing, LinkFarm };

inline constexpr std::array<AttackType, 5> kAllAttackTypes = {
    AttackType::SemanticConfusion, AttackType::Redirection, AttackType::Cloaking,
    AttackType::KeywordStuffing, AttackType::LinkFarm};

const char* to_string(AttackType t) noexcept;
std::optional<AttackType> attack_type_from_string(std::string_view name);

enum class QueryClass { Illegal, Hot, Benign };

const char* to_string(QueryClass c) noexcept;
std::optional<QueryClass> query_class_from_string(std::string_view name);

// Judgment thresholds.
inline constexpr double kTopicConfidence = 0.9;
inline constexpr double kMaliciousConfidence = 0.9;
inline constexpr double kSignatureSimMax = 0.9;
inline constexpr double kSummarySimMin = 0.33;
inline constexpr double kDomSimMin = 0.66;
inline constexpr std::size_t kHotwordsMin = 10;
inline constexpr std::size_t kSpamSubpagesMin = 100;
inline constexpr double kLinkChurnMin = 0.2;
inline constexpr std::size_t kBlankTokenThreshold = 10;
inline constexpr std::size_t kShingleWidth = 8;
inline constexpr std::size_t kAuthorityTopN = 10000;

struct SemanticConfusionEvidence {
  TopicProbabilities probabilities;
  std::size_t visible_tokens = 0;
};

enum class RedirectMechanism { Http3xx, MetaRefresh, ScriptLocation };

const char* to_string(RedirectMechanism m) noexcept;

struct RedirectHop {
  std::string url;
  std::optional<RedirectMechanism> via;  // how this hop was reached; none for the first
};

struct RedirectChain {
  std::vector<RedirectHop> hops;
  QueryClass origin_query_class = QueryClass::Benign;
  bool truncated = false;
  std::string landing_body;  // body of the last fetched hop
};

struct RedirectionEvidence {
  std::size_t hop_count = 0;
  QueryClass query_class = QueryClass::Benign;
  std::string origin_domain;
  bool origin_reputable = false;
  bool reputable_origin_pattern = false;  // illegal query from a reputable origin
  bool hot_query_pattern = false;         // hot query redirected
  double landing_prob_malicious = 0;
};

struct CloakingEvidence {
  double signature_sim = 0;
  double summary_sim = 0;
  double dom_sim = 0;
  bool blank = false;
};

struct StuffingEvidence {
  std::size_t hotwords_count = 0;
  std::size_t spam_subpages = 0;
  std::size_t subpage_count = 0;
  std::vector<std::string> matched;
};

struct LinkFarmEvidence {
  std::size_t set_a_size = 0;
  std::size_t set_b_size = 0;
  std::size_t diff_size = 0;
  bool wildcard_dns = false;

  double ratio() const;
};

using Evidence = std::variant<SemanticConfusionEvidence, RedirectionEvidence, CloakingEvidence,
                              StuffingEvidence, LinkFarmEvidence>;

struct Verdict {
  AttackType attack_type = AttackType::SemanticConfusion;
  bool flagged = false;
  Evidence evidence;
};

// Judgment predicates over evidence quantities.
bool semantic_confusion_rule(double max_topic, double prob_malicious) noexcept;
bool redirection_rule(bool structural_pattern, double landing_prob_malicious) noexcept;
bool cloaking_rule(double signature_sim, double summary_sim, double dom_sim) noexcept;
bool keyword_stuffing_rule(std::size_t hotwords_count, std::size_t spam_subpages) noexcept;
bool link_farm_rule(std::size_t set_a_size, std::size_t set_b_size, std::size_t diff_size) noexcept;

// Re-evaluates the predicate that matches the evidence alternative.
bool judge(const Evidence& evidence);

// Domains ranked Tranco-style ("rank,domain" lines).
class AuthorityList {
 public:
  static AuthorityList parse(std::istream& in);
  static AuthorityList load(const std::string& path);

  void add(std::string domain, std::size_t rank);
  std::optional<std::size_t> rank_of(std::string_view host) const;

  // Ranked within top_n, or an education/government registration.
  bool is_reputable(std::string_view host, std::size_t top_n = kAuthorityTopN) const;

 private:
  std::unordered_map<std::string, std::size_t> ranks_;
};

bool is_edu_or_gov_host(std::string_view host);

// Newline-delimited trending phrases; blank lines and '#' comments skipped.
class HotwordList {
 public:
  static HotwordList parse(std::istream& in);
  static HotwordList load(const std::string& path);
  explicit HotwordList(std::vector<std::string> phrases = {});

  bool empty() const { return phrases_.empty(); }
  std::size_t size() const { return phrases_.size(); }

  // Distinct phrases occurring as whole-word sequences, case-insensitively.
  std::vector<std::string> matches(std::string_view text) const;

 private:
  std::vector<std::string> phrases_;
  std::vector<std::vector<std::string>> phrase_tokens_;
};

struct SiteCounts {
  std::size_t subpage_count = 0;
  std::size_t spam_subpage_count = 0;
};

// Per-domain subpage counts (stands in for a live "site:" query).
class SiteStats {
 public:
  virtual ~SiteStats() = default;
  virtual std::optional<SiteCounts> lookup(std::string_view registrable_domain) const = 0;
};

class StaticSiteStats final : public SiteStats {
 public:
  StaticSiteStats() = default;
  // {"domain": {"subpages": n, "spam_subpages": m}, ...}
  static StaticSiteStats from_json(const nlohmann::json& j);
  void set(std::string domain, SiteCounts counts);
  std::optional<SiteCounts> lookup(std::string_view registrable_domain) const override;

 private:
  std::map<std::string, SiteCounts, std::less<>> counts_;
};

Verdict detect_semantic_confusion(const PageDocument& doc, const TextScorer& scorer);
Verdict judge_semantic_confusion(const TopicProbabilities& probabilities, std::size_t visible_tokens = kBlankTokenThreshold);

Verdict detect_redirection(const RedirectChain& chain, const AuthorityList& authority, const TextScorer& scorer,
                           const PageDocument& landing_doc);

CloakingEvidence cloaking_similarities(const SnapshotPair& pair, std::string_view serp_summary);
Verdict detect_cloaking(const CloakingEvidence& evidence);

Verdict detect_keyword_stuffing(const PageDocument& doc, const HotwordList& hotwords, const SiteStats& site);

Verdict detect_link_farm(const std::set<std::string>& visit_a, const std::set<std::string>& visit_b,
                         bool wildcard_dns);

// Similarity primitives used by cloaking detection.
double shingle_jaccard(std::string_view text_a, std::string_view text_b, std::size_t width = kShingleWidth);
double summary_containment(std::string_view summary, std::string_view page_text);
double dom_path_similarity(const DomNode& a, const DomNode& b);

nlohmann::json to_json(const Verdict& v);

}  // namespace seoaudit

#include "seoaudit/detectors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "seoaudit/error.hpp"
#include "seoaudit/text.hpp"
#include "seoaudit/url.hpp"

namespace seoaudit {

namespace {

std::unordered_set<std::string> shingles(std::string_view text, std::size_t width) {
  auto tokens = whitespace_tokens(to_lower_ascii(text));
  std::unordered_set<std::string> out;
  if (tokens.empty()) return out;
  if (tokens.size() < width) {
    out.insert(join(tokens, " "));
    return out;
  }
  for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
    std::string s = tokens[i];
    for (std::size_t k = 1; k < width; ++k) {
      s += ' ';
      s += tokens[i + k];
    }
    out.insert(std::move(s));
  }
  return out;
}

void collect_paths(const DomNode& node, const std::string& prefix, std::map<std::string, std::size_t>& out) {
  if (!node.is_element()) return;
  std::string path = prefix.empty() ? node.tag : prefix + "/" + node.tag;
  ++out[path];
  for (const auto& child : node.children) collect_paths(child, path, out);
}

std::string trim(std::string s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

const char* to_string(AttackType t) noexcept {
  switch (t) {
    case AttackType::SemanticConfusion: return "semantic_confusion";
    case AttackType::Redirection: return "redirection";
    case AttackType::Cloaking: return "cloaking";
    case AttackType::KeywordStuffing: return "keyword_stuffing";
    case AttackType::LinkFarm: return "link_farm";
  }
  return "unknown";
}

std::optional<AttackType> attack_type_from_string(std::string_view name) {
  for (auto t : kAllAttackTypes) {
    if (name == to_string(t)) return t;
  }
  return std::nullopt;
}

const char* to_string(QueryClass c) noexcept {
  switch (c) {
    case QueryClass::Illegal: return "illegal";
    case QueryClass::Hot: return "hot";
    case QueryClass::Benign: return "benign";
  }
  return "unknown";
}

std::optional<QueryClass> query_class_from_string(std::string_view name) {
  for (auto c : {QueryClass::Illegal, QueryClass::Hot, QueryClass::Benign}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(RedirectMechanism m) noexcept {
  switch (m) {
    case RedirectMechanism::Http3xx: return "http-3xx";
    case RedirectMechanism::MetaRefresh: return "meta-refresh";
    case RedirectMechanism::ScriptLocation: return "script-location";
  }
  return "unknown";
}

double LinkFarmEvidence::ratio() const {
  double a = set_a_size ? static_cast<double>(diff_size) / static_cast<double>(set_a_size) : 0.0;
  double b = set_b_size ? static_cast<double>(diff_size) / static_cast<double>(set_b_size) : 0.0;
  return std::max(a, b);
}

bool semantic_confusion_rule(double max_topic, double prob_malicious) noexcept {
  return max_topic > kTopicConfidence && prob_malicious > kMaliciousConfidence;
}

bool redirection_rule(bool structural_pattern, double landing_prob_malicious) noexcept {
  return structural_pattern && landing_prob_malicious > kMaliciousConfidence;
}

bool cloaking_rule(double signature_sim, double summary_sim, double dom_sim) noexcept {
  return signature_sim < kSignatureSimMax && summary_sim > kSummarySimMin && dom_sim > kDomSimMin;
}

bool keyword_stuffing_rule(std::size_t hotwords_count, std::size_t spam_subpages) noexcept {
  return hotwords_count >= kHotwordsMin && spam_subpages >= kSpamSubpagesMin;
}

bool link_farm_rule(std::size_t set_a_size, std::size_t set_b_size, std::size_t diff_size) noexcept {
  // Compared in integers: diff/|S| >= 0.2  <=>  5*diff >= |S|.
  return 5 * diff_size >= set_a_size || 5 * diff_size >= set_b_size;
}

bool judge(const Evidence& evidence) {
  struct Visitor {
    bool operator()(const SemanticConfusionEvidence& e) const {
      return semantic_confusion_rule(e.probabilities.max_topic(), e.probabilities.prob_malicious);
    }
    bool operator()(const RedirectionEvidence& e) const {
      return e.hop_count >= 2 && redirection_rule(e.reputable_origin_pattern || e.hot_query_pattern,
                                                  e.landing_prob_malicious);
    }
    bool operator()(const CloakingEvidence& e) const {
      return !e.blank && cloaking_rule(e.signature_sim, e.summary_sim, e.dom_sim);
    }
    bool operator()(const StuffingEvidence& e) const { return keyword_stuffing_rule(e.hotwords_count, e.spam_subpages); }
    bool operator()(const LinkFarmEvidence& e) const { return link_farm_rule(e.set_a_size, e.set_b_size, e.diff_size); }
  };
  return std::visit(Visitor{}, evidence);
}

// --- authority and hotword lists ------------------------------------------

AuthorityList AuthorityList::parse(std::istream& in) {
  AuthorityList list;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::InvalidData, "authority list line " + std::to_string(lineno));
    std::size_t rank = 0;
    try {
      rank = std::stoul(line.substr(0, comma));
    } catch (const std::exception&) {
      throw Error(Errc::InvalidData, "authority list rank on line " + std::to_string(lineno));
    }
    list.add(trim(line.substr(comma + 1)), rank);
  }
  return list;
}

AuthorityList AuthorityList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot read authority list " + path);
  return parse(in);
}

void AuthorityList::add(std::string domain, std::size_t rank) {
  domain = to_lower_ascii(domain);
  auto it = ranks_.find(domain);
  if (it == ranks_.end() || rank < it->second) ranks_[domain] = rank;
}

std::optional<std::size_t> AuthorityList::rank_of(std::string_view host) const {
  std::string h = to_lower_ascii(host);
  if (auto it = ranks_.find(h); it != ranks_.end()) return it->second;
  if (auto it = ranks_.find(registrable_domain(h)); it != ranks_.end()) return it->second;
  return std::nullopt;
}

bool is_edu_or_gov_host(std::string_view host) {
  static const std::set<std::string, std::less<>> kInstitutional = {"edu", "gov", "mil", "ac", "gob", "gouv", "govt", "go"};
  std::string suffix = PublicSuffixList::bundled().public_suffix(host);
  std::string_view rest = suffix;
  while (!rest.empty()) {
    auto dot = rest.find('.');
    std::string_view label = rest.substr(0, dot);
    if (kInstitutional.count(label)) return true;
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  return false;
}

bool AuthorityList::is_reputable(std::string_view host, std::size_t top_n) const {
  if (auto rank = rank_of(host); rank && *rank <= top_n) return true;
  return is_edu_or_gov_host(host);
}

HotwordList::HotwordList(std::vector<std::string> phrases) {
  std::set<std::string> seen;
  for (auto& p : phrases) {
    auto tokens = word_tokens(p);
    if (tokens.empty()) continue;
    std::string key = join(tokens, " ");
    if (!seen.insert(key).second) continue;
    phrases_.push_back(key);
    phrase_tokens_.push_back(std::move(tokens));
  }
}

HotwordList HotwordList::parse(std::istream& in) {
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    phrases.push_back(line);
  }
  return HotwordList(std::move(phrases));
}

HotwordList HotwordList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot read hotword list " + path);
  return parse(in);
}

std::vector<std::string> HotwordList::matches(std::string_view text) const {
  auto tokens = word_tokens(text);
  std::vector<std::string> found;
  for (std::size_t p = 0; p < phrases_.size(); ++p) {
    const auto& needle = phrase_tokens_[p];
    auto it = std::search(tokens.begin(), tokens.end(), needle.begin(), needle.end());
    if (it != tokens.end()) found.push_back(phrases_[p]);
  }
  return found;
}

StaticSiteStats StaticSiteStats::from_json(const nlohmann::json& j) {
  StaticSiteStats stats;
  try {
    if (j.value("schema_version", 0) != 1) throw Error(Errc::InvalidData, "site stats: unsupported schema_version");
    for (const auto& [domain, v] : j.at("sites").items()) {
      stats.set(domain, SiteCounts{v.at("subpages").get<std::size_t>(), v.at("spam_subpages").get<std::size_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("site stats: ") + e.what());
  }
  return stats;
}

void StaticSiteStats::set(std::string domain, SiteCounts counts) { counts_[to_lower_ascii(domain)] = counts; }

std::optional<SiteCounts> StaticSiteStats::lookup(std::string_view registrable_domain) const {
  auto it = counts_.find(to_lower_ascii(registrable_domain));
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

// --- detectors -------------------------------------------------------------

Verdict judge_semantic_confusion(const TopicProbabilities& probabilities, std::size_t visible_tokens) {
  if (visible_tokens < kBlankTokenThreshold) {
    throw Error(Errc::BlankPage, "page has " + std::to_string(visible_tokens) + " visible tokens");
  }
  SemanticConfusionEvidence e{probabilities, visible_tokens};
  return Verdict{AttackType::SemanticConfusion, judge(e), e};
}

Verdict detect_semantic_confusion(const PageDocument& doc, const TextScorer& scorer) {
  std::string text = visible_text(doc);
  std::size_t visible_tokens = count_whitespace_tokens(text);
  if (visible_tokens < kBlankTokenThreshold) {
    throw Error(Errc::BlankPage, "page has " + std::to_string(visible_tokens) + " visible tokens");
  }
  auto tokens = scoring_tokens(text);
  return judge_semantic_confusion(score_text(tokens, scorer), visible_tokens);
}

Verdict detect_redirection(const RedirectChain& chain, const AuthorityList& authority, const TextScorer& scorer,
                           const PageDocument& landing_doc) {
  if (chain.hops.size() < 2) throw Error(Errc::NoRedirection, "chain has a single hop");
  RedirectionEvidence e;
  e.hop_count = chain.hops.size();
  e.query_class = chain.origin_query_class;
  std::string origin_host = url_host(chain.hops.front().url);
  e.origin_domain = registrable_domain(origin_host);
  e.origin_reputable = authority.is_reputable(origin_host);
  e.reputable_origin_pattern = e.query_class == QueryClass::Illegal && e.origin_reputable;
  e.hot_query_pattern = e.query_class == QueryClass::Hot;
  auto tokens = scoring_tokens(visible_text(landing_doc));
  e.landing_prob_malicious = score_text(tokens, scorer).prob_malicious;
  return Verdict{AttackType::Redirection, judge(e), e};
}

double shingle_jaccard(std::string_view text_a, std::string_view text_b, std::size_t width) {
  auto a = shingles(text_a, width);
  auto b = shingles(text_b, width);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& s : a) inter += b.count(s);
  std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double summary_containment(std::string_view summary, std::string_view page_text) {
  auto needle = word_tokens(summary);
  if (needle.empty()) return 0.0;
  auto page = word_tokens(page_text);
  std::unordered_set<std::string> vocab(page.begin(), page.end());
  std::size_t hits = 0;
  for (const auto& t : needle) hits += vocab.count(t);
  return static_cast<double>(hits) / static_cast<double>(needle.size());
}

double dom_path_similarity(const DomNode& a, const DomNode& b) {
  std::map<std::string, std::size_t> pa;
  std::map<std::string, std::size_t> pb;
  collect_paths(a, "", pa);
  collect_paths(b, "", pb);
  std::size_t lo = 0;
  std::size_t hi = 0;
  auto ia = pa.begin();
  auto ib = pb.begin();
  while (ia != pa.end() || ib != pb.end()) {
    if (ib == pb.end() || (ia != pa.end() && ia->first < ib->first)) {
      hi += ia->second;
      ++ia;
    } else if (ia == pa.end() || ib->first < ia->first) {
      hi += ib->second;
      ++ib;
    } else {
      lo += std::min(ia->second, ib->second);
      hi += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return hi == 0 ? 1.0 : static_cast<double>(lo) / static_cast<double>(hi);
}

CloakingEvidence cloaking_similarities(const SnapshotPair& pair, std::string_view serp_summary) {
  std::string crawler_text = visible_text(pair.crawler_view);
  std::string user_text = visible_text(pair.user_view);
  CloakingEvidence e;
  if (count_whitespace_tokens(crawler_text) < kBlankTokenThreshold ||
      count_whitespace_tokens(user_text) < kBlankTokenThreshold) {
    e.blank = true;
    return e;
  }
  e.signature_sim = shingle_jaccard(crawler_text, user_text);
  e.summary_sim = summary_containment(serp_summary, user_text);
  e.dom_sim = dom_path_similarity(pair.crawler_view.dom_root, pair.user_view.dom_root);
  return e;
}

Verdict detect_cloaking(const CloakingEvidence& evidence) {
  if (evidence.blank) throw Error(Errc::BlankEvidence, "a snapshot view is blank");
  return Verdict{AttackType::Cloaking, judge(evidence), evidence};
}

Verdict detect_keyword_stuffing(const PageDocument& doc, const HotwordList& hotwords, const SiteStats& site) {
  if (hotwords.empty()) throw Error(Errc::InvalidData, "hotword list is empty");
  std::string domain = registrable_domain_of_url(doc.url);
  auto counts = site.lookup(domain);
  if (!counts) throw Error(Errc::MissingSiteStats, "no site statistics for " + domain);
  StuffingEvidence e;
  e.matched = hotwords.matches(visible_text(doc));
  e.hotwords_count = e.matched.size();
  e.spam_subpages = counts->spam_subpage_count;
  e.subpage_count = counts->subpage_count;
  return Verdict{AttackType::KeywordStuffing, judge(e), e};
}

Verdict detect_link_farm(const std::set<std::string>& visit_a, const std::set<std::string>& visit_b,
                         bool wildcard_dns) {
  if (visit_a.empty() || visit_b.empty()) throw Error(Errc::EmptyLinkSet, "both visits need at least one link");
  LinkFarmEvidence e;
  e.set_a_size = visit_a.size();
  e.set_b_size = visit_b.size();
  e.diff_size = static_cast<std::size_t>(std::count_if(
      visit_a.begin(), visit_a.end(), [&](const std::string& u) { return visit_b.count(u) == 0; }));
  e.wildcard_dns = wildcard_dns;
  return Verdict{AttackType::LinkFarm, judge(e), e};
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json ev;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SemanticConfusionEvidence>) {
          ev = {{"prob_14", e.probabilities.prob_14},
                {"max_prob_14", e.probabilities.max_topic()},
                {"prob_malicious", e.probabilities.prob_malicious},
                {"visible_tokens", e.visible_tokens}};
        } else if constexpr (std::is_same_v<T, RedirectionEvidence>) {
          ev = {{"hop_count", e.hop_count},
                {"query_class", to_string(e.query_class)},
                {"origin_domain", e.origin_domain},
                {"origin_reputable", e.origin_reputable},
                {"reputable_origin_pattern", e.reputable_origin_pattern},
                {"hot_query_pattern", e.hot_query_pattern},
                {"landing_prob_malicious", e.landing_prob_malicious}};
        } else if constexpr (std::is_same_v<T, CloakingEvidence>) {
          ev = {{"signature_sim", e.signature_sim},
                {"summary_sim", e.summary_sim},
                {"dom_sim", e.dom_sim},
                {"blank", e.blank}};
        } else if constexpr (std::is_same_v<T, StuffingEvidence>) {
          ev = {{"hotwords_count", e.hotwords_count},
                {"spam_subpages", e.spam_subpages},
                {"subpages", e.subpage_count},
                {"matched", e.matched}};
        } else {
          ev = {{"set_a_size", e.set_a_size},
                {"set_b_size", e.set_b_size},
                {"diff_size", e.diff_size},
                {"ratio", e.ratio()},
                {"wildcard_dns", e.wildcard_dns}};
        }
      },
      v.evidence);
  return nlohmann::json{{"attack_type", to_string(v.attack_type)}, {"flagged", v.flagged}, {"evidence", ev}};
}

}  // namespace seoaudit

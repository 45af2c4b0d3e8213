#include "seoaudit/attackgen.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "seoaudit/error.hpp"
#include "seoaudit/pipeline.hpp"
#include "seoaudit/text.hpp"

namespace seoaudit {

namespace fs = std::filesystem;

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

struct Fill {
  std::string brand;
  std::string entity;

  std::string operator()(std::string s) const {
    s = replace_all(std::move(s), "{product}", brand + " " + entity);
    s = replace_all(std::move(s), "{brand}", brand);
    s = replace_all(std::move(s), "{entity_lc}", to_lower_ascii(entity));
    return replace_all(std::move(s), "{entity}", entity);
  }
};

const std::vector<std::string> kBrandHeads = {"Nova", "Zen",  "Aero",  "Lumi", "Terra", "Vex",
                                              "Orbi", "Pyra", "Quell", "Sola", "Kiro",  "Mira"};
const std::vector<std::string> kBrandTails = {"tek", "ly", "gen", "ora", "ix", "wave", "core", "nest"};

struct SectionTemplate {
  const char* heading;
  bool irrelevant;
  std::vector<std::string> sentences;
};

const std::vector<SectionTemplate> kSections = {
    {"Overview",
     false,
     {"The {product} is built for households that want dependable everyday comfort.",
      "It pairs a clean design with controls that anyone in the family can learn in minutes.",
      "Setup takes a single afternoon and needs no special tools.",
      "Owners report that the {entity_lc} quietly fades into the background once it is running.",
      "The {brand} team tuned every default so the device works well out of the box.",
      "Regular software updates keep the {product} current long after purchase.",
      "A companion app mirrors every setting so changes can be made from anywhere.",
      "The casing uses recycled materials without giving up durability."}},
    {"Key Features",
     false,
     {"The {product} learns daily routines and adjusts its schedule automatically.",
      "Energy reports break usage down by hour, day and month.",
      "Voice assistant support lets owners change settings hands free.",
      "A bright display shows the current state at a glance from across the room.",
      "Geofencing pauses the {entity_lc} when everyone has left home.",
      "Multiple sensors can be paired to balance conditions between rooms.",
      "Firmware is signed and verified before every installation.",
      "Maintenance reminders arrive well before performance starts to drop."}},
    {"How It Works",
     false,
     {"Sensors sample the environment every few seconds and feed a small on-device model.",
      "The model predicts demand and schedules work before it is needed.",
      "When conditions change suddenly the {product} reacts within a minute.",
      "All scheduling decisions can be reviewed in a plain timeline.",
      "Manual overrides always win and expire at the next scheduled change.",
      "The {entity_lc} keeps working offline if the home network goes down.",
      "Data stays on the device unless the owner opts into cloud backup.",
      "Installers can export diagnostics with a single tap."}},
    {"Pricing and Availability",
     false,
     {"The {product} ships in two finishes at the same price.",
      "Every unit includes a two year limited warranty.",
      "Free shipping applies to all orders inside the continental region.",
      "Returns are accepted within thirty days of delivery.",
      "Bundles with extra sensors are available for larger homes.",
      "Replacement parts are stocked for at least seven years.",
      "Utility rebates can lower the effective price in many areas.",
      "Business customers can request volume quotes through the {brand} site."}},
    {"Team",
     true,
     {"Our founders met while studying mechanical engineering.",
      "The company now employs designers, engineers and support staff across three offices.",
      "Weekly team lunches keep everyone connected.",
      "Several team members volunteer at local science fairs.",
      "The office dog has become an unofficial mascot.",
      "New hires spend their first week rotating through every department.",
      "Remote work is supported for most roles.",
      "The team celebrates every product launch with a small party."}},
    {"History",
     true,
     {"{brand} started in a rented garage more than a decade ago.",
      "The first prototype was assembled from spare parts and a borrowed soldering iron.",
      "Early customers were mostly friends and neighbours.",
      "A regional award brought the company its first press coverage.",
      "The company moved into its current headquarters after a successful funding round.",
      "Over the years the catalogue grew from one product to a full line.",
      "The original garage is still used for weekend experiments.",
      "Company archives hold every prototype ever built."}},
};

const std::vector<std::string> kRelevanceSentences = {
    "The {product} delivers consistent {entity_lc} performance in every season.",
    "Independent testers rated the {product} highly for accuracy and ease of use.",
    "Compared with older models the {product} responds faster and wastes less energy.",
    "Buyers choosing a {entity_lc} value the {product} for its reliability.",
    "The {product} integrates with popular smart home platforms without extra hubs.",
    "Every {product} is calibrated at the factory before it ships.",
    "The {product} keeps its settings through power cuts and restarts.",
    "Owners of the {product} save time because routine adjustments happen automatically.",
};

const std::vector<std::string> kNewsParagraphs = {
    "City officials announced on Tuesday that the riverside park will reopen next month after a long renovation. "
    "The project replaced aging walkways and added new lighting along the water.",
    "According to the parks department, the work finished slightly under budget. "
    "Crews also planted more than two hundred trees to restore shade along the main path.",
    "Local businesses expect the reopening to bring more visitors to the waterfront. "
    "Several cafes plan to extend their opening hours during the summer.",
    "Residents can attend a community celebration on the first Saturday after the reopening. "
    "The event will include live music, guided walks and activities for children.",
    "Regional forecasters expect mild weather for the rest of the week. "
    "Light rain is possible on Thursday evening but should clear by the weekend.",
    "The transit authority said additional buses will serve the park route on weekends. "
    "Riders are encouraged to check the updated timetable before travelling.",
};

const std::vector<std::string> kFills = {"4a90d9", "50b37a", "d9824a", "9b59b6", "e0c341", "3aa6a6"};
const std::vector<std::string> kImageSubjects = {"front view", "installed on a wall", "companion app screen",
                                                 "packaging contents", "close-up of the controls", "side profile"};

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::vector<std::string> pick_distinct(std::mt19937_64& rng, const std::vector<std::string>& pool, std::size_t k) {
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  // Partial Fisher-Yates with rng() % n so output does not depend on the
  // standard library's distribution implementations.
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k && i < idx.size(); ++i) {
    std::size_t j = i + pick(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(pool[idx[i]]);
  }
  return out;
}

std::string escape_html(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_data_uri(const std::string& fill) {
  return "data:image/svg+xml,%3Csvg xmlns='http://www.w3.org/2000/svg' width='320' height='200'%3E"
         "%3Crect width='320' height='200' fill='%23" +
         fill + "'/%3E%3C/svg%3E";
}

std::string slug(Technique t) { return replace_all(to_string(t), "_", "-"); }

template <class F>
void for_each_paragraph(std::vector<Section>& sections, F&& f) {
  for (auto& s : sections) {
    f(s.paragraphs);
    for_each_paragraph(s.subsections, f);
  }
}

template <class F>
void for_each_paragraph(const std::vector<Section>& sections, F&& f) {
  for (const auto& s : sections) {
    f(s.paragraphs);
    for_each_paragraph(s.subsections, f);
  }
}

void render_section(std::string& out, const Section& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  std::string h = "h" + std::to_string(s.heading_level);
  out += pad + "<section>\n";
  out += pad + "  <" + h + ">" + escape_html(s.heading) + "</" + h + ">\n";
  for (const auto& p : s.paragraphs) {
    if (p.question) out += pad + "  <p class=\"question\">" + escape_html(*p.question) + "</p>\n";
    out += pad + "  <p>" + escape_html(p.text) + "</p>\n";
  }
  for (const auto& sub : s.subsections) render_section(out, sub, indent + 2);
  out += pad + "</section>\n";
}

std::string first_sentence_subject(const std::string& text) {
  auto sentences = split_sentences(text);
  std::string first = sentences.empty() ? text : sentences.front();
  auto words = whitespace_tokens(first);
  if (words.size() > 6) words.resize(6);
  std::string subject = join(words, " ");
  while (!subject.empty() && std::string_view(".?!,;:").find(subject.back()) != std::string_view::npos) {
    subject.pop_back();
  }
  if (!subject.empty() && subject[0] >= 'A' && subject[0] <= 'Z' && subject.rfind("The ", 0) == 0) {
    subject[0] = 't';
  }
  return subject;
}

}  // namespace

const char* to_string(Technique t) noexcept {
  switch (t) {
    case Technique::Blank: return "blank";
    case Technique::SemanticConfusionBaseline: return "semantic_confusion_baseline";
    case Technique::RewrittenQueryStuffing: return "rewritten_query_stuffing";
    case Technique::InternalLinks: return "internal_links";
    case Technique::Multimodal: return "multimodal";
    case Technique::Nested: return "nested";
    case Technique::Segmented: return "segmented";
    case Technique::Relevance: return "relevance";
    case Technique::QaFormat: return "qa_format";
  }
  return "unknown";
}

std::optional<Technique> technique_from_string(std::string_view name) {
  for (Technique t : kAllTechniques) {
    if (name == to_string(t) || name == slug(t)) return t;
  }
  return std::nullopt;
}

void validate(const BaseContent& base) {
  if (base.sections.empty()) throw Error(Errc::InvalidData, "base content needs at least one section");
  if (collapse_whitespace(base.brand).empty() || collapse_whitespace(base.entity).empty()) {
    throw Error(Errc::InvalidData, "base content needs a brand and an entity");
  }
}

BaseContent generate_base_content(std::uint64_t seed, std::string_view entity, std::string_view site_url) {
  std::mt19937_64 rng(seed);
  BaseContent base;
  base.brand = kBrandHeads[pick(rng, kBrandHeads.size())] + kBrandTails[pick(rng, kBrandTails.size())];
  base.entity = std::string(entity);
  base.site_url = std::string(site_url);
  Fill fill{base.brand, base.entity};
  for (const auto& tpl : kSections) {
    Section s;
    s.heading = tpl.heading;
    s.irrelevant = tpl.irrelevant;
    auto sentences = pick_distinct(rng, tpl.sentences, 8);
    for (std::size_t p = 0; p < 2; ++p) {
      std::vector<std::string> chosen;
      for (std::size_t k = 0; k < 4; ++k) chosen.push_back(fill(sentences[p * 4 + k]));
      s.paragraphs.push_back(Paragraph{join(chosen, " "), std::nullopt});
    }
    base.sections.push_back(std::move(s));
  }
  auto subjects = pick_distinct(rng, kImageSubjects, 3);
  for (const auto& subject : subjects) {
    base.images.push_back(ImageDescriptor{base.product_name() + " " + subject, "The " + base.product_name() + ", " + subject + ".",
                                          kFills[pick(rng, kFills.size())]});
  }
  return base;
}

std::string generate_news_text(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t start = pick(rng, kNewsParagraphs.size());
  std::vector<std::string> paragraphs;
  for (std::size_t i = 0; i < 4; ++i) paragraphs.push_back(kNewsParagraphs[(start + i) % kNewsParagraphs.size()]);
  return join(paragraphs, "\n\n");
}

void TechniqueParams::validate() const {
  if (stuffing_count < 1 || stuffing_count > 100) throw Error(Errc::OutOfRange, "stuffing_count must be in [1, 100]");
  if (relevance_variants < 1 || relevance_variants > 10) {
    throw Error(Errc::OutOfRange, "relevance_variants must be in [1, 10]");
  }
}

nlohmann::json to_json(const TechniqueParams& p) {
  nlohmann::json j{{"seed_queries", p.seed_queries},
                   {"stuffing_count", p.stuffing_count},
                   {"expansion_templates", p.expansion_templates},
                   {"qa_template", p.qa_template},
                   {"irrelevant_headings", p.irrelevant_headings},
                   {"relevance_variants", p.relevance_variants},
                   {"seed", p.seed}};
  j["news_text"] = p.news_text ? nlohmann::json(*p.news_text) : nlohmann::json(nullptr);
  j["promo_text"] = p.promo_text ? nlohmann::json(*p.promo_text) : nlohmann::json(nullptr);
  return j;
}

TechniqueParams technique_params_from_json(const nlohmann::json& j) {
  TechniqueParams p;
  try {
    p.seed_queries = j.value("seed_queries", p.seed_queries);
    p.stuffing_count = j.value("stuffing_count", p.stuffing_count);
    p.expansion_templates = j.value("expansion_templates", p.expansion_templates);
    p.qa_template = j.value("qa_template", p.qa_template);
    p.irrelevant_headings = j.value("irrelevant_headings", p.irrelevant_headings);
    p.relevance_variants = j.value("relevance_variants", p.relevance_variants);
    p.seed = j.value("seed", p.seed);
    if (j.contains("news_text") && !j.at("news_text").is_null()) p.news_text = j.at("news_text").get<std::string>();
    if (j.contains("promo_text") && !j.at("promo_text").is_null()) p.promo_text = j.at("promo_text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("technique params: ") + e.what());
  }
  p.validate();
  return p;
}

std::string render(const BaseContent& c) {
  std::string product = escape_html(c.product_name());
  std::string description;
  for (const auto& s : c.sections) {
    if (!s.paragraphs.empty()) {
      auto sentences = split_sentences(s.paragraphs.front().text);
      description = sentences.empty() ? s.paragraphs.front().text : sentences.front();
      break;
    }
  }
  std::string out;
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n";
  out += "  <meta charset=\"utf-8\">\n";
  out += "  <meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n";
  out += "  <title>" + product + "</title>\n";
  out += "  <meta name=\"description\" content=\"" + escape_html(description) + "\">\n";
  out += "  <meta name=\"keywords\" content=\"" + escape_html(to_lower_ascii(c.entity)) + ", " +
         escape_html(to_lower_ascii(c.brand)) + "\">\n";
  out += "  <meta name=\"robots\" content=\"noindex, nofollow\">\n";
  out += "  <meta property=\"og:title\" content=\"" + product + "\">\n";
  if (!c.site_url.empty()) out += "  <link rel=\"canonical\" href=\"" + escape_html(c.site_url) + "\">\n";
  out += "</head>\n<body>\n";
  out += "  <div class=\"testing-banner\" role=\"note\">" + std::string(kTestingBanner) + "</div>\n";
  out += "  <header>\n    <h1>" + product + "</h1>\n";
  out += "    <nav><a href=\"/\">Home</a> <a href=\"/#details\">Details</a></nav>\n  </header>\n";
  out += "  <main>\n    <article id=\"details\">\n";
  for (const auto& s : c.sections) render_section(out, s, 6);
  for (const auto& img : c.images) {
    out += "      <figure>\n        <img src=\"" + svg_data_uri(img.fill) + "\" alt=\"" + escape_html(img.alt) +
           "\" width=\"320\" height=\"200\">\n";
    out += "        <figcaption>" + escape_html(img.caption) + "</figcaption>\n      </figure>\n";
  }
  out += "    </article>\n  </main>\n";
  if (!c.related_queries.empty()) {
    out += "  <aside class=\"related-searches\">\n    <h2>Related Searches</h2>\n    <ul>\n";
    for (const auto& q : c.related_queries) out += "      <li>" + escape_html(q) + "</li>\n";
    out += "    </ul>\n  </aside>\n";
  }
  if (c.useful_links) {
    out += "  <aside class=\"useful-links\">\n    <h2>Useful Links</h2>\n    <ul>\n";
    for (const auto& link : *c.useful_links) {
      out += "      <li><a href=\"" + escape_html(link) + "\">" + escape_html(link) + "</a></li>\n";
    }
    out += "    </ul>\n  </aside>\n";
  }
  out += "  <footer><small>" + escape_html(c.brand) + " demonstration page. " + std::string(kTestingBanner) +
         ".</small></footer>\n";
  out += "</body>\n</html>\n";
  return out;
}

SiteVariant generate_variant(const BaseContent& base, Technique technique, const TechniqueParams& params) {
  validate(base);
  params.validate();
  SiteVariant v;
  v.technique = technique;
  v.content = base;
  v.manifest = nlohmann::json{{"technique", to_string(technique)}};
  auto& c = v.content;
  auto& m = v.manifest;
  Fill fill{base.brand, base.entity};

  switch (technique) {
    case Technique::Blank:
      break;

    case Technique::SemanticConfusionBaseline: {
      if (!params.news_text || collapse_whitespace(*params.news_text).empty()) {
        throw Error(Errc::MissingParams, "semantic_confusion_baseline needs news_text");
      }
      std::vector<Paragraph> paragraphs;
      std::string_view rest = *params.news_text;
      while (!rest.empty()) {
        auto cut = rest.find("\n\n");
        std::string part = collapse_whitespace(rest.substr(0, cut));
        if (!part.empty()) paragraphs.push_back(Paragraph{part, std::nullopt});
        rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 2);
      }
      std::string promo = params.promo_text
                              ? *params.promo_text
                              : fill("Readers shopping for a {entity_lc} should take a look at the {product}, now "
                                     "available with an exclusive discount. Visit the official {brand} store today "
                                     "to claim the limited offer.");
      paragraphs.insert(paragraphs.begin() + 1, Paragraph{collapse_whitespace(promo), std::nullopt});
      Section news;
      news.heading = "Latest News";
      news.paragraphs = std::move(paragraphs);
      c.sections = {std::move(news)};
      c.images.clear();
      m["news_paragraphs"] = c.sections.front().paragraphs.size() - 1;
      m["promo_position"] = 1;
      break;
    }

    case Technique::RewrittenQueryStuffing: {
      std::vector<std::string> seeds = params.seed_queries;
      if (seeds.empty()) seeds.push_back(base.product_name());
      std::vector<std::string> unique;
      for (const auto& seed : seeds) {
        for (auto& q : rewrite_query(seed, params.expansion_templates, true, params.expansion_templates.size() + 1)) {
          if (std::find(unique.begin(), unique.end(), q) == unique.end()) unique.push_back(std::move(q));
        }
      }
      if (unique.empty()) throw Error(Errc::MissingParams, "seed queries produced no rewrites");
      for (std::size_t i = 0; i < params.stuffing_count; ++i) c.related_queries.push_back(unique[i % unique.size()]);
      m["seed_queries"] = seeds;
      m["stuffing_count"] = params.stuffing_count;
      m["distinct_rewrites"] = std::min(unique.size(), params.stuffing_count);
      break;
    }

    case Technique::InternalLinks:
      if (!c.useful_links) c.useful_links.emplace();
      m["linked_sites"] = c.useful_links->size();
      break;

    case Technique::Multimodal: {
      std::size_t n = c.images.size();
      if (n == 0) throw Error(Errc::MissingParams, "multimodal needs at least one base image");
      for (std::size_t i = 0; i < n; ++i) {
        ImageDescriptor copy = c.images[i];
        copy.alt += " (alternate view)";
        copy.caption = "Another look: " + copy.caption;
        c.images.push_back(std::move(copy));
      }
      m["images_before"] = n;
      m["images_after"] = c.images.size();
      break;
    }

    case Technique::Nested: {
      std::size_t added = 0;
      for (auto& s : c.sections) {
        if (s.heading_level != 2) continue;
        Section sub;
        sub.heading_level = 3;
        sub.heading = s.heading + " in Detail";
        if (s.paragraphs.size() >= 2) {
          auto mid = s.paragraphs.begin() + static_cast<std::ptrdiff_t>(s.paragraphs.size() / 2);
          sub.paragraphs.assign(mid, s.paragraphs.end());
          s.paragraphs.erase(mid, s.paragraphs.end());
        } else {
          sub.paragraphs.push_back(Paragraph{fill("More details about the {product} are listed below. Each point "
                                                  "covers one aspect of daily use."),
                                             std::nullopt});
        }
        s.subsections.insert(s.subsections.begin(), std::move(sub));
        ++added;
      }
      m["subsections_added"] = added;
      break;
    }

    case Technique::Segmented: {
      std::size_t count = 0;
      std::size_t total = 0;
      for_each_paragraph(c.sections, [&](const std::vector<Paragraph>& ps) {
        for (const auto& p : ps) {
          ++count;
          total += count_whitespace_tokens(p.text);
        }
      });
      if (count == 0) throw Error(Errc::MissingParams, "segmented needs at least one paragraph");
      double base_mean = static_cast<double>(total) / static_cast<double>(count);
      double target = base_mean / 2.0;
      std::size_t splits = 0;
      while (static_cast<double>(total) / static_cast<double>(count) > target) {
        std::vector<Paragraph>* best_list = nullptr;
        std::size_t best_index = 0;
        std::size_t best_tokens = 0;
        for_each_paragraph(c.sections, [&](std::vector<Paragraph>& ps) {
          for (std::size_t i = 0; i < ps.size(); ++i) {
            std::size_t n = count_whitespace_tokens(ps[i].text);
            if (n > best_tokens && split_sentences(ps[i].text).size() >= 2) {
              best_list = &ps;
              best_index = i;
              best_tokens = n;
            }
          }
        });
        if (!best_list) break;
        auto sentences = split_sentences((*best_list)[best_index].text);
        std::vector<std::size_t> cumulative;
        std::size_t running = 0;
        for (const auto& s : sentences) cumulative.push_back(running += count_whitespace_tokens(s));
        std::size_t cut = 1;
        double best_gap = 1e300;
        for (std::size_t j = 1; j < sentences.size(); ++j) {
          double gap = std::abs(static_cast<double>(cumulative[j - 1]) - static_cast<double>(running) / 2.0);
          if (gap < best_gap) {
            best_gap = gap;
            cut = j;
          }
        }
        std::vector<std::string> head(sentences.begin(), sentences.begin() + static_cast<std::ptrdiff_t>(cut));
        std::vector<std::string> tail(sentences.begin() + static_cast<std::ptrdiff_t>(cut), sentences.end());
        (*best_list)[best_index].text = join(head, " ");
        best_list->insert(best_list->begin() + static_cast<std::ptrdiff_t>(best_index) + 1,
                          Paragraph{join(tail, " "), std::nullopt});
        ++count;
        ++splits;
      }
      nlohmann::json unsplittable = nlohmann::json::array();
      for_each_paragraph(c.sections, [&](const std::vector<Paragraph>& ps) {
        for (const auto& p : ps) {
          if (static_cast<double>(count_whitespace_tokens(p.text)) > target && split_sentences(p.text).size() < 2) {
            unsplittable.push_back(p.text);
          }
        }
      });
      m["base_mean_tokens"] = base_mean;
      m["target_mean_tokens"] = target;
      m["result_mean_tokens"] = static_cast<double>(total) / static_cast<double>(count);
      m["splits"] = splits;
      m["unsplittable"] = unsplittable;
      break;
    }

    case Technique::Relevance: {
      std::set<std::string> off_topic;
      for (const auto& h : params.irrelevant_headings) off_topic.insert(to_lower_ascii(h));
      nlohmann::json removed = nlohmann::json::array();
      std::vector<Section> kept;
      for (auto& s : c.sections) {
        if (s.irrelevant || off_topic.count(to_lower_ascii(s.heading))) {
          removed.push_back(s.heading);
        } else {
          kept.push_back(std::move(s));
        }
      }
      if (kept.empty()) throw Error(Errc::MissingParams, "relevance would remove every section");
      c.sections = std::move(kept);
      std::mt19937_64 rng(params.seed);
      for (std::size_t i = 0; i < params.relevance_variants; ++i) {
        auto sentences = pick_distinct(rng, kRelevanceSentences, 3);
        for (auto& s : sentences) s = fill(s);
        c.sections.front().paragraphs.push_back(Paragraph{join(sentences, " "), std::nullopt});
      }
      m["removed_sections"] = removed;
      m["variants_added"] = params.relevance_variants;
      break;
    }

    case Technique::QaFormat: {
      if (params.qa_template.find("{subject}") == std::string::npos) {
        throw Error(Errc::MissingParams, "qa_format needs a template containing {subject}");
      }
      std::size_t questions = 0;
      for_each_paragraph(c.sections, [&](std::vector<Paragraph>& ps) {
        for (auto& p : ps) {
          p.question = replace_all(params.qa_template, "{subject}", first_sentence_subject(p.text));
          ++questions;
        }
      });
      m["qa_template"] = params.qa_template;
      m["questions"] = questions;
      break;
    }
  }

  v.html = render(c);
  v.banner_present = v.html.find(kTestingBanner) != std::string::npos;
  return v;
}

std::vector<SiteVariant> link_network(std::vector<SiteVariant> sites) {
  if (sites.size() < 2) throw Error(Errc::TooFewSites, "link network needs at least two sites");
  std::vector<std::string> urls;
  for (const auto& s : sites) {
    if (s.content.site_url.empty()) throw Error(Errc::InvalidData, "site " + s.site_id + " has no URL");
    urls.push_back(s.content.site_url);
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    std::vector<std::string> links;
    for (std::size_t j = 0; j < urls.size(); ++j) {
      if (j != i) links.push_back(urls[j]);
    }
    sites[i].content.useful_links = std::move(links);
    sites[i].manifest["linked_sites"] = urls.size() - 1;
    sites[i].html = render(sites[i].content);
    sites[i].banner_present = sites[i].html.find(kTestingBanner) != std::string::npos;
  }
  return sites;
}

nlohmann::json to_json(const CorpusSpec& spec) {
  nlohmann::json techniques = nlohmann::json::array();
  for (Technique t : spec.techniques) techniques.push_back(to_string(t));
  return nlohmann::json{{"schema_version", 1},
                        {"per_technique", spec.per_technique},
                        {"seed", spec.seed},
                        {"domain", spec.domain},
                        {"entity", spec.entity},
                        {"techniques", techniques},
                        {"params", to_json(spec.params)}};
}

CorpusSpec corpus_spec_from_json(const nlohmann::json& j) {
  CorpusSpec spec;
  try {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1) {
      throw Error(Errc::InvalidData, "unsupported corpus spec schema_version");
    }
    spec.per_technique = j.value("per_technique", spec.per_technique);
    spec.seed = j.value("seed", spec.seed);
    spec.domain = j.value("domain", spec.domain);
    spec.entity = j.value("entity", spec.entity);
    if (j.contains("techniques")) {
      spec.techniques.clear();
      for (const auto& name : j.at("techniques")) {
        auto t = technique_from_string(name.get<std::string>());
        if (!t) throw Error(Errc::InvalidData, "unknown technique " + name.dump());
        spec.techniques.push_back(*t);
      }
    }
    if (j.contains("params")) spec.params = technique_params_from_json(j.at("params"));
    if (j.contains("root")) spec.root = j.at("root").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, std::string("corpus spec: ") + e.what());
  }
  if (spec.per_technique < 1) throw Error(Errc::OutOfRange, "per_technique must be >= 1");
  return spec;
}

std::vector<SiteVariant> generate_corpus(const CorpusSpec& spec) {
  std::vector<SiteVariant> all;
  for (Technique t : spec.techniques) {
    std::vector<SiteVariant> group;
    for (std::size_t i = 0; i < spec.per_technique; ++i) {
      char index[16];
      std::snprintf(index, sizeof index, "%02zu", i + 1);
      std::string site_id = slug(t) + "-" + index;
      std::string url = "http://" + site_id + "." + spec.domain + "/";
      std::uint64_t site_seed = mix(spec.seed, i);
      BaseContent base = generate_base_content(site_seed, spec.entity, url);
      TechniqueParams params = spec.params;
      params.seed = mix(site_seed, static_cast<std::uint64_t>(t) + 101);
      if (t == Technique::SemanticConfusionBaseline && !params.news_text) {
        params.news_text = generate_news_text(site_seed);
      }
      SiteVariant v = generate_variant(base, t, params);
      v.site_id = site_id;
      v.manifest["site_id"] = site_id;
      group.push_back(std::move(v));
    }
    if (t == Technique::InternalLinks && group.size() >= 2) group = link_network(std::move(group));
    for (auto& v : group) all.push_back(std::move(v));
  }
  return all;
}

CorpusManifest build_corpus(const CorpusSpec& spec) {
  if (spec.root.empty()) throw Error(Errc::IoFailure, "corpus root is empty");
  std::error_code ec;
  if (fs::exists(spec.root, ec) && !fs::is_empty(spec.root, ec)) {
    if (!spec.force) throw Error(Errc::NonEmptyOutputDir, spec.root.string() + " is not empty");
    // Only a previous corpus is cleared; anything else is left alone.
    if (!fs::exists(spec.root / "manifest.json")) {
      throw Error(Errc::NonEmptyOutputDir, spec.root.string() + " is not empty and holds no corpus manifest");
    }
    for (Technique t : kAllTechniques) fs::remove_all(spec.root / to_string(t), ec);
    fs::remove(spec.root / "manifest.json", ec);
  }
  fs::create_directories(spec.root, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create " + spec.root.string() + ": " + ec.message());

  auto variants = generate_corpus(spec);
  CorpusManifest manifest;
  manifest.domain = spec.domain;
  manifest.entity = spec.entity;
  manifest.seed = spec.seed;
  nlohmann::json pages = nlohmann::json::array();
  for (const auto& v : variants) {
    fs::path rel = fs::path(to_string(v.technique)) / v.site_id / "index.html";
    fs::create_directories((spec.root / rel).parent_path(), ec);
    if (ec) throw Error(Errc::IoFailure, "cannot create directory for " + rel.string());
    write_file_atomic(spec.root / rel, v.html);
    CorpusPage page{v.technique, v.site_id, v.content.site_url, rel, sha256_hex(v.html)};
    pages.push_back({{"technique", to_string(v.technique)},
                     {"site_id", page.site_id},
                     {"url", page.url},
                     {"path", rel.generic_string()},
                     {"sha256", page.sha256},
                     {"banner_present", v.banner_present},
                     {"parameters", v.manifest}});
    manifest.pages.push_back(std::move(page));
  }
  manifest.raw = nlohmann::json{{"schema_version", CorpusManifest::kSchemaVersion},
                                {"format", CorpusManifest::kFormatName},
                                {"spec", to_json(spec)},
                                {"page_count", manifest.pages.size()},
                                {"pages", pages}};
  write_file_atomic(spec.root / "manifest.json", manifest.raw.dump(2) + "\n");
  return manifest;
}

std::optional<Technique> CorpusManifest::technique_of(std::string_view url) const {
  for (const auto& p : pages) {
    if (p.url == url) return p.technique;
  }
  return std::nullopt;
}

CorpusManifest CorpusManifest::load(const fs::path& root_or_file) {
  fs::path file = fs::is_directory(root_or_file) ? root_or_file / "manifest.json" : root_or_file;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(Errc::ManifestMissing, "no corpus manifest at " + file.string());
  CorpusManifest m;
  try {
    in >> m.raw;
    if (m.raw.value("format", std::string{}) != kFormatName) throw Error(Errc::InvalidData, "not a corpus manifest");
    if (m.raw.value("schema_version", 0) != kSchemaVersion) {
      throw Error(Errc::InvalidData, "unsupported corpus manifest schema_version");
    }
    const auto& spec = m.raw.at("spec");
    m.domain = spec.value("domain", std::string{});
    m.entity = spec.value("entity", std::string{});
    m.seed = spec.value("seed", std::uint64_t{0});
    for (const auto& p : m.raw.at("pages")) {
      auto t = technique_from_string(p.at("technique").get<std::string>());
      if (!t) throw Error(Errc::InvalidData, "unknown technique in manifest");
      m.pages.push_back(CorpusPage{*t, p.at("site_id").get<std::string>(), p.at("url").get<std::string>(),
                                   fs::path(p.at("path").get<std::string>()), p.at("sha256").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, "corpus manifest " + file.string() + ": " + e.what());
  }
  return m;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::IoFailure, "SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::IoFailure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace seoaudit

#include "seoaudit/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "seoaudit/error.hpp"
#include "seoaudit/page_model.hpp"
#include "seoaudit/text.hpp"

namespace seoaudit {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string load_document(const std::filesystem::path& path) {
  std::string raw = read_file(path);
  auto ext = to_lower_ascii(path.extension().string());
  if (ext == ".html" || ext == ".htm") {
    return visible_text(parse_html(raw, "http://scorer.invalid/" + path.filename().string()));
  }
  return raw;
}

std::vector<std::string> load_files(const nlohmann::json& files, const std::filesystem::path& root) {
  std::vector<std::string> docs;
  for (const auto& f : files) docs.push_back(load_document(root / f.get<std::string>()));
  return docs;
}

}  // namespace

double TopicProbabilities::max_topic() const { return *std::max_element(prob_14.begin(), prob_14.end()); }

std::size_t TopicProbabilities::argmax_topic() const {
  return static_cast<std::size_t>(std::max_element(prob_14.begin(), prob_14.end()) - prob_14.begin());
}

BagOfWordsScorer::BagOfWordsScorer(const ScorerCorpus& corpus) : smoothing_(corpus.smoothing) {
  if (corpus.topics.size() != kTopicCount) {
    throw Error(Errc::InvalidData, "scorer corpus needs exactly 14 topics, got " + std::to_string(corpus.topics.size()));
  }
  if (corpus.malicious.empty()) throw Error(Errc::InvalidData, "scorer corpus has no malicious documents");
  if (smoothing_ <= 0) throw Error(Errc::InvalidData, "smoothing must be positive");

  std::vector<const std::string*> all_docs;
  for (const auto& t : corpus.topics) {
    labels_.push_back(t.label);
    for (const auto& d : t.documents) all_docs.push_back(&d);
  }
  for (const auto& d : corpus.malicious) all_docs.push_back(&d);
  for (const auto& d : corpus.benign) all_docs.push_back(&d);

  // Vocabulary: most frequent tokens, ties broken lexicographically.
  std::map<std::string, std::size_t> freq;
  for (const auto* d : all_docs) {
    for (auto& tok : scoring_tokens(*d)) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > corpus.vocabulary_size) ranked.resize(corpus.vocabulary_size);
  std::sort(ranked.begin(), ranked.end());
  for (std::size_t i = 0; i < ranked.size(); ++i) vocabulary_.emplace(ranked[i].first, i);

  for (const auto& t : corpus.topics) {
    std::vector<const std::string*> docs;
    for (const auto& d : t.documents) docs.push_back(&d);
    topic_models_.push_back(fit(docs));
  }
  std::vector<const std::string*> mal;
  for (const auto& d : corpus.malicious) mal.push_back(&d);
  malicious_model_ = fit(mal);
  std::vector<const std::string*> ben;
  if (corpus.benign.empty()) {
    for (const auto& t : corpus.topics) {
      for (const auto& d : t.documents) ben.push_back(&d);
    }
  } else {
    for (const auto& d : corpus.benign) ben.push_back(&d);
  }
  benign_model_ = fit(ben);
  initialized_ = true;
}

BagOfWordsScorer::ClassModel BagOfWordsScorer::fit(const std::vector<const std::string*>& docs) const {
  std::vector<double> counts(vocabulary_.size(), 0.0);
  double total = 0;
  for (const auto* d : docs) {
    for (const auto& tok : scoring_tokens(*d)) {
      auto it = vocabulary_.find(tok);
      if (it == vocabulary_.end()) continue;
      counts[it->second] += 1;
      total += 1;
    }
  }
  ClassModel model;
  double denom = total + smoothing_ * static_cast<double>(vocabulary_.size());
  model.log_likelihood.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) model.log_likelihood[i] = std::log((counts[i] + smoothing_) / denom);
  return model;
}

std::vector<double> BagOfWordsScorer::log_posteriors(const std::vector<std::size_t>& ids,
                                                     const std::vector<const ClassModel*>& classes) const {
  std::vector<double> logp(classes.size(), 0.0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t id : ids) logp[c] += classes[c]->log_likelihood[id];
  }
  double peak = *std::max_element(logp.begin(), logp.end());
  double norm = 0;
  for (double& v : logp) {
    v = std::exp(v - peak);
    norm += v;
  }
  for (double& v : logp) v /= norm;
  return logp;
}

TopicProbabilities BagOfWordsScorer::score(std::span<const std::string> tokens) const {
  if (!initialized_) throw Error(Errc::UninitializedScorer, "bag-of-words scorer has no trained model");
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < tokens.size() && i < kMaxSequenceLength; ++i) {
    auto it = vocabulary_.find(to_lower_ascii(tokens[i]));
    if (it != vocabulary_.end()) ids.push_back(it->second);
  }
  TopicProbabilities out;
  std::vector<const ClassModel*> topics;
  for (const auto& m : topic_models_) topics.push_back(&m);
  auto topic_post = log_posteriors(ids, topics);
  std::copy(topic_post.begin(), topic_post.end(), out.prob_14.begin());
  out.prob_malicious = log_posteriors(ids, {&malicious_model_, &benign_model_})[0];
  return out;
}

BagOfWordsScorer BagOfWordsScorer::from_manifest(const std::filesystem::path& manifest) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, "scorer manifest: " + std::string(e.what()));
  }
  if (j.value("schema_version", 0) != 1) throw Error(Errc::InvalidData, "scorer manifest: unsupported schema_version");
  auto root = manifest.parent_path();
  ScorerCorpus corpus;
  try {
    for (const auto& t : j.at("topics")) {
      corpus.topics.push_back({t.at("label").get<std::string>(), load_files(t.at("files"), root)});
    }
    corpus.malicious = load_files(j.at("malicious").at("files"), root);
    if (j.contains("benign")) corpus.benign = load_files(j.at("benign").at("files"), root);
    corpus.vocabulary_size = j.value("vocabulary_size", corpus.vocabulary_size);
    corpus.smoothing = j.value("smoothing", corpus.smoothing);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidData, "scorer manifest: " + std::string(e.what()));
  }
  return BagOfWordsScorer(corpus);
}

std::vector<std::string> scoring_tokens(std::string_view text) { return word_tokens(text); }

TopicProbabilities score_text(std::span<const std::string> tokens, const TextScorer& scorer) {
  if (!scorer.initialized()) throw Error(Errc::UninitializedScorer, "text scorer is not initialized");
  return scorer.score(tokens.subspan(0, std::min(tokens.size(), kMaxSequenceLength)));
}

}  // namespace seoaudit

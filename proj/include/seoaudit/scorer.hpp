#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace seoaudit {

inline constexpr std::size_t kTopicCount = 14;
inline constexpr std::size_t kMaxSequenceLength = 500;

struct TopicProbabilities {
  std::array<double, kTopicCount> prob_14{};
  double prob_malicious = 0.5;

  double max_topic() const;
  std::size_t argmax_topic() const;
};

// Deterministic mapping from a token sequence to topic and maliciousness
// probabilities. Implementations are immutable once initialized and safe to
// share across threads.
class TextScorer {
 public:
  virtual ~TextScorer() = default;
  virtual bool initialized() const = 0;
  // Throws Error{UninitializedScorer} when not initialized.
  virtual TopicProbabilities score(std::span<const std::string> tokens) const = 0;
};

// Hyperparameters of the convolutional text classifier used for the original
// labelling runs. Kept as configuration for an external backend; this library
// does not train it.
struct TextCnnConfig {
  std::size_t vocabulary_size = 10000;
  std::size_t max_sequence_length = kMaxSequenceLength;
  std::size_t embedding_dimension = 128;
  std::array<int, 3> filter_sizes = {3, 4, 5};
  std::size_t filters_per_size = 128;
  double dropout = 0.5;
  std::size_t batch_size = 64;
  const char* pooling = "GlobalMaxPooling1D";
  const char* optimizer = "Adam";
};

struct ScorerCorpus {
  struct Topic {
    std::string label;
    std::vector<std::string> documents;
  };
  std::vector<Topic> topics;              // exactly kTopicCount entries
  std::vector<std::string> malicious;     // malicious seed documents
  std::vector<std::string> benign;        // empty: topic documents are used
  std::size_t vocabulary_size = 10000;
  double smoothing = 1.0;
};

// Multinomial naive Bayes with additive smoothing and uniform class priors,
// so an empty token sequence maps to the uniform topic distribution and a
// maliciousness of 0.5.
class BagOfWordsScorer final : public TextScorer {
 public:
  BagOfWordsScorer() = default;
  explicit BagOfWordsScorer(const ScorerCorpus& corpus);

  // Manifest JSON: {"schema_version":1, "topics":[{"label":..,"files":[..]}],
  // "malicious":{"files":[..]}, "benign":{"files":[..]}, "vocabulary_size":..,
  // "smoothing":..}. Paths are relative to the manifest; .html/.htm files are
  // reduced to their visible text.
  static BagOfWordsScorer from_manifest(const std::filesystem::path& manifest);

  bool initialized() const override { return initialized_; }
  TopicProbabilities score(std::span<const std::string> tokens) const override;

  const std::vector<std::string>& topic_labels() const { return labels_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }

 private:
  struct ClassModel {
    std::vector<double> log_likelihood;  // indexed by vocabulary id
  };

  ClassModel fit(const std::vector<const std::string*>& docs) const;
  std::vector<double> log_posteriors(const std::vector<std::size_t>& ids,
                                     const std::vector<const ClassModel*>& classes) const;

  bool initialized_ = false;
  double smoothing_ = 1.0;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> vocabulary_;
  std::vector<ClassModel> topic_models_;
  ClassModel malicious_model_;
  ClassModel benign_model_;
};

// Word tokens of a page's visible text, as consumed by score_text.
std::vector<std::string> scoring_tokens(std::string_view text);

// Truncates to the first kMaxSequenceLength tokens and scores.
TopicProbabilities score_text(std::span<const std::string> tokens, const TextScorer& scorer);

}  // namespace seoaudit

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compsum/rules.hpp"
#include "compsum/treebank.hpp"

namespace compsum {

using FeatureVector = std::vector<double>;

inline constexpr int kFeatureSchemaVersion = 1;

// Feature layout sizes; see featurize_span / featurize_sentence.
inline constexpr std::size_t kSpanFeatureDim = 12 + 12 + 6;
inline constexpr std::size_t kSentenceFeatureDim = 5;

// Weight vector plus bias; predict() applies a sigmoid to w.x + bias.
struct LinearScorer {
  std::vector<double> weights;
  double bias = 0.0;

  static LinearScorer zeros(std::size_t dim) {
    return {std::vector<double>(dim, 0.0), 0.0};
  }
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t steps = 2000;
  std::size_t batch_size = 16;
  std::uint64_t seed = 7;
};

struct LabeledExample {
  FeatureVector features;
  bool positive = false;
};

struct TrainResult {
  LinearScorer model;
  std::vector<double> loss_trace;  // mini-batch loss per step
  double initial_loss = 0.0;       // full-dataset mean NLL before training
  double final_loss = 0.0;         // full-dataset mean NLL after training
};

// Deterministic span features: one-hot rule id (12), one-hot constituent tag
// over a fixed inventory with an overflow bucket (12), span length over
// sentence length, relative start, constituent depth, sentence-edge
// indicator, capitalized-token fraction, constant 1.
FeatureVector featurize_span(const SentenceRecord& sentence, const CandidateSpan& span);

// Sentence features: relative position, length over the document's longest
// sentence, fraction of this sentence's content tokens appearing in at least
// two other sentences, first-sentence indicator, constant 1.
FeatureVector featurize_sentence(const DocumentRecord& doc, std::size_t index);

// sigmoid(w.x + bias), clamped strictly inside (0, 1).
double predict(const LinearScorer& model, const FeatureVector& features);

// Gradient of the batch-mean negative log-likelihood: the weight partials
// followed by the bias partial (size dim + 1).
std::vector<double> gradient(const LinearScorer& model,
                             const std::vector<LabeledExample>& batch);

// Full-dataset mean negative log-likelihood.
double average_loss(const LinearScorer& model,
                    const std::vector<LabeledExample>& data);

// Mini-batch gradient descent from a zero initialization with
// seed-determined shuffling. Throws TrainingDiverged if a step's loss is
// NaN.
TrainResult train(const std::vector<LabeledExample>& data, const TrainConfig& cfg);

void save_model(const LinearScorer& model, const std::string& path);
LinearScorer load_model(const std::string& path);

// Externally supplied posteriors, keyed by (doc_id, sent_idx) for sentence
// rows and (doc_id, sent_idx, primary range) for span rows.
class ScoreTable {
 public:
  std::optional<double> sentence_score(const std::string& doc_id,
                                       std::size_t sent_idx) const;
  std::optional<double> span_score(const std::string& doc_id, std::size_t sent_idx,
                                   const TokenRange& primary) const;
  std::size_t size() const { return sentence_.size() + span_.size(); }

  void insert_sentence(const std::string& doc_id, std::size_t sent_idx, double score);
  void insert_span(const std::string& doc_id, std::size_t sent_idx,
                   const TokenRange& primary, double score);

 private:
  std::map<std::pair<std::string, std::size_t>, double> sentence_;
  std::map<std::tuple<std::string, std::size_t, std::size_t, std::size_t>, double> span_;
};

// Reads a JSONL score file: {doc_id, sent_idx, span?: [start, end], score}.
// Scores outside [0, 1] and duplicate keys raise ValidationError with the
// offending line number.
ScoreTable load_external_scores(const std::string& path);

}  // namespace compsum

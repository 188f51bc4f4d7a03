#include "compsum/scorer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "compsum/errors.hpp"

namespace compsum {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 11> kTagInventory = {
    "PRN", "FRAG", "JJ", "ADJP", "RB", "ADVP", "PP", "NP", "VP", "S", "SBAR"};

std::size_t tag_slot(const std::string& tag) {
  for (std::size_t i = 0; i < kTagInventory.size(); ++i) {
    if (kTagInventory[i] == tag) return i;
  }
  return kTagInventory.size();  // overflow bucket
}

// Depth of the first pre-order constituent matching the span and tag; the
// primary range of a proposed span always aligns with one.
std::size_t constituent_depth(const Constituent& node, const TokenRange& range,
                              const std::string& tag, std::size_t depth,
                              bool& found) {
  if (node.start == range.start && node.end == range.end && node.tag == tag) {
    found = true;
    return depth;
  }
  for (const Constituent& child : node.children) {
    if (child.start <= range.start && range.end <= child.end) {
      std::size_t d = constituent_depth(child, range, tag, depth + 1, found);
      if (found) return d;
    }
  }
  return 0;
}

bool is_capitalized(const std::string& surface) {
  return !surface.empty() && std::isupper(static_cast<unsigned char>(surface.front()));
}

bool is_content_token(const std::string& surface) {
  return std::any_of(surface.begin(), surface.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
}

std::string lowercased(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double raw_logit(const LinearScorer& model, const FeatureVector& x) {
  if (x.size() != model.weights.size()) {
    throw ContractViolation("predict: feature dimension " + std::to_string(x.size()) +
                            " does not match model dimension " +
                            std::to_string(model.weights.size()));
  }
  double z = model.bias;
  for (std::size_t i = 0; i < x.size(); ++i) z += model.weights[i] * x[i];
  return z;
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Numerically stable -log P(label | z).
double nll(double z, bool positive) {
  double margin = positive ? z : -z;
  // log(1 + exp(-margin)) without overflow.
  if (margin > 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

}  // namespace

FeatureVector featurize_span(const SentenceRecord& sentence, const CandidateSpan& span) {
  const std::size_t n = sentence.tokens.size();
  FeatureVector x(kSpanFeatureDim, 0.0);
  std::size_t pos = 0;

  x[pos + static_cast<std::size_t>(span.rule)] = 1.0;
  pos += 12;

  x[pos + tag_slot(span.constituent_tag)] = 1.0;
  pos += 12;

  const double len = static_cast<double>(span.primary.length());
  x[pos++] = n > 0 ? len / static_cast<double>(n) : 0.0;
  x[pos++] = n > 0 ? static_cast<double>(span.primary.start) / static_cast<double>(n) : 0.0;

  bool found = false;
  std::size_t depth = constituent_depth(sentence.tree.root, span.primary,
                                        span.constituent_tag, 0, found);
  x[pos++] = found ? static_cast<double>(depth) : 0.0;

  x[pos++] = (span.primary.start == 0 || span.primary.end == n) ? 1.0 : 0.0;

  std::size_t capitalized = 0;
  for (std::size_t i = span.primary.start; i < span.primary.end && i < n; ++i) {
    if (is_capitalized(sentence.tokens[i].surface)) ++capitalized;
  }
  x[pos++] = len > 0 ? static_cast<double>(capitalized) / len : 0.0;

  x[pos++] = 1.0;
  return x;
}

FeatureVector featurize_sentence(const DocumentRecord& doc, std::size_t index) {
  const std::size_t n = doc.sentences.size();
  if (index >= n) {
    throw ContractViolation("featurize_sentence: index " + std::to_string(index) +
                            " out of range for document with " + std::to_string(n) +
                            " sentences");
  }
  FeatureVector x(kSentenceFeatureDim, 0.0);

  x[0] = static_cast<double>(index) / static_cast<double>(n);

  std::size_t max_len = 1;
  for (const SentenceRecord& s : doc.sentences) {
    max_len = std::max(max_len, s.tokens.size());
  }
  x[1] = static_cast<double>(doc.sentences[index].tokens.size()) /
         static_cast<double>(max_len);

  // Content-token overlap with the rest of the document: the fraction of
  // this sentence's distinct content tokens that appear in >= 2 other
  // sentences.
  std::unordered_map<std::string, std::size_t> other_sentence_counts;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == index) continue;
    std::unordered_set<std::string> seen;
    for (const Token& t : doc.sentences[i].tokens) {
      if (!is_content_token(t.surface)) continue;
      seen.insert(lowercased(t.surface));
    }
    for (const std::string& w : seen) ++other_sentence_counts[w];
  }
  std::unordered_set<std::string> own;
  for (const Token& t : doc.sentences[index].tokens) {
    if (is_content_token(t.surface)) own.insert(lowercased(t.surface));
  }
  if (!own.empty()) {
    std::size_t shared = 0;
    for (const std::string& w : own) {
      auto it = other_sentence_counts.find(w);
      if (it != other_sentence_counts.end() && it->second >= 2) ++shared;
    }
    x[2] = static_cast<double>(shared) / static_cast<double>(own.size());
  }

  x[3] = index == 0 ? 1.0 : 0.0;
  x[4] = 1.0;
  return x;
}

double predict(const LinearScorer& model, const FeatureVector& features) {
  constexpr double kEps = 1e-15;
  double p = sigmoid(raw_logit(model, features));
  return std::clamp(p, kEps, 1.0 - kEps);
}

std::vector<double> gradient(const LinearScorer& model,
                             const std::vector<LabeledExample>& batch) {
  if (batch.empty()) {
    throw ContractViolation("gradient: batch must be non-empty");
  }
  const std::size_t dim = model.weights.size();
  std::vector<double> grad(dim + 1, 0.0);
  for (const LabeledExample& example : batch) {
    double residual = sigmoid(raw_logit(model, example.features)) -
                      (example.positive ? 1.0 : 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      grad[i] += residual * example.features[i];
    }
    grad[dim] += residual;
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (double& g : grad) g *= scale;
  return grad;
}

double average_loss(const LinearScorer& model,
                    const std::vector<LabeledExample>& data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const LabeledExample& example : data) {
    total += nll(raw_logit(model, example.features), example.positive);
  }
  return total / static_cast<double>(data.size());
}

TrainResult train(const std::vector<LabeledExample>& data, const TrainConfig& cfg) {
  if (data.empty()) {
    throw ContractViolation("train: dataset must be non-empty");
  }
  if (cfg.learning_rate <= 0.0 || cfg.batch_size == 0) {
    throw ContractViolation("train: learning_rate and batch_size must be positive");
  }
  const std::size_t dim = data.front().features.size();
  for (const LabeledExample& example : data) {
    if (example.features.size() != dim) {
      throw ContractViolation("train: inconsistent feature dimensions");
    }
  }

  TrainResult result;
  result.model = LinearScorer::zeros(dim);
  result.initial_loss = average_loss(result.model, data);

  // Hand-rolled Fisher-Yates so shuffles are identical across standard
  // libraries.
  std::uint64_t rng_state = cfg.seed ? cfg.seed : 0x9e3779b97f4a7c15ULL;
  auto next_rand = [&rng_state]() {
    rng_state ^= rng_state << 13;
    rng_state ^= rng_state >> 7;
    rng_state ^= rng_state << 17;
    return rng_state;
  };
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto reshuffle = [&]() {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = next_rand() % i;
      std::swap(order[i - 1], order[j]);
    }
  };
  reshuffle();

  std::size_t cursor = 0;
  std::vector<LabeledExample> batch;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    batch.clear();
    for (std::size_t b = 0; b < cfg.batch_size; ++b) {
      if (cursor == order.size()) {
        reshuffle();
        cursor = 0;
      }
      batch.push_back(data[order[cursor++]]);
    }

    double batch_loss = average_loss(result.model, batch);
    if (std::isnan(batch_loss)) {
      throw TrainingDiverged("train: loss is NaN", step);
    }
    result.loss_trace.push_back(batch_loss);

    std::vector<double> grad = gradient(result.model, batch);
    for (std::size_t i = 0; i < dim; ++i) {
      result.model.weights[i] -= cfg.learning_rate * grad[i];
    }
    result.model.bias -= cfg.learning_rate * grad[dim];
  }

  result.final_loss = average_loss(result.model, data);
  return result;
}

void save_model(const LinearScorer& model, const std::string& path) {
  json j;
  j["dim"] = model.weights.size();
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["feature_schema_version"] = kFeatureSchemaVersion;
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot open model file for writing: " + path);
  }
  out << j.dump(2) << "\n";
}

LinearScorer load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open model file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("malformed model file " + path + ": " + e.what());
  }
  if (!j.contains("weights") || !j.contains("bias") || !j.contains("dim")) {
    throw ValidationError("model file " + path + " is missing required fields");
  }
  int version = j.value("feature_schema_version", 0);
  if (version != kFeatureSchemaVersion) {
    throw ValidationError("model file " + path + " has feature_schema_version " +
                          std::to_string(version) + ", expected " +
                          std::to_string(kFeatureSchemaVersion));
  }
  LinearScorer model;
  model.weights = j["weights"].get<std::vector<double>>();
  model.bias = j["bias"].get<double>();
  if (model.weights.size() != j["dim"].get<std::size_t>()) {
    throw ValidationError("model file " + path + ": dim does not match weights");
  }
  return model;
}

std::optional<double> ScoreTable::sentence_score(const std::string& doc_id,
                                                 std::size_t sent_idx) const {
  auto it = sentence_.find({doc_id, sent_idx});
  if (it == sentence_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> ScoreTable::span_score(const std::string& doc_id,
                                             std::size_t sent_idx,
                                             const TokenRange& primary) const {
  auto it = span_.find({doc_id, sent_idx, primary.start, primary.end});
  if (it == span_.end()) return std::nullopt;
  return it->second;
}

void ScoreTable::insert_sentence(const std::string& doc_id, std::size_t sent_idx,
                                 double score) {
  sentence_[{doc_id, sent_idx}] = score;
}

void ScoreTable::insert_span(const std::string& doc_id, std::size_t sent_idx,
                             const TokenRange& primary, double score) {
  span_[{doc_id, sent_idx, primary.start, primary.end}] = score;
}

ScoreTable load_external_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open score file: " + path);
  }
  ScoreTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError("score file " + path + " line " +
                            std::to_string(line_number) + ": " + e.what());
    }
    auto fail = [&](const std::string& message) -> ValidationError {
      return ValidationError("score file " + path + " line " +
                             std::to_string(line_number) + ": " + message);
    };
    if (!row.contains("doc_id") || !row.contains("sent_idx") || !row.contains("score")) {
      throw fail("rows need doc_id, sent_idx, and score");
    }
    std::string doc_id = row["doc_id"].get<std::string>();
    std::size_t sent_idx = row["sent_idx"].get<std::size_t>();
    double score = row["score"].get<double>();
    if (!(score >= 0.0 && score <= 1.0)) {
      throw fail("score " + std::to_string(score) + " is outside [0, 1]");
    }
    if (row.contains("span")) {
      auto span = row["span"].get<std::vector<std::size_t>>();
      if (span.size() != 2 || span[0] >= span[1]) {
        throw fail("span must be [start, end] with start < end");
      }
      TokenRange range{span[0], span[1]};
      if (table.span_score(doc_id, sent_idx, range).has_value()) {
        throw fail("duplicate span row");
      }
      table.insert_span(doc_id, sent_idx, range, score);
    } else {
      if (table.sentence_score(doc_id, sent_idx).has_value()) {
        throw fail("duplicate sentence row");
      }
      table.insert_sentence(doc_id, sent_idx, score);
    }
  }
  return table;
}

}  // namespace compsum

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "compsum/errors.hpp"
#include "compsum/rules.hpp"
#include "compsum/scorer.hpp"
#include "compsum/treebank.hpp"
#include "testutil.hpp"

using namespace compsum;
namespace tu = compsum::testutil;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path(std::string("compsum_test_") + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& content) {
    std::ofstream out(path);
    out << content;
  }
};

std::vector<LabeledExample> random_examples(std::mt19937_64& rng, std::size_t count,
                                            std::size_t dim) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::bernoulli_distribution label(0.5);
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < count; ++i) {
    FeatureVector x(dim);
    for (double& v : x) v = value(rng);
    out.push_back({std::move(x), label(rng)});
  }
  return out;
}

double loss_at(std::vector<double> weights, double bias,
               const std::vector<LabeledExample>& batch) {
  LinearScorer model{std::move(weights), bias};
  return average_loss(model, batch);
}

}  // namespace

TEST_CASE("featurize_span on the running example PP") {
  SentenceRecord sentence = tu::sentence_of(tu::kTennisParse);
  CandidateSpan span = propose_spans(sentence.tree)[0];
  FeatureVector x = featurize_span(sentence, span);
  REQUIRE(x.size() == kSpanFeatureDim);

  // one-hot rule: PP is enum slot 6
  CHECK(x[6] == 1.0);
  for (std::size_t i = 0; i < 12; ++i) {
    if (i != 6) CHECK(x[i] == 0.0);
  }
  // one-hot tag: PP is inventory slot 6 as well
  CHECK(x[12 + 6] == 1.0);

  CHECK(x[24] == doctest::Approx(4.0 / 6.0));  // length ratio
  CHECK(x[25] == doctest::Approx(2.0 / 6.0));  // relative start
  CHECK(x[26] == doctest::Approx(2.0));        // depth: S -> VP -> PP
  CHECK(x[27] == 1.0);                         // touches the sentence end
  CHECK(x[28] == doctest::Approx(0.0));        // no capitalized tokens
  CHECK(x[29] == 1.0);                         // bias feature

  CHECK(featurize_span(sentence, span) == x);  // deterministic
}

TEST_CASE("featurize_sentence basics") {
  DocumentRecord doc;
  doc.id = "d";
  for (int i = 0; i < 4; ++i) {
    doc.sentences.push_back(
        tu::sentence_of("(S (NP (NN alpha)) (VP (VBD beta)))"));
  }
  FeatureVector first = featurize_sentence(doc, 0);
  REQUIRE(first.size() == kSentenceFeatureDim);
  CHECK(first[0] == 0.0);
  CHECK(first[3] == 1.0);
  CHECK(first[4] == 1.0);

  FeatureVector third = featurize_sentence(doc, 2);
  CHECK(third[0] == doctest::Approx(0.5));
  CHECK(third[3] == 0.0);

  DocumentRecord single;
  single.id = "s";
  single.sentences.push_back(tu::sentence_of("(S (NP (NN alpha)))"));
  CHECK(featurize_sentence(single, 0)[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(featurize_sentence(doc, 4), ContractViolation);
}

TEST_CASE("predict is a clamped sigmoid") {
  LinearScorer zero = LinearScorer::zeros(3);
  CHECK(predict(zero, {0.0, 0.0, 0.0}) == doctest::Approx(0.5));
  CHECK(predict(zero, {5.0, -2.0, 1.0}) == doctest::Approx(0.5));

  LinearScorer model{{std::log(3.0)}, 0.0};
  CHECK(predict(model, {1.0}) == doctest::Approx(0.75));

  LinearScorer bumped = model;
  bumped.weights[0] += 0.5;
  CHECK(predict(bumped, {1.0}) > predict(model, {1.0}));

  LinearScorer huge{{1000.0}, 0.0};
  CHECK(predict(huge, {1.0}) < 1.0);
  CHECK(predict(huge, {-1.0}) > 0.0);

  CHECK_THROWS_AS(predict(zero, {1.0}), ContractViolation);
}

TEST_CASE("gradient closed forms") {
  // Zero model, single example: (0.5 - label) * x, bias partial 0.5 - label.
  LinearScorer zero = LinearScorer::zeros(2);
  std::vector<LabeledExample> one = {{{2.0, -4.0}, true}};
  std::vector<double> g = gradient(zero, one);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == doctest::Approx(-0.5 * 2.0));
  CHECK(g[1] == doctest::Approx(-0.5 * -4.0));
  CHECK(g[2] == doctest::Approx(-0.5));

  // Saturated prediction: gradient vanishes.
  LinearScorer saturated{{50.0, 0.0}, 0.0};
  std::vector<double> flat = gradient(saturated, {{{1.0, 0.0}, true}});
  double norm = 0.0;
  for (double v : flat) norm += v * v;
  CHECK(std::sqrt(norm) < 1e-6);

  CHECK_THROWS_AS(gradient(zero, {}), ContractViolation);
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(190);
  std::uniform_real_distribution<double> weight(-2.0, 2.0);
  const double h = 1e-5;
  for (int draw = 0; draw < 100; ++draw) {
    std::size_t dim = 1 + draw % 5;
    std::vector<LabeledExample> batch = random_examples(rng, 1 + draw % 7, dim);
    LinearScorer model;
    model.weights.resize(dim);
    for (double& w : model.weights) w = weight(rng);
    model.bias = weight(rng);

    std::vector<double> analytic = gradient(model, batch);
    for (std::size_t i = 0; i <= dim; ++i) {
      std::vector<double> up = model.weights;
      std::vector<double> down = model.weights;
      double bias_up = model.bias;
      double bias_down = model.bias;
      if (i < dim) {
        up[i] += h;
        down[i] -= h;
      } else {
        bias_up += h;
        bias_down -= h;
      }
      double numeric =
          (loss_at(up, bias_up, batch) - loss_at(down, bias_down, batch)) / (2 * h);
      double denom = std::max(std::abs(analytic[i]), std::abs(numeric));
      if (denom < 1e-8) continue;  // both effectively zero
      CHECK(std::abs(analytic[i] - numeric) / denom < 1e-4);
    }
  }
}

TEST_CASE("training fits a separable dataset") {
  // label = indicator(feature_0 > 0)
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<LabeledExample> data;
  for (int i = 0; i < 50; ++i) {
    double v = value(rng);
    if (std::abs(v) < 0.05) v = v < 0 ? -0.05 : 0.05;
    data.push_back({{v, value(rng)}, v > 0});
  }
  TrainConfig cfg;
  cfg.steps = 2000;
  TrainResult result = train(data, cfg);

  std::size_t correct = 0;
  for (const LabeledExample& example : data) {
    bool predicted = predict(result.model, example.features) > 0.5;
    if (predicted == example.positive) ++correct;
  }
  CHECK(correct == data.size());
  CHECK(result.final_loss <= result.initial_loss);
}

TEST_CASE("training on a single label saturates the bias") {
  std::vector<LabeledExample> data;
  for (int i = 0; i < 30; ++i) {
    data.push_back({{0.1 * (i % 7)}, true});
  }
  TrainConfig cfg;
  cfg.steps = 2000;
  TrainResult result = train(data, cfg);
  for (const LabeledExample& example : data) {
    CHECK(predict(result.model, example.features) > 0.9);
  }
}

TEST_CASE("zero steps returns the initialization") {
  std::vector<LabeledExample> data = {{{1.0}, true}};
  TrainConfig cfg;
  cfg.steps = 0;
  TrainResult result = train(data, cfg);
  CHECK(result.model.weights == std::vector<double>{0.0});
  CHECK(result.model.bias == 0.0);
  CHECK(result.loss_trace.empty());
}

TEST_CASE("training is bitwise deterministic per seed") {
  std::mt19937_64 rng(4096);
  std::vector<LabeledExample> data = random_examples(rng, 64, 6);
  TrainConfig cfg;
  cfg.steps = 500;
  cfg.seed = 99;
  TrainResult a = train(data, cfg);
  TrainResult b = train(data, cfg);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.model.bias == b.model.bias);
  CHECK(a.loss_trace == b.loss_trace);

  cfg.seed = 100;
  TrainResult c = train(data, cfg);
  CHECK(a.model.weights != c.model.weights);
}

TEST_CASE("full-batch loss trace is non-increasing on normalized features") {
  std::mt19937_64 rng(512);
  std::vector<LabeledExample> data = random_examples(rng, 40, 4);
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.batch_size = data.size();  // full batch
  cfg.steps = 200;
  TrainResult result = train(data, cfg);
  for (std::size_t i = 1; i < result.loss_trace.size(); ++i) {
    CHECK(result.loss_trace[i] <= result.loss_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("diverging training names the offending step") {
  // An absurd learning rate overflows the weight to -inf on the first
  // update; the zero-feature example then yields -inf * 0 = NaN.
  std::vector<LabeledExample> data = {{{1e9}, false}, {{0.0}, true}};
  TrainConfig cfg;
  cfg.learning_rate = 1e300;
  cfg.batch_size = 2;
  cfg.steps = 10;
  try {
    train(data, cfg);
    FAIL("expected TrainingDiverged");
  } catch (const TrainingDiverged& e) {
    CHECK(e.step() == 1);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("scaling features and inversely scaling weights preserves predictions") {
  std::mt19937_64 rng(33);
  std::vector<LabeledExample> data = random_examples(rng, 8, 3);
  LinearScorer model{{0.4, -1.2, 2.0}, 0.3};
  const double c = 7.5;
  LinearScorer scaled = model;
  for (double& w : scaled.weights) w /= c;
  for (const LabeledExample& example : data) {
    FeatureVector boosted = example.features;
    for (double& v : boosted) v *= c;
    CHECK(predict(scaled, boosted) == doctest::Approx(predict(model, example.features)));
  }
}

TEST_CASE("model files round-trip and check their schema version") {
  LinearScorer model{{0.25, -0.5, 1.75}, 0.125};
  TempFile file("model.json");
  save_model(model, file.path);
  LinearScorer loaded = load_model(file.path);
  CHECK(loaded.weights == model.weights);
  CHECK(loaded.bias == model.bias);

  TempFile bad("model_bad.json");
  bad.write(R"({"dim": 1, "weights": [0.5], "bias": 0.0, "feature_schema_version": 99})");
  CHECK_THROWS_AS(load_model(bad.path), ValidationError);

  TempFile mismatch("model_mismatch.json");
  mismatch.write(R"({"dim": 3, "weights": [0.5], "bias": 0.0, "feature_schema_version": 1})");
  CHECK_THROWS_AS(load_model(mismatch.path), ValidationError);
}

TEST_CASE("external score files validate rows") {
  TempFile good("scores_good.jsonl");
  good.write(
      R"({"doc_id": "a", "sent_idx": 0, "score": 0.9})" "\n"
      R"({"doc_id": "a", "sent_idx": 1, "score": 0.2})" "\n"
      R"({"doc_id": "a", "sent_idx": 0, "span": [2, 6], "score": 0.7})" "\n");
  ScoreTable table = load_external_scores(good.path);
  CHECK(table.size() == 3);
  CHECK(table.sentence_score("a", 0) == 0.9);
  CHECK(table.span_score("a", 0, {2, 6}) == 0.7);
  CHECK(!table.sentence_score("b", 0).has_value());
  CHECK(!table.span_score("a", 0, {2, 5}).has_value());

  TempFile out_of_range("scores_range.jsonl");
  out_of_range.write(R"({"doc_id": "a", "sent_idx": 0, "score": 1.3})" "\n");
  try {
    load_external_scores(out_of_range.path);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }

  TempFile duplicate("scores_dup.jsonl");
  duplicate.write(
      R"({"doc_id": "a", "sent_idx": 0, "score": 0.5})" "\n"
      R"({"doc_id": "a", "sent_idx": 0, "score": 0.6})" "\n");
  try {
    load_external_scores(duplicate.path);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "compsum/rules.hpp"
#include "compsum/scorer.hpp"
#include "compsum/treebank.hpp"

namespace compsum {

struct PipelineConfig {
  std::size_t k = 3;
  double lambda_p = 0.6;
  double lambda_s = 0.6;
  std::size_t token_budget = 512;
  std::size_t max_spans = kDefaultMaxSpans;

  void validate() const;
};

// Posterior sources for the three decisions. Backed by trained models,
// external score tables, or anything else that produces a probability.
struct ScoreProvider {
  std::function<double(const DocumentRecord&, std::size_t)> sentence;
  std::function<double(const DocumentRecord&, std::size_t, const CandidateSpan&)>
      plausibility;
  std::function<double(const DocumentRecord&, std::size_t, const CandidateSpan&)>
      salience;
};

ScoreProvider model_score_provider(LinearScorer extraction, LinearScorer plausibility,
                                   LinearScorer salience);

std::function<double(const DocumentRecord&, std::size_t)> table_sentence_scorer(
    ScoreTable table);
std::function<double(const DocumentRecord&, std::size_t, const CandidateSpan&)>
table_span_scorer(ScoreTable table);

// Candidate indices licensed by each threshold; chosen is their
// intersection. Comparisons are strict.
struct LicensedSpans {
  std::vector<std::size_t> z_p;
  std::vector<std::size_t> z_s;
  std::vector<std::size_t> chosen;
};

struct CompressiveSummary {
  std::string doc_id;
  std::vector<std::size_t> selected;                 // document order
  std::vector<std::vector<std::size_t>> deleted;     // per selected sentence
  std::vector<std::vector<CandidateSpan>> z_p;       // per selected sentence
  std::vector<std::vector<CandidateSpan>> z_s;
  std::vector<std::vector<CandidateSpan>> chosen;
  std::vector<std::vector<std::string>> text;        // remaining tokens
  double compression_ratio = 0.0;
  std::optional<double> rejection_rate;
};

// Longest sentence prefix with a cumulative token count below the budget;
// the first sentence is always kept.
DocumentRecord truncate_document(const DocumentRecord& doc, std::size_t token_budget);

// Indices of the k highest-scoring sentences (ties to the lower index),
// returned in document order.
std::vector<std::size_t> select_sentences(const DocumentRecord& doc,
                                          const std::vector<double>& sentence_scores,
                                          std::size_t k);

LicensedSpans licensed_spans(const std::vector<CandidateSpan>& candidates,
                             const std::vector<double>& plausibility_scores,
                             const std::vector<double>& salience_scores,
                             double lambda_p, double lambda_s);

// truncate -> select -> per sentence: propose, score, intersect licensed
// spans, delete. Whole-sentence deletions are refused, so every selected
// sentence keeps at least one token.
CompressiveSummary summarize(const DocumentRecord& doc, const ScoreProvider& scores,
                             const PipelineConfig& cfg);

// |Z_S inter complement(Z_P)| / |Z_S|: the fraction of salience-approved
// spans vetoed by plausibility. Undefined (nullopt) when Z_S is empty.
std::optional<double> rejection_rate(const std::vector<CandidateSpan>& z_s,
                                     const std::vector<CandidateSpan>& z_p);

// Deleted tokens over original tokens across the selected sentences.
// original_selected holds the uncompressed token lists, one per selected
// sentence.
double compression_ratio(const CompressiveSummary& summary,
                         const std::vector<std::vector<Token>>& original_selected);

}  // namespace compsum

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "compsum/oracle.hpp"
#include "compsum/pipeline.hpp"
#include "compsum/rouge.hpp"
#include "compsum/treebank.hpp"

namespace compsum {

// A validated JSONL corpus: one document per line, ids unique, every parse
// materialized and checked against its token list.
struct CorpusFile {
  std::string path;
  std::vector<DocumentRecord> records;

  const DocumentRecord* find(const std::string& id) const;
};

CorpusFile read_corpus(const std::string& path);

// Sentence-compression pairs: {id?, long: {tokens, parse}, short: [tokens]}.
// Rows without an id get "p<line>".
std::vector<ParallelPair> read_pairs(const std::string& path);

// Corpus-level metrics: macro-averaged ROUGE over documents plus mean
// compression ratio and mean rejection rate where defined.
struct EvalReport {
  std::size_t documents = 0;
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  double mean_compression_ratio = 0.0;
  std::optional<double> mean_rejection_rate;
};

EvalReport evaluate(const CorpusFile& corpus,
                    const std::vector<CompressiveSummary>& summaries,
                    const RougeConfig& cfg);

std::string eval_report_json(const EvalReport& report);
std::string eval_report_table(const EvalReport& report);

// Salience-threshold line search. Runs summarize at each grid point over the
// whole corpus and keeps the lambda with the best mean(R1, R2, RL) F1; ties
// go to the larger lambda.
struct SweepResult {
  std::vector<double> grid;
  std::vector<EvalReport> rouge_at;
  double best_lambda = 0.0;
};

SweepResult sweep_lambda_s(const CorpusFile& corpus, const ScoreProvider& scores,
                           PipelineConfig cfg, const RougeConfig& rouge_cfg,
                           double grid_lo = 0.1, double grid_hi = 0.9,
                           double step = 0.05, std::size_t jobs = 1);

std::string sweep_result_json(const SweepResult& sweep);

// Summarizes every document, optionally across a worker pool; results are in
// corpus order regardless of execution order.
std::vector<CompressiveSummary> summarize_corpus(const CorpusFile& corpus,
                                                 const ScoreProvider& scores,
                                                 const PipelineConfig& cfg,
                                                 std::size_t jobs = 1);

// JSONL serialization. Spans serialize as
//   {"rule": ..., "primary": [s, e], "secondary": [[s, e], ...], "tag": ...}
std::string span_to_json(const CandidateSpan& span);
CandidateSpan span_from_json(const std::string& text);

void write_candidates(std::ostream& out, const std::string& doc_id,
                      std::size_t sent_idx, const std::vector<CandidateSpan>& spans);
void write_span_labels(std::ostream& out, const std::vector<LabeledSpanRecord>& labels);
std::vector<LabeledSpanRecord> read_span_labels(const std::string& path);

void write_extraction_oracle(std::ostream& out, const std::string& doc_id,
                             const ExtractionOracle& oracle);
struct ExtractionRecord {
  std::string doc_id;
  std::vector<std::size_t> selected;
  double objective = 0.0;
};
std::vector<ExtractionRecord> read_extraction_records(const std::string& path);

void write_summaries(std::ostream& out, const std::vector<CompressiveSummary>& summaries);
std::vector<CompressiveSummary> read_summaries(const std::string& path);

}  // namespace compsum

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "compsum/rouge.hpp"
#include "compsum/rules.hpp"
#include "compsum/treebank.hpp"

namespace compsum {

enum class OracleLabel { Keep, Delete };

std::string_view oracle_label_name(OracleLabel label);

// The scalar the oracles maximize / compare. MeanR1R2 is the default and
// what the bundled datasets are labeled with.
enum class OracleObjective { MeanR1R2, R1, R2, RL };

std::string_view oracle_objective_name(OracleObjective objective);

double objective_score(const std::vector<std::string>& candidate,
                       const std::vector<std::string>& reference,
                       const RougeConfig& cfg,
                       OracleObjective objective = OracleObjective::MeanR1R2);

// A candidate span with its oracle decision: Delete iff removing the span
// strictly improved the objective.
struct SpanLabel {
  CandidateSpan span;
  OracleLabel label = OracleLabel::Keep;
};

// A labeled span tied back to its source document and sentence.
struct LabeledSpanRecord {
  std::string doc_id;
  std::size_t sent_idx = 0;
  CandidateSpan span;
  OracleLabel label = OracleLabel::Keep;
};

// Greedy extractive oracle: sentence indices (ascending) whose concatenation
// maximizes the objective against the reference, up to k sentences.
// selection_order records the indices in the order the greedy loop added
// them.
struct ExtractionOracle {
  std::vector<std::size_t> selected;
  std::vector<std::size_t> selection_order;
  double objective_value = 0.0;
};

// One sentence-compression supervision pair: a full sentence and its
// compressed counterpart.
struct ParallelPair {
  std::string id;
  SentenceRecord long_form;
  std::vector<std::string> short_form;
};

// Adds sentences one at a time, each time taking the lowest-indexed sentence
// that maximizes the objective of the concatenated selection against the
// reference; stops at k sentences or when no sentence strictly improves the
// objective. Requires doc.reference.
ExtractionOracle greedy_extraction_oracle(const DocumentRecord& doc, std::size_t k,
                                          const RougeConfig& cfg,
                                          OracleObjective objective = OracleObjective::MeanR1R2);

// Labels each candidate independently: Delete iff deleting it (secondary
// constituents included) strictly raises the objective of x against y.
std::vector<SpanLabel> compression_oracle(const SentenceRecord& x,
                                          const std::vector<std::string>& y,
                                          const std::vector<CandidateSpan>& candidates,
                                          const RougeConfig& cfg,
                                          OracleObjective objective = OracleObjective::MeanR1R2);

// Proposes spans on each pair's long form and labels them against its short
// form. One record per (pair, candidate), in input order.
std::vector<LabeledSpanRecord> plausibility_labels(const std::vector<ParallelPair>& pairs,
                                                   const RougeConfig& cfg,
                                                   std::size_t max_spans = kDefaultMaxSpans,
                                                   OracleObjective objective = OracleObjective::MeanR1R2);

// For each selected sentence, labels its candidates by comparing the whole
// extract's objective against the reference with and without the candidate's
// deletion indices. Requires doc.reference.
std::vector<LabeledSpanRecord> salience_labels(const DocumentRecord& doc,
                                               const ExtractionOracle& extract,
                                               const RougeConfig& cfg,
                                               std::size_t max_spans = kDefaultMaxSpans,
                                               OracleObjective objective = OracleObjective::MeanR1R2);

// Reference summary flattened to one token sequence.
std::vector<std::string> flatten_reference(const DocumentRecord& doc);

}  // namespace compsum

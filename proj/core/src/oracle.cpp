#include "compsum/oracle.hpp"

#include <algorithm>

#include "compsum/errors.hpp"

namespace compsum {

namespace {

std::vector<std::string> concat_sentences(const DocumentRecord& doc,
                                          const std::vector<std::size_t>& indices) {
  std::vector<std::string> out;
  for (std::size_t i : indices) {
    for (const Token& t : doc.sentences[i].tokens) out.push_back(t.surface);
  }
  return out;
}

void require_reference(const DocumentRecord& doc, const char* who) {
  if (!doc.reference.has_value()) {
    throw ContractViolation(std::string(who) + ": document '" + doc.id +
                            "' has no reference summary");
  }
}

}  // namespace

std::string_view oracle_label_name(OracleLabel label) {
  return label == OracleLabel::Delete ? "delete" : "keep";
}

std::string_view oracle_objective_name(OracleObjective objective) {
  switch (objective) {
    case OracleObjective::MeanR1R2:
      return "mean-r1-r2";
    case OracleObjective::R1:
      return "r1";
    case OracleObjective::R2:
      return "r2";
    case OracleObjective::RL:
      return "rl";
  }
  return "?";
}

double objective_score(const std::vector<std::string>& candidate,
                       const std::vector<std::string>& reference,
                       const RougeConfig& cfg, OracleObjective objective) {
  switch (objective) {
    case OracleObjective::MeanR1R2: {
      RougeSuite suite = rouge_suite(candidate, reference, cfg);
      return 0.5 * (suite.r1.f1 + suite.r2.f1);
    }
    case OracleObjective::R1:
      return rouge_n(candidate, reference, 1, cfg).f1;
    case OracleObjective::R2:
      return rouge_n(candidate, reference, 2, cfg).f1;
    case OracleObjective::RL:
      return rouge_l(candidate, reference, cfg).f1;
  }
  return 0.0;
}

std::vector<std::string> flatten_reference(const DocumentRecord& doc) {
  std::vector<std::string> out;
  if (!doc.reference.has_value()) return out;
  for (const auto& sentence : *doc.reference) {
    out.insert(out.end(), sentence.begin(), sentence.end());
  }
  return out;
}

ExtractionOracle greedy_extraction_oracle(const DocumentRecord& doc, std::size_t k,
                                          const RougeConfig& cfg,
                                          OracleObjective objective) {
  require_reference(doc, "greedy_extraction_oracle");
  if (k < 1) {
    throw ContractViolation("greedy_extraction_oracle: k must be >= 1");
  }
  const std::vector<std::string> reference = flatten_reference(doc);
  const std::size_t n = doc.sentences.size();

  ExtractionOracle oracle;
  std::vector<bool> taken(n, false);
  double current = 0.0;

  while (oracle.selection_order.size() < k) {
    double best_score = current;
    std::size_t best_index = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      std::vector<std::size_t> trial = oracle.selected;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), i), i);
      double score = objective_score(concat_sentences(doc, trial), reference, cfg,
                                     objective);
      if (score > best_score) {
        best_score = score;
        best_index = i;
      }
    }
    if (best_index == n) break;  // no strict improvement left
    taken[best_index] = true;
    oracle.selection_order.push_back(best_index);
    oracle.selected.insert(
        std::upper_bound(oracle.selected.begin(), oracle.selected.end(), best_index),
        best_index);
    current = best_score;
  }
  oracle.objective_value = current;
  return oracle;
}

std::vector<SpanLabel> compression_oracle(const SentenceRecord& x,
                                          const std::vector<std::string>& y,
                                          const std::vector<CandidateSpan>& candidates,
                                          const RougeConfig& cfg,
                                          OracleObjective objective) {
  const double base = objective_score(surfaces(x.tokens), y, cfg, objective);
  std::vector<SpanLabel> labels;
  labels.reserve(candidates.size());
  for (const CandidateSpan& candidate : candidates) {
    std::vector<Token> compressed = apply_deletions(x, {candidate});
    double score = objective_score(surfaces(compressed), y, cfg, objective);
    labels.push_back(
        {candidate, score > base ? OracleLabel::Delete : OracleLabel::Keep});
  }
  return labels;
}

std::vector<LabeledSpanRecord> plausibility_labels(const std::vector<ParallelPair>& pairs,
                                                   const RougeConfig& cfg,
                                                   std::size_t max_spans,
                                                   OracleObjective objective) {
  std::vector<LabeledSpanRecord> out;
  for (const ParallelPair& pair : pairs) {
    if (pair.short_form.empty()) {
      throw ContractViolation("plausibility_labels: pair '" + pair.id +
                              "' has an empty short form");
    }
    std::vector<CandidateSpan> candidates =
        propose_spans(pair.long_form.tree, max_spans);
    std::vector<SpanLabel> labels =
        compression_oracle(pair.long_form, pair.short_form, candidates, cfg, objective);
    for (SpanLabel& label : labels) {
      out.push_back({pair.id, 0, std::move(label.span), label.label});
    }
  }
  return out;
}

std::vector<LabeledSpanRecord> salience_labels(const DocumentRecord& doc,
                                               const ExtractionOracle& extract,
                                               const RougeConfig& cfg,
                                               std::size_t max_spans,
                                               OracleObjective objective) {
  require_reference(doc, "salience_labels");
  const std::vector<std::string> reference = flatten_reference(doc);
  const std::vector<std::string> full_extract =
      concat_sentences(doc, extract.selected);
  const double base = objective_score(full_extract, reference, cfg, objective);

  std::vector<LabeledSpanRecord> out;
  for (std::size_t sent : extract.selected) {
    const SentenceRecord& sentence = doc.sentences[sent];
    std::vector<CandidateSpan> candidates = propose_spans(sentence.tree, max_spans);
    for (CandidateSpan& candidate : candidates) {
      // Rebuild the extract with this candidate's indices removed from its
      // sentence; deletion is judged against the whole extract.
      std::vector<std::string> variant;
      for (std::size_t i : extract.selected) {
        if (i == sent) {
          for (const Token& t : apply_deletions(sentence, {candidate})) {
            variant.push_back(t.surface);
          }
        } else {
          for (const Token& t : doc.sentences[i].tokens) {
            variant.push_back(t.surface);
          }
        }
      }
      double score = objective_score(variant, reference, cfg, objective);
      out.push_back({doc.id, sent, std::move(candidate),
                     score > base ? OracleLabel::Delete : OracleLabel::Keep});
    }
  }
  return out;
}

}  // namespace compsum

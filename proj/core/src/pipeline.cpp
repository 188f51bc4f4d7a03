#include "compsum/pipeline.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <utility>

#include "compsum/errors.hpp"

namespace compsum {

void PipelineConfig::validate() const {
  if (k < 1) {
    throw ContractViolation("PipelineConfig: k must be >= 1");
  }
  if (!(lambda_p >= 0.0 && lambda_p < 1.0) || !(lambda_s >= 0.0 && lambda_s < 1.0)) {
    throw ContractViolation("PipelineConfig: thresholds must be in [0, 1)");
  }
  if (token_budget < 1 || max_spans < 1) {
    throw ContractViolation("PipelineConfig: token_budget and max_spans must be >= 1");
  }
}

ScoreProvider model_score_provider(LinearScorer extraction, LinearScorer plausibility,
                                   LinearScorer salience) {
  ScoreProvider provider;
  provider.sentence = [model = std::move(extraction)](const DocumentRecord& doc,
                                                      std::size_t i) {
    return predict(model, featurize_sentence(doc, i));
  };
  provider.plausibility = [model = std::move(plausibility)](
                              const DocumentRecord& doc, std::size_t i,
                              const CandidateSpan& span) {
    return predict(model, featurize_span(doc.sentences[i], span));
  };
  provider.salience = [model = std::move(salience)](const DocumentRecord& doc,
                                                    std::size_t i,
                                                    const CandidateSpan& span) {
    return predict(model, featurize_span(doc.sentences[i], span));
  };
  return provider;
}

std::function<double(const DocumentRecord&, std::size_t)> table_sentence_scorer(
    ScoreTable table) {
  auto shared = std::make_shared<ScoreTable>(std::move(table));
  return [shared](const DocumentRecord& doc, std::size_t i) {
    std::optional<double> score = shared->sentence_score(doc.id, i);
    if (!score.has_value()) {
      throw ValidationError("no sentence score for document '" + doc.id +
                            "' sentence " + std::to_string(i));
    }
    return *score;
  };
}

std::function<double(const DocumentRecord&, std::size_t, const CandidateSpan&)>
table_span_scorer(ScoreTable table) {
  auto shared = std::make_shared<ScoreTable>(std::move(table));
  return [shared](const DocumentRecord& doc, std::size_t i, const CandidateSpan& span) {
    std::optional<double> score = shared->span_score(doc.id, i, span.primary);
    if (!score.has_value()) {
      throw ValidationError("no span score for document '" + doc.id + "' sentence " +
                            std::to_string(i) + " span [" +
                            std::to_string(span.primary.start) + ", " +
                            std::to_string(span.primary.end) + ")");
    }
    return *score;
  };
}

DocumentRecord truncate_document(const DocumentRecord& doc, std::size_t token_budget) {
  if (token_budget < 1) {
    throw ContractViolation("truncate_document: token_budget must be >= 1");
  }
  DocumentRecord out;
  out.id = doc.id;
  out.reference = doc.reference;
  std::size_t total = 0;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    total += doc.sentences[i].tokens.size();
    if (i > 0 && total >= token_budget) break;
    out.sentences.push_back(doc.sentences[i]);
  }
  return out;
}

std::vector<std::size_t> select_sentences(const DocumentRecord& doc,
                                          const std::vector<double>& sentence_scores,
                                          std::size_t k) {
  if (k < 1) {
    throw ContractViolation("select_sentences: k must be >= 1");
  }
  if (sentence_scores.size() != doc.sentences.size()) {
    throw ContractViolation("select_sentences: expected " +
                            std::to_string(doc.sentences.size()) + " scores, got " +
                            std::to_string(sentence_scores.size()));
  }
  std::vector<std::size_t> order(sentence_scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sentence_scores[a] > sentence_scores[b];
  });
  if (order.size() > k) order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

LicensedSpans licensed_spans(const std::vector<CandidateSpan>& candidates,
                             const std::vector<double>& plausibility_scores,
                             const std::vector<double>& salience_scores,
                             double lambda_p, double lambda_s) {
  if (plausibility_scores.size() != candidates.size() ||
      salience_scores.size() != candidates.size()) {
    throw ContractViolation("licensed_spans: one plausibility and one salience score "
                            "per candidate required");
  }
  LicensedSpans out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool plausible = plausibility_scores[i] > lambda_p;
    bool salient = salience_scores[i] > lambda_s;
    if (plausible) out.z_p.push_back(i);
    if (salient) out.z_s.push_back(i);
    if (plausible && salient) out.chosen.push_back(i);
  }
  return out;
}

CompressiveSummary summarize(const DocumentRecord& doc, const ScoreProvider& scores,
                             const PipelineConfig& cfg) {
  cfg.validate();
  DocumentRecord working = truncate_document(doc, cfg.token_budget);

  std::vector<double> sentence_scores;
  sentence_scores.reserve(working.sentences.size());
  for (std::size_t i = 0; i < working.sentences.size(); ++i) {
    sentence_scores.push_back(scores.sentence(working, i));
  }

  CompressiveSummary summary;
  summary.doc_id = working.id;
  summary.selected = select_sentences(working, sentence_scores, cfg.k);

  std::size_t total_original = 0;
  std::size_t total_deleted = 0;
  std::size_t total_z_s = 0;
  std::size_t total_rejected = 0;

  for (std::size_t sent : summary.selected) {
    const SentenceRecord& sentence = working.sentences[sent];
    std::vector<CandidateSpan> candidates = propose_spans(sentence.tree, cfg.max_spans);

    std::vector<double> plaus;
    std::vector<double> sal;
    plaus.reserve(candidates.size());
    sal.reserve(candidates.size());
    for (const CandidateSpan& candidate : candidates) {
      plaus.push_back(scores.plausibility(working, sent, candidate));
      sal.push_back(scores.salience(working, sent, candidate));
    }
    LicensedSpans licensed =
        licensed_spans(candidates, plaus, sal, cfg.lambda_p, cfg.lambda_s);

    auto pick = [&candidates](const std::vector<std::size_t>& indices) {
      std::vector<CandidateSpan> out;
      out.reserve(indices.size());
      for (std::size_t i : indices) out.push_back(candidates[i]);
      return out;
    };
    std::vector<CandidateSpan> chosen = pick(licensed.chosen);

    std::vector<Token> remaining = apply_deletions(sentence, chosen);
    std::vector<std::size_t> deleted;
    if (remaining.size() < sentence.tokens.size()) {
      std::vector<bool> kept(sentence.tokens.size(), false);
      for (const Token& t : remaining) kept[t.index] = true;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (!kept[i]) deleted.push_back(i);
      }
    }

    total_original += sentence.tokens.size();
    total_deleted += deleted.size();
    total_z_s += licensed.z_s.size();
    for (std::size_t i : licensed.z_s) {
      if (std::find(licensed.z_p.begin(), licensed.z_p.end(), i) == licensed.z_p.end()) {
        ++total_rejected;
      }
    }

    summary.z_p.push_back(pick(licensed.z_p));
    summary.z_s.push_back(pick(licensed.z_s));
    summary.chosen.push_back(std::move(chosen));
    summary.deleted.push_back(std::move(deleted));
    summary.text.push_back(surfaces(remaining));
  }

  summary.compression_ratio =
      total_original > 0
          ? static_cast<double>(total_deleted) / static_cast<double>(total_original)
          : 0.0;
  if (total_z_s > 0) {
    summary.rejection_rate =
        static_cast<double>(total_rejected) / static_cast<double>(total_z_s);
  }
  return summary;
}

std::optional<double> rejection_rate(const std::vector<CandidateSpan>& z_s,
                                     const std::vector<CandidateSpan>& z_p) {
  if (z_s.empty()) return std::nullopt;
  std::size_t rejected = 0;
  for (const CandidateSpan& span : z_s) {
    if (std::find(z_p.begin(), z_p.end(), span) == z_p.end()) ++rejected;
  }
  return static_cast<double>(rejected) / static_cast<double>(z_s.size());
}

double compression_ratio(const CompressiveSummary& summary,
                         const std::vector<std::vector<Token>>& original_selected) {
  if (original_selected.size() != summary.selected.size()) {
    throw ContractViolation("compression_ratio: one original token list per selected "
                            "sentence required");
  }
  std::size_t total_original = 0;
  std::size_t total_deleted = 0;
  for (std::size_t i = 0; i < original_selected.size(); ++i) {
    total_original += original_selected[i].size();
    total_deleted += summary.deleted[i].size();
  }
  if (total_original == 0) return 0.0;
  return static_cast<double>(total_deleted) / static_cast<double>(total_original);
}

}  // namespace compsum

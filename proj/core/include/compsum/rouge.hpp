#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace compsum {

// Precision/recall/F1 for one metric variant. f1 is 0 whenever
// precision + recall is 0, else the harmonic mean.
struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeScore make_rouge_score(double precision, double recall);

struct RougeConfig {
  bool stemming = true;
  bool lowercase = true;
};

struct RougeSuite {
  RougeScore r1;
  RougeScore r2;
  RougeScore rl;
};

// Clipped n-gram overlap (n in {1, 2}) between candidate and reference,
// normalized per cfg before counting. Empty n-gram sets on either side give
// all-zero scores.
RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n,
                   const RougeConfig& cfg);

// Longest-common-subsequence score over the flat token sequences, normalized
// per cfg first. precision = LCS/|candidate|, recall = LCS/|reference|.
RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference,
                   const RougeConfig& cfg);

// ROUGE-1/2/L scores with one shared normalization pass.
RougeSuite rouge_suite(const std::vector<std::string>& candidate,
                       const std::vector<std::string>& reference,
                       const RougeConfig& cfg);

// LCS length of two raw token sequences (no normalization).
std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

// Porter (1980) stemmer. Expects a lowercase ASCII word; anything containing
// characters outside a-z is returned unchanged.
std::string porter_stem(const std::string& word);

// Lowercases and/or stems per cfg.
std::vector<std::string> normalize_tokens(const std::vector<std::string>& tokens,
                                          const RougeConfig& cfg);

}  // namespace compsum

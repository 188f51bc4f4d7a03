#include "compsum/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace compsum {

namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

// n-grams are joined with '\x1f', which cannot occur in whitespace-delimited
// tokens.
NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key.push_back('\x1f');
      key.append(tokens[i + j]);
    }
    ++counts[key];
  }
  return counts;
}

RougeScore rouge_n_normalized(const std::vector<std::string>& candidate,
                              const std::vector<std::string>& reference, int n) {
  NgramCounts cand = count_ngrams(candidate, n);
  NgramCounts ref = count_ngrams(reference, n);
  if (cand.empty() || ref.empty()) return {};

  std::size_t overlap = 0;
  std::size_t cand_total = 0;
  std::size_t ref_total = 0;
  for (const auto& [gram, count] : cand) {
    cand_total += count;
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  for (const auto& [gram, count] : ref) ref_total += count;

  return make_rouge_score(static_cast<double>(overlap) / cand_total,
                          static_cast<double>(overlap) / ref_total);
}

RougeScore rouge_l_normalized(const std::vector<std::string>& candidate,
                              const std::vector<std::string>& reference) {
  if (candidate.empty() || reference.empty()) return {};
  std::size_t lcs = lcs_length(candidate, reference);
  return make_rouge_score(static_cast<double>(lcs) / candidate.size(),
                          static_cast<double>(lcs) / reference.size());
}

}  // namespace

RougeScore make_rouge_score(double precision, double recall) {
  RougeScore score;
  score.precision = precision;
  score.recall = recall;
  score.f1 = (precision + recall > 0.0)
                 ? 2.0 * precision * recall / (precision + recall)
                 : 0.0;
  return score;
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row DP over positions in a x b.
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> normalize_tokens(const std::vector<std::string>& tokens,
                                          const RougeConfig& cfg) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) {
    std::string t = token;
    if (cfg.lowercase) {
      std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
    }
    if (cfg.stemming) t = porter_stem(t);
    out.push_back(std::move(t));
  }
  return out;
}

RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n,
                   const RougeConfig& cfg) {
  return rouge_n_normalized(normalize_tokens(candidate, cfg),
                            normalize_tokens(reference, cfg), n);
}

RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference,
                   const RougeConfig& cfg) {
  return rouge_l_normalized(normalize_tokens(candidate, cfg),
                            normalize_tokens(reference, cfg));
}

RougeSuite rouge_suite(const std::vector<std::string>& candidate,
                       const std::vector<std::string>& reference,
                       const RougeConfig& cfg) {
  std::vector<std::string> cand = normalize_tokens(candidate, cfg);
  std::vector<std::string> ref = normalize_tokens(reference, cfg);
  RougeSuite suite;
  suite.r1 = rouge_n_normalized(cand, ref, 1);
  suite.r2 = rouge_n_normalized(cand, ref, 2);
  suite.rl = rouge_l_normalized(cand, ref);
  return suite;
}

}  // namespace compsum

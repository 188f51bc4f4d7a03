#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compsum/treebank.hpp"

namespace compsum {

// The twelve span-proposal matchers. Names are stable and used verbatim in
// serialized span records.
enum class RuleId {
  PRN,
  FRAG,
  JJ,
  ADJP,
  RB,
  ADVP,
  PP,
  APPOS_NP,
  SBAR_REL,
  CONJ_NP,
  CONJ_VP,
  CONJ_S,
};

std::string_view rule_name(RuleId rule);
std::optional<RuleId> rule_from_name(std::string_view name);

// Half-open token range [start, end).
struct TokenRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

// A rule-proposed deletable region. primary aligns with a constituent span
// of the source tree; secondary ranges (commas, coordinating conjunctions)
// are deleted along with it and are disjoint from primary and each other.
struct CandidateSpan {
  RuleId rule = RuleId::PRN;
  TokenRange primary;
  std::vector<TokenRange> secondary;
  std::string constituent_tag;

  // Sorted union of primary and secondary token indices.
  std::vector<std::size_t> deletion_indices() const;

  friend bool operator==(const CandidateSpan&, const CandidateSpan&) = default;
};

inline constexpr std::size_t kDefaultMaxSpans = 50;

// Proposes every match of the twelve matchers over the tree, deduplicated by
// primary range, ordered by (start asc, end desc), truncated to max_spans.
// The root constituent and any span covering the whole sentence are never
// proposed.
std::vector<CandidateSpan> propose_spans(const ParseTree& tree,
                                         std::size_t max_spans = kDefaultMaxSpans);

// Removes the union of all primary and secondary indices of chosen from the
// sentence, keeping the remaining tokens in order. If the union would cover
// every token, the sentence is returned unchanged. Spans out of bounds raise
// ContractViolation.
std::vector<Token> apply_deletions(const SentenceRecord& sentence,
                                   const std::vector<CandidateSpan>& chosen);

}  // namespace compsum

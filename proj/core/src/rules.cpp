#include "compsum/rules.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "compsum/errors.hpp"

namespace compsum {

namespace {

constexpr std::array<std::pair<RuleId, std::string_view>, 12> kRuleNames = {{
    {RuleId::PRN, "PRN"},
    {RuleId::FRAG, "FRAG"},
    {RuleId::JJ, "JJ"},
    {RuleId::ADJP, "ADJP"},
    {RuleId::RB, "RB"},
    {RuleId::ADVP, "ADVP"},
    {RuleId::PP, "PP"},
    {RuleId::APPOS_NP, "APPOS_NP"},
    {RuleId::SBAR_REL, "SBAR_REL"},
    {RuleId::CONJ_NP, "CONJ_NP"},
    {RuleId::CONJ_VP, "CONJ_VP"},
    {RuleId::CONJ_S, "CONJ_S"},
}};

TokenRange span_of(const Constituent& c) { return {c.start, c.end}; }

CandidateSpan make_candidate(RuleId rule, const Constituent& node,
                             std::vector<TokenRange> secondary = {}) {
  CandidateSpan candidate;
  candidate.rule = rule;
  candidate.primary = span_of(node);
  candidate.secondary = std::move(secondary);
  candidate.constituent_tag = node.tag;
  return candidate;
}

const Constituent* first_preterminal(const Constituent& node) {
  const Constituent* cur = &node;
  while (!cur->is_preterminal()) cur = &cur->children.front();
  return cur;
}

bool is_relative_pronoun_tag(const std::string& tag) {
  return tag == "WDT" || tag == "WP" || tag == "WP$" || tag == "WRB";
}

class SpanMatcher {
 public:
  explicit SpanMatcher(const ParseTree& tree)
      : tree_(tree), token_tags_(preterminals_of(tree)) {}

  std::vector<CandidateSpan> run() {
    walk(tree_.root, nullptr);
    return std::move(candidates_);
  }

 private:
  void walk(const Constituent& node, const Constituent* parent) {
    match_single(node, parent);
    match_appositive(node);
    match_conjunction(node);
    for (const Constituent& child : node.children) {
      walk(child, &node);
    }
  }

  void propose(CandidateSpan candidate) {
    // The root and whole-sentence spans must survive.
    if (candidate.primary.start == 0 && candidate.primary.end == tree_.tokens.size()) {
      return;
    }
    candidates_.push_back(std::move(candidate));
  }

  void match_single(const Constituent& node, const Constituent* parent) {
    const std::string& tag = node.tag;
    if (tag == "PRN") {
      propose(make_candidate(RuleId::PRN, node));
    } else if (tag == "FRAG") {
      propose(make_candidate(RuleId::FRAG, node));
    } else if (tag == "ADJP") {
      propose(make_candidate(RuleId::ADJP, node));
    } else if (tag == "ADVP") {
      propose(make_candidate(RuleId::ADVP, node));
    } else if (tag == "PP") {
      propose(make_candidate(RuleId::PP, node));
    } else if (tag == "JJ" || tag == "RB") {
      // A preterminal that is the sole child of its phrase is covered by the
      // phrasal match over the same range; skip it.
      if (parent != nullptr && parent->children.size() == 1) return;
      propose(make_candidate(tag == "JJ" ? RuleId::JJ : RuleId::RB, node));
    } else if (tag == "SBAR") {
      match_relative_clause(node, parent);
    }
  }

  void match_relative_clause(const Constituent& node, const Constituent* parent) {
    if (parent == nullptr || parent->tag != "NP") return;
    bool wh_lead = is_relative_pronoun_tag(first_preterminal(node)->tag);
    bool after_comma =
        node.start > 0 && token_tags_[node.start - 1]->tag == ",";
    if (wh_lead || after_comma) {
      propose(make_candidate(RuleId::SBAR_REL, node));
    }
  }

  // NP1 , NP2 , inside an NP: delete NP2 plus both commas. When NP2 closes
  // the phrase and the sentence ends right after it with terminal
  // punctuation, that punctuation serves as the closing delimiter and only
  // the leading comma is deleted.
  void match_appositive(const Constituent& node) {
    if (node.tag != "NP") return;
    const auto& kids = node.children;
    for (std::size_t i = 0; i + 2 < kids.size(); ++i) {
      if (kids[i].tag != "NP" || kids[i + 1].tag != "," || kids[i + 2].tag != "NP") {
        continue;
      }
      if (i + 3 < kids.size() && kids[i + 3].tag == ",") {
        propose(make_candidate(RuleId::APPOS_NP, kids[i + 2],
                               {span_of(kids[i + 1]), span_of(kids[i + 3])}));
      } else if (i + 3 == kids.size() && closes_sentence(kids[i + 2])) {
        propose(make_candidate(RuleId::APPOS_NP, kids[i + 2],
                               {span_of(kids[i + 1])}));
      }
    }
  }

  bool closes_sentence(const Constituent& np) const {
    std::size_t next = np.end;
    return next + 1 == tree_.tokens.size() && token_tags_[next]->tag == ".";
  }

  // X1 .. CC X2 under a parent tagged X: delete the conjunct after the CC,
  // the CC itself, and a comma directly before the CC if present.
  void match_conjunction(const Constituent& node) {
    RuleId rule;
    if (node.tag == "NP") {
      rule = RuleId::CONJ_NP;
    } else if (node.tag == "VP") {
      rule = RuleId::CONJ_VP;
    } else if (node.tag == "S") {
      rule = RuleId::CONJ_S;
    } else {
      return;
    }
    const auto& kids = node.children;
    for (std::size_t i = 1; i + 1 < kids.size(); ++i) {
      if (kids[i].tag != "CC" || kids[i + 1].tag != node.tag) continue;
      bool has_earlier_conjunct = false;
      for (std::size_t j = 0; j < i; ++j) {
        if (kids[j].tag == node.tag) {
          has_earlier_conjunct = true;
          break;
        }
      }
      if (!has_earlier_conjunct) continue;
      std::vector<TokenRange> secondary;
      if (kids[i - 1].tag == ",") secondary.push_back(span_of(kids[i - 1]));
      secondary.push_back(span_of(kids[i]));
      propose(make_candidate(rule, kids[i + 1], std::move(secondary)));
    }
  }

  const ParseTree& tree_;
  std::vector<const Constituent*> token_tags_;
  std::vector<CandidateSpan> candidates_;
};

}  // namespace

std::string_view rule_name(RuleId rule) {
  for (const auto& [id, name] : kRuleNames) {
    if (id == rule) return name;
  }
  return "?";
}

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const auto& [id, rule_str] : kRuleNames) {
    if (rule_str == name) return id;
  }
  return std::nullopt;
}

std::vector<std::size_t> CandidateSpan::deletion_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = primary.start; i < primary.end; ++i) out.push_back(i);
  for (const TokenRange& r : secondary) {
    for (std::size_t i = r.start; i < r.end; ++i) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CandidateSpan> propose_spans(const ParseTree& tree, std::size_t max_spans) {
  if (max_spans < 1) {
    throw ContractViolation("propose_spans: max_spans must be >= 1");
  }
  std::vector<CandidateSpan> candidates = SpanMatcher(tree).run();

  // Left-to-right, outermost first. Pre-order emission makes the stable sort
  // keep a phrasal node ahead of a same-range preterminal, so dedup prefers
  // the phrase.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CandidateSpan& a, const CandidateSpan& b) {
                     if (a.primary.start != b.primary.start) {
                       return a.primary.start < b.primary.start;
                     }
                     return a.primary.end > b.primary.end;
                   });
  std::vector<CandidateSpan> unique;
  for (CandidateSpan& c : candidates) {
    if (!unique.empty() && unique.back().primary == c.primary) continue;
    unique.push_back(std::move(c));
  }
  if (unique.size() > max_spans) unique.resize(max_spans);
  return unique;
}

std::vector<Token> apply_deletions(const SentenceRecord& sentence,
                                   const std::vector<CandidateSpan>& chosen) {
  const std::size_t n = sentence.tokens.size();
  std::vector<bool> deleted(n, false);
  std::size_t deleted_count = 0;
  for (const CandidateSpan& span : chosen) {
    for (std::size_t i : span.deletion_indices()) {
      if (i >= n) {
        throw ContractViolation("apply_deletions: span index " + std::to_string(i) +
                                " out of bounds for sentence of length " +
                                std::to_string(n));
      }
      if (!deleted[i]) {
        deleted[i] = true;
        ++deleted_count;
      }
    }
  }
  if (deleted_count == n) {
    // Whole-sentence deletion is refused.
    return sentence.tokens;
  }
  std::vector<Token> out;
  out.reserve(n - deleted_count);
  for (std::size_t i = 0; i < n; ++i) {
    if (!deleted[i]) out.push_back(sentence.tokens[i]);
  }
  return out;
}

}  // namespace compsum

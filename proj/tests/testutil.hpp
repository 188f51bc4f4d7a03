#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "compsum/treebank.hpp"

namespace compsum::testutil {

// Random well-formed trees for round-trip and span-partition properties.
// Labels and tokens come from small safe alphabets (no bracket escapes).
class RandomTreeGen {
 public:
  explicit RandomTreeGen(std::uint64_t seed) : rng_(seed) {}

  ParseTree tree(std::size_t max_depth = 4, std::size_t max_branch = 3) {
    ParseTree t;
    t.root = node(max_depth, max_branch, t.tokens);
    if (t.root.is_preterminal()) {
      // keep at least a unary phrase above a token so roots look like parses
      Constituent root;
      root.tag = "S";
      root.start = t.root.start;
      root.end = t.root.end;
      root.children.push_back(t.root);
      t.root = root;
    }
    return t;
  }

  std::vector<std::string> token_list(std::size_t max_len, std::size_t alphabet) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<std::size_t> sym_dist(0, alphabet - 1);
    std::vector<std::string> out;
    std::size_t len = len_dist(rng_);
    for (std::size_t i = 0; i < len; ++i) {
      out.push_back(std::string(1, static_cast<char>('a' + sym_dist(rng_))));
    }
    return out;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  Constituent node(std::size_t depth, std::size_t max_branch,
                   std::vector<Token>& tokens) {
    static const std::vector<std::string> phrase_tags = {"S",  "NP",  "VP", "PP",
                                                         "PRN", "ADJP", "ADVP", "SBAR"};
    static const std::vector<std::string> pos_tags = {"DT", "NN", "VBD", "JJ",
                                                      "RB", "IN", "PRP", "CC"};
    static const std::vector<std::string> words = {"the", "dog",  "ran",  "big",
                                                   "fast", "on",  "mat",  "cat",
                                                   "sat",  "blue", "hill", "slept"};
    std::uniform_int_distribution<std::size_t> coin(0, 99);
    if (depth == 0 || coin(rng_) < 35) {
      Constituent leaf;
      leaf.tag = pick(pos_tags);
      leaf.start = tokens.size();
      leaf.end = leaf.start + 1;
      tokens.push_back(Token{pick(words), leaf.start});
      return leaf;
    }
    Constituent out;
    out.tag = pick(phrase_tags);
    out.start = tokens.size();
    std::uniform_int_distribution<std::size_t> branch(1, max_branch);
    std::size_t n = branch(rng_);
    for (std::size_t i = 0; i < n; ++i) {
      out.children.push_back(node(depth - 1, max_branch, tokens));
    }
    out.end = tokens.size();
    return out;
  }

  const std::string& pick(const std::vector<std::string>& pool) {
    std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
    return pool[dist(rng_)];
  }

  std::mt19937_64 rng_;
};

inline SentenceRecord sentence_of(const std::string& bracketed) {
  return SentenceRecord::from_tree(parse_bracketed(bracketed));
}

inline std::vector<std::string> words(const std::string& space_separated) {
  std::vector<std::string> out;
  std::string current;
  for (char c : space_separated) {
    if (c == ' ') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

// The running example sentence: "She was at the tennis courts".
inline const char* kTennisParse =
    "(S (NP (PRP She)) (VP (VBD was) (PP (IN at) (NP (DT the) (NN tennis) "
    "(NNS courts)))))";

}  // namespace compsum::testutil

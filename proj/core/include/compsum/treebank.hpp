#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace compsum {

// One surface token of a sentence. Indices within a sentence are consecutive
// from 0.
struct Token {
  std::string surface;
  std::size_t index = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

// A labeled node of a constituency parse covering the token span
// [start, end). Preterminals have no children and span exactly one token;
// the children of an internal node partition its span contiguously in order.
struct Constituent {
  std::string tag;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<Constituent> children;

  bool is_preterminal() const { return children.empty(); }
  std::size_t length() const { return end - start; }
};

bool operator==(const Constituent& a, const Constituent& b);
inline bool operator!=(const Constituent& a, const Constituent& b) { return !(a == b); }

// A constituency parse over a tokenized sentence. The root spans exactly
// [0, tokens.size()).
struct ParseTree {
  Constituent root;
  std::vector<Token> tokens;
};

bool operator==(const ParseTree& a, const ParseTree& b);
inline bool operator!=(const ParseTree& a, const ParseTree& b) { return !(a == b); }

// A sentence with its parse; tokens always equal tree.tokens.
struct SentenceRecord {
  std::vector<Token> tokens;
  ParseTree tree;

  static SentenceRecord from_tree(ParseTree tree);
};

// An input document. reference, when present, holds the reference summary as
// a list of token lists.
struct DocumentRecord {
  std::string id;
  std::vector<SentenceRecord> sentences;
  std::optional<std::vector<std::vector<std::string>>> reference;
};

// Reads a single bracketed constituency parse, e.g.
//   (S (NP (PRP She)) (VP (VBD was) (PP (IN at) (NP (DT the) (NN tennis) (NNS courts)))))
//
// Escaped brackets (-LRB-, -RRB-, -LSB-, -RSB-, -LCB-, -RCB-) in token
// position decode to the literal bracket characters. Function tags and
// numeric indices after "-" or "=" in labels (NP-SBJ, NP=2) are stripped to
// the base category; labels that themselves start with "-" (-LRB- as a POS
// tag) are kept whole. Empty-element leaves (-NONE-) are rejected.
//
// Throws ParseError on malformed input; for unbalanced parentheses the
// reported offset is the first unclosed "(" (or the stray ")").
ParseTree parse_bracketed(const std::string& text);

// Inverse of parse_bracketed up to whitespace normalization: single spaces,
// bracket characters in tokens re-escaped to the -LRB- family.
std::string render_bracketed(const ParseTree& tree);

// All constituents of the tree, preterminals included, in pre-order.
// Pointers remain valid as long as the tree is alive.
std::vector<const Constituent*> constituents_of(const ParseTree& tree);

// The preterminal of each token, in token order (size == tokens.size()).
std::vector<const Constituent*> preterminals_of(const ParseTree& tree);

// Surfaces of a token list, in order.
std::vector<std::string> surfaces(const std::vector<Token>& tokens);

}  // namespace compsum

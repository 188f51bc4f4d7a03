#include "compsum/treebank.hpp"

#include <array>
#include <cctype>
#include <string_view>
#include <utility>

#include "compsum/errors.hpp"

namespace compsum {

namespace {

constexpr std::array<std::pair<std::string_view, char>, 6> kBracketEscapes = {{
    {"-LRB-", '('},
    {"-RRB-", ')'},
    {"-LSB-", '['},
    {"-RSB-", ']'},
    {"-LCB-", '{'},
    {"-RCB-", '}'},
}};

std::string decode_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    bool matched = false;
    if (raw[i] == '-') {
      for (const auto& [escape, ch] : kBracketEscapes) {
        if (raw.substr(i, escape.size()) == escape) {
          out.push_back(ch);
          i += escape.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) {
      out.push_back(raw[i]);
      ++i;
    }
  }
  return out;
}

std::string encode_token(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  for (char c : surface) {
    bool escaped = false;
    for (const auto& [escape, ch] : kBracketEscapes) {
      if (c == ch) {
        out.append(escape);
        escaped = true;
        break;
      }
    }
    if (!escaped) out.push_back(c);
  }
  return out;
}

// NP-SBJ -> NP, NP=2 -> NP, S|SINV -> S. Labels starting with "-" (the
// bracket POS tags) are never stripped.
std::string strip_label(std::string_view raw) {
  if (raw.empty() || raw.front() == '-') return std::string(raw);
  std::size_t cut = raw.find_first_of("-=|");
  return std::string(raw.substr(0, cut));
}

struct TreeToken {
  enum class Kind { Open, Close, Atom } kind;
  std::string_view text;
  std::size_t offset;
};

std::vector<TreeToken> lex(const std::string& text) {
  std::vector<TreeToken> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '(') {
      out.push_back({TreeToken::Kind::Open, std::string_view(&text[i], 1), i});
      ++i;
    } else if (c == ')') {
      out.push_back({TreeToken::Kind::Close, std::string_view(&text[i], 1), i});
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      std::size_t begin = i;
      while (i < n && text[i] != '(' && text[i] != ')' &&
             !std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
      out.push_back({TreeToken::Kind::Atom,
                     std::string_view(text).substr(begin, i - begin), begin});
    }
  }
  return out;
}

// Balance is checked up front so unbalanced input reports the position of
// the bracket at fault rather than a downstream structural complaint.
void check_balance(const std::string& text, const std::vector<TreeToken>& toks) {
  std::vector<std::size_t> open_offsets;
  for (const TreeToken& t : toks) {
    if (t.kind == TreeToken::Kind::Open) {
      open_offsets.push_back(t.offset);
    } else if (t.kind == TreeToken::Kind::Close) {
      if (open_offsets.empty()) {
        throw ParseError("unmatched ')'", t.offset);
      }
      open_offsets.pop_back();
    }
  }
  if (!open_offsets.empty()) {
    throw ParseError("unclosed '('", open_offsets.front());
  }
  (void)text;
}

class TreeParser {
 public:
  TreeParser(const std::vector<TreeToken>& toks, std::vector<Token>& tokens)
      : toks_(toks), tokens_(tokens) {}

  Constituent parse_node() {
    expect(TreeToken::Kind::Open, "expected '('");
    const TreeToken& label_tok = peek("expected a label after '('");
    if (label_tok.kind != TreeToken::Kind::Atom) {
      throw ParseError("expected a label after '('", label_tok.offset);
    }
    ++pos_;

    Constituent node;
    node.tag = strip_label(label_tok.text);

    const TreeToken& next = peek("unexpected end of tree");
    if (next.kind == TreeToken::Kind::Open) {
      node.start = tokens_.size();
      while (peek("unexpected end of tree").kind == TreeToken::Kind::Open) {
        node.children.push_back(parse_node());
      }
      node.end = tokens_.size();
    } else if (next.kind == TreeToken::Kind::Atom) {
      if (node.tag == "-NONE-") {
        throw ParseError("empty element (-NONE-) is not allowed", label_tok.offset);
      }
      node.start = tokens_.size();
      node.end = node.start + 1;
      tokens_.push_back(Token{decode_token(next.text), node.start});
      ++pos_;
      const TreeToken& after = peek("unexpected end of tree");
      if (after.kind == TreeToken::Kind::Atom) {
        throw ParseError("a preterminal holds exactly one token", after.offset);
      }
    } else {
      throw ParseError("a constituent needs children or a token", next.offset);
    }

    expect(TreeToken::Kind::Close, "expected ')'");
    return node;
  }

  void expect_end() {
    if (pos_ != toks_.size()) {
      throw ParseError("trailing content after the tree", toks_[pos_].offset);
    }
  }

 private:
  const TreeToken& peek(const char* message) {
    if (pos_ >= toks_.size()) {
      std::size_t offset = toks_.empty() ? 0 : toks_.back().offset + 1;
      throw ParseError(message, offset);
    }
    return toks_[pos_];
  }

  void expect(TreeToken::Kind kind, const char* message) {
    const TreeToken& t = peek(message);
    if (t.kind != kind) throw ParseError(message, t.offset);
    ++pos_;
  }

  const std::vector<TreeToken>& toks_;
  std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

void render_node(const Constituent& node, const std::vector<Token>& tokens,
                 std::string& out) {
  out.push_back('(');
  out.append(node.tag);
  if (node.is_preterminal()) {
    out.push_back(' ');
    out.append(encode_token(tokens[node.start].surface));
  } else {
    for (const Constituent& child : node.children) {
      out.push_back(' ');
      render_node(child, tokens, out);
    }
  }
  out.push_back(')');
}

void collect_preorder(const Constituent& node, std::vector<const Constituent*>& out) {
  out.push_back(&node);
  for (const Constituent& child : node.children) {
    collect_preorder(child, out);
  }
}

}  // namespace

bool operator==(const Constituent& a, const Constituent& b) {
  if (a.tag != b.tag || a.start != b.start || a.end != b.end ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!(a.children[i] == b.children[i])) return false;
  }
  return true;
}

bool operator==(const ParseTree& a, const ParseTree& b) {
  return a.tokens == b.tokens && a.root == b.root;
}

SentenceRecord SentenceRecord::from_tree(ParseTree tree) {
  SentenceRecord record;
  record.tokens = tree.tokens;
  record.tree = std::move(tree);
  return record;
}

ParseTree parse_bracketed(const std::string& text) {
  std::vector<TreeToken> toks = lex(text);
  if (toks.empty()) {
    throw ParseError("empty input", 0);
  }
  check_balance(text, toks);

  ParseTree tree;
  TreeParser parser(toks, tree.tokens);
  tree.root = parser.parse_node();
  parser.expect_end();
  if (tree.tokens.empty()) {
    throw ParseError("tree has no tokens", 0);
  }
  return tree;
}

std::string render_bracketed(const ParseTree& tree) {
  std::string out;
  render_node(tree.root, tree.tokens, out);
  return out;
}

std::vector<const Constituent*> constituents_of(const ParseTree& tree) {
  std::vector<const Constituent*> out;
  collect_preorder(tree.root, out);
  return out;
}

std::vector<const Constituent*> preterminals_of(const ParseTree& tree) {
  std::vector<const Constituent*> out(tree.tokens.size(), nullptr);
  for (const Constituent* c : constituents_of(tree)) {
    if (c->is_preterminal()) out[c->start] = c;
  }
  return out;
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

}  // namespace compsum

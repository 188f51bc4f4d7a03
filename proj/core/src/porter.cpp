// Porter stemmer, following the author's reference implementation (including
// its marked departures from the 1980 paper: length<=2 words unchanged,
// bli->ble, logi->log) so outputs line up with the published test vocabulary.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "compsum/rouge.hpp"

namespace compsum {

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
  char c = w[i];
  switch (c) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in w[0, len): [C](VC)^m[V].
std::size_t measure(const std::string& w, std::size_t len) {
  std::size_t m = 0;
  bool in_vowel_run = false;
  for (std::size_t i = 0; i < len; ++i) {
    if (!is_consonant(w, i)) {
      in_vowel_run = true;
    } else if (in_vowel_run) {
      ++m;
      in_vowel_run = false;
    }
  }
  return m;
}

bool has_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_double_consonant(const std::string& w, std::size_t len) {
  return len >= 2 && w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// w[0, len) ends consonant-vowel-consonant and the final consonant is not
// w, x, or y.
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) ||
      !is_consonant(w, len - 1)) {
    return false;
  }
  char last = w[len - 1];
  return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

struct SuffixRule {
  std::string_view suffix;
  std::string_view replacement;
};

// Applies the longest matching suffix rule whose stem measure exceeds
// min_measure. A matched suffix with a failing condition ends the step.
void apply_table(std::string& w, const std::vector<SuffixRule>& rules,
                 std::size_t min_measure) {
  const SuffixRule* best = nullptr;
  for (const SuffixRule& rule : rules) {
    if (ends_with(w, rule.suffix) &&
        (best == nullptr || rule.suffix.size() > best->suffix.size())) {
      best = &rule;
    }
  }
  if (best == nullptr) return;
  std::size_t stem_len = w.size() - best->suffix.size();
  if (measure(w, stem_len) > min_measure) {
    w.resize(stem_len);
    w.append(best->replacement);
  }
}

void step_1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }
}

void step_1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
    return;
  }
  bool removed = false;
  if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
    w.resize(w.size() - 2);
    removed = true;
  } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
    w.resize(w.size() - 3);
    removed = true;
  }
  if (!removed) return;

  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(w, w.size())) {
    char last = w.back();
    if (last != 'l' && last != 's' && last != 'z') w.pop_back();
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w.push_back('e');
  }
}

void step_1c(std::string& w) {
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) {
    w.back() = 'i';
  }
}

void step_2(std::string& w) {
  static const std::vector<SuffixRule> rules = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
      {"anci", "ance"},   {"izer", "ize"},    {"bli", "ble"},
      {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
      {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
      {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
      {"iviti", "ive"},   {"biliti", "ble"},  {"logi", "log"},
  };
  apply_table(w, rules, 0);
}

void step_3(std::string& w) {
  static const std::vector<SuffixRule> rules = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""},
  };
  apply_table(w, rules, 0);
}

void step_4(std::string& w) {
  static const std::vector<SuffixRule> rules = {
      {"al", ""},  {"ance", ""}, {"ence", ""}, {"er", ""},   {"ic", ""},
      {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
      {"ent", ""}, {"ion", ""},  {"ou", ""},   {"ism", ""},  {"ate", ""},
      {"iti", ""}, {"ous", ""},  {"ive", ""},  {"ize", ""},
  };
  const SuffixRule* best = nullptr;
  for (const SuffixRule& rule : rules) {
    if (ends_with(w, rule.suffix) &&
        (best == nullptr || rule.suffix.size() > best->suffix.size())) {
      best = &rule;
    }
  }
  if (best == nullptr) return;
  std::size_t stem_len = w.size() - best->suffix.size();
  if (measure(w, stem_len) <= 1) return;
  if (best->suffix == "ion" && stem_len > 0) {
    char before = w[stem_len - 1];
    if (before != 's' && before != 't') return;
  }
  w.resize(stem_len);
}

void step_5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  std::size_t stem_len = w.size() - 1;
  std::size_t m = measure(w, stem_len);
  if (m > 1 || (m == 1 && !ends_cvc(w, stem_len))) {
    w.pop_back();
  }
}

void step_5b(std::string& w) {
  if (w.back() == 'l' && ends_double_consonant(w, w.size()) &&
      measure(w, w.size()) > 1) {
    w.pop_back();
  }
}

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  for (char c : word) {
    if (c < 'a' || c > 'z') return word;
  }
  std::string w = word;
  step_1a(w);
  step_1b(w);
  step_1c(w);
  step_2(w);
  step_3(w);
  step_4(w);
  step_5a(w);
  step_5b(w);
  return w;
}

}  // namespace compsum

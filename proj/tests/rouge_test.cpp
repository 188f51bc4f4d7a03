#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "compsum/rouge.hpp"
#include "testutil.hpp"

using namespace compsum;
namespace tu = compsum::testutil;

namespace {

const RougeConfig kPlain{/*stemming=*/false, /*lowercase=*/false};

// Exhaustive LCS: longest subsequence of a that is also a subsequence of b.
std::size_t lcs_by_enumeration(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (1u << a.size()); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    std::size_t j = 0;
    for (const std::string& w : b) {
      if (j < sub.size() && w == sub[j]) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

}  // namespace

TEST_CASE("rouge_n unigram example") {
  RougeScore s = rouge_n(tu::words("the cat sat"), tu::words("the cat"), 1, kPlain);
  CHECK(s.precision == doctest::Approx(2.0 / 3.0));
  CHECK(s.recall == doctest::Approx(1.0));
  CHECK(s.f1 == doctest::Approx(0.8));
}

TEST_CASE("rouge_n identity and bigram example") {
  RougeScore identity = rouge_n(tu::words("a b c"), tu::words("a b c"), 1, kPlain);
  CHECK(identity.f1 == doctest::Approx(1.0));

  RougeScore s = rouge_n(tu::words("a b c"), tu::words("a b d"), 2, kPlain);
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(0.5));
  CHECK(s.f1 == doctest::Approx(0.5));
}

TEST_CASE("rouge_n empty n-gram sets give zeros") {
  CHECK(rouge_n({}, tu::words("a b"), 1, kPlain).f1 == 0.0);
  CHECK(rouge_n(tu::words("a b"), {}, 1, kPlain).f1 == 0.0);
  // One token has no bigrams.
  RougeScore s = rouge_n(tu::words("a"), tu::words("a b"), 2, kPlain);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.f1 == 0.0);
}

TEST_CASE("rouge_l examples") {
  RougeScore s = rouge_l(tu::words("a b c d"), tu::words("a c b d"), kPlain);
  CHECK(s.precision == doctest::Approx(0.75));
  CHECK(s.recall == doctest::Approx(0.75));
  CHECK(s.f1 == doctest::Approx(0.75));

  CHECK(rouge_l(tu::words("x y"), tu::words("x y"), kPlain).f1 == doctest::Approx(1.0));
  CHECK(rouge_l(tu::words("x y"), tu::words("p q"), kPlain).f1 == 0.0);
  CHECK(rouge_l({}, tu::words("x"), kPlain).f1 == 0.0);
}

TEST_CASE("rouge_suite applies stemming and lowercasing") {
  RougeConfig stemmed;  // defaults: stemming + lowercase
  RougeSuite suite = rouge_suite(tu::words("runs"), tu::words("running"), stemmed);
  CHECK(suite.r1.f1 == doctest::Approx(1.0));

  RougeSuite cased = rouge_suite(tu::words("The Cat"), tu::words("the cat"), stemmed);
  CHECK(cased.r1.f1 == doctest::Approx(1.0));

  RougeSuite empty = rouge_suite({}, tu::words("a"), stemmed);
  CHECK(empty.r1.f1 == 0.0);
  CHECK(empty.r2.f1 == 0.0);
  CHECK(empty.rl.f1 == 0.0);

  std::vector<std::string> same = tu::words("the cat sat on the mat");
  RougeSuite identity = rouge_suite(same, same, stemmed);
  CHECK(identity.r1.f1 == doctest::Approx(1.0));
  CHECK(identity.r2.f1 == doctest::Approx(1.0));
  CHECK(identity.rl.f1 == doctest::Approx(1.0));
}

TEST_CASE("rouge symmetry and bounds over random lists") {
  tu::RandomTreeGen gen(424242);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::string> a = gen.token_list(8, 4);
    std::vector<std::string> b = gen.token_list(8, 4);

    for (int n = 1; n <= 2; ++n) {
      RougeScore ab = rouge_n(a, b, n, kPlain);
      RougeScore ba = rouge_n(b, a, n, kPlain);
      CHECK(ab.precision == doctest::Approx(ba.recall));
      CHECK(ab.recall == doctest::Approx(ba.precision));
      CHECK(ab.f1 == doctest::Approx(ba.f1));
      CHECK(ab.f1 <= std::max(ab.precision, ab.recall) + 1e-12);
      CHECK(ab.f1 >= 0.0);
      CHECK(ab.precision <= 1.0);
      CHECK(ab.recall <= 1.0);
    }

    RougeScore lab = rouge_l(a, b, kPlain);
    RougeScore lba = rouge_l(b, a, kPlain);
    CHECK(lab.f1 == doctest::Approx(lba.f1));
    CHECK(lab.precision == doctest::Approx(lba.recall));
  }
}

TEST_CASE("lcs_length equals exhaustive subsequence search") {
  tu::RandomTreeGen gen(99123);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> a = gen.token_list(8, 4);
    std::vector<std::string> b = gen.token_list(8, 4);
    CHECK(lcs_length(a, b) == lcs_by_enumeration(a, b));
  }
}

TEST_CASE("stemming is idempotent on normalized tokens") {
  tu::RandomTreeGen gen(5150);
  std::vector<std::string> sample = {"running",  "relational", "happiness",
                                     "agreement", "cats",      "traditional"};
  for (const std::string& w : sample) {
    CHECK(porter_stem(porter_stem(w)) == porter_stem(w));
  }
}

// tests/test_lm.cc

// Copyright 2026  CASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <string>
#include <vector>

#include "casr/lm/arpa.h"
#include "casr/util/error.h"
#include "doctest.h"

namespace casr {
namespace {

ArpaModel load_fixture(const char* name) {
  return load_arpa(std::string(CASR_TEST_DATA_DIR) + "/" + name);
}

// Order-1 model with <unk>; doubles as the unigram-only degenerate case.
const char* kUnkArpa =
    "\\data\\\n"
    "ngram 1=4\n"
    "\n"
    "\\1-grams:\n"
    "-99\t<s>\n"
    "-0.5\t</s>\n"
    "-0.4\t<unk>\n"
    "-0.3\ta\n"
    "\n"
    "\\end\\\n";

// Sums 10^score over the whole vocabulary for one context.
double conditional_mass(const ArpaModel& m, const std::vector<std::string>& ctx) {
  double total = 0.0;
  for (const auto& w : m.vocabulary()) total += std::pow(10.0, m.score_word(ctx, w));
  return total;
}

TEST_SUITE("lm") {

TEST_CASE("declared counts and vocabulary match the file") {
  ArpaModel m = load_fixture("mini.arpa");
  CHECK(m.order() == 2);
  CHECK(m.vocab_size() == 4);
  CHECK(m.ngram_count(1) == 4);
  CHECK(m.ngram_count(2) == 2);
  CHECK(!m.has_unk());
  CHECK(m.has_word("x"));
  CHECK(m.has_word("<s>"));
  CHECK(!m.has_word("zzz"));

  const ArpaModel::Entry* e = m.find({"x", "y"});
  REQUIRE(e != nullptr);
  CHECK(e->log10_prob == -0.7);
  CHECK(!e->has_backoff);

  e = m.find({"x"});
  REQUIRE(e != nullptr);
  CHECK(e->log10_prob == -0.4);
  CHECK(e->has_backoff);
  CHECK(e->log10_backoff == -0.2);

  CHECK(m.find({"y", "x"}) == nullptr);
  CHECK(m.find({}) == nullptr);
}

TEST_CASE("missing backoff field scores as zero penalty") {
  ArpaModel m = load_fixture("backoff.arpa");
  const ArpaModel::Entry* b = m.find({"b"});
  REQUIRE(b != nullptr);
  CHECK(!b->has_backoff);
  CHECK(b->log10_backoff == 0.0);
  // (b, a) is absent and b carries no backoff weight, so the score is the
  // bare unigram.
  CHECK(m.score_word({"b"}, "a") == -0.30103);
}

TEST_CASE("backoff arithmetic on the hand fixture") {
  ArpaModel m = load_fixture("backoff.arpa");

  // Stored bigram: direct hit.
  CHECK(m.score_word({"a"}, "b") == -0.69897);
  // (a, c) absent: bo(a) + uni(c) = -0.30103 + -0.60206.
  CHECK(std::abs(m.score_word({"a"}, "c") - (-0.90309)) <= 1e-12);
  // (a, a) absent: bo(a) + uni(a).
  CHECK(std::abs(m.score_word({"a"}, "a") - (-0.60206)) <= 1e-12);
  // Context beyond order-1 is truncated to its tail.
  CHECK(m.score_word({"c", "a"}, "b") == -0.69897);
  CHECK(m.score_word({"b", "c", "a"}, "b") == -0.69897);
  // Empty context: plain unigram.
  CHECK(m.score_word({}, "a") == -0.30103);
}

TEST_CASE("out-of-vocabulary word is an error without unk") {
  ArpaModel m = load_fixture("backoff.arpa");
  CHECK_THROWS_AS(m.score_word({"a"}, "zzz"), OovWord);
  // The permissive flag cannot help when the model has no <unk>.
  CHECK_THROWS_AS(m.score_word({"a"}, "zzz", true), OovWord);
}

TEST_CASE("unk mapping is opt-in") {
  ArpaModel m = parse_arpa(kUnkArpa);
  CHECK(m.has_unk());
  CHECK_THROWS_AS(m.score_word({}, "zzz"), OovWord);
  CHECK(m.score_word({}, "zzz", true) == -0.4);

  SentenceScore s = score_sentence(m, {"zzz"}, true);
  CHECK(s.oov_count == 1);
  // P(<unk>) + P(</s>) on the order-1 model.
  CHECK(std::abs(s.log10_total - (-0.9)) <= 1e-12);
}

TEST_CASE("unigram-only file loads as an order-1 model") {
  ArpaModel m = parse_arpa(kUnkArpa);
  CHECK(m.order() == 1);
  CHECK(m.ngram_count(1) == 4);
  for (const auto& w : m.vocabulary()) {
    const ArpaModel::Entry* e = m.find({w});
    REQUIRE(e != nullptr);
    CHECK(!e->has_backoff);
  }
}

TEST_CASE("sentence score pads with start and end markers") {
  ArpaModel m = load_fixture("backoff.arpa");
  // P(a|<s>) backs off to uni(a) with no <s> penalty, P(b|a) is stored,
  // P(</s>|b) backs off to uni(</s>): -0.30103 + -0.69897 + -0.45.
  SentenceScore s = score_sentence(m, {"a", "b"});
  CHECK(s.oov_count == 0);
  CHECK(std::abs(s.log10_total - (-1.45)) <= 1e-12);

  CHECK_THROWS_AS(score_sentence(m, {}), EmptySentence);
  CHECK_THROWS_AS(score_sentence(m, {"a", "zzz"}), OovWord);
}

TEST_CASE("incremental state matches batch sentence scoring") {
  ArpaModel m = load_fixture("backoff.arpa");
  std::vector<std::string> words = {"a", "b", "a", "c"};

  LmState state(m);
  double total = 0.0;
  for (const auto& w : words) total += state.advance(w, false);
  total += state.end_sentence();

  SentenceScore s = score_sentence(m, words);
  CHECK(std::abs(total - s.log10_total) <= 1e-12);
}

TEST_CASE("tokenize lowercases and splits on whitespace") {
  std::vector<std::string> toks = tokenize("  Hello \t WORLD\nfoo ");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0] == "hello");
  CHECK(toks[1] == "world");
  CHECK(toks[2] == "foo");
  CHECK(tokenize("").empty());
  CHECK(tokenize(" \t\n").empty());
}

TEST_CASE("malformed files are rejected") {
  // Declared three unigrams, listed two.
  CHECK_THROWS_AS(parse_arpa("\\data\\\n"
                             "ngram 1=3\n"
                             "\n"
                             "\\1-grams:\n"
                             "-99\t<s>\n"
                             "-0.5\t</s>\n"
                             "\n"
                             "\\end\\\n"),
                  MalformedArpa);
  // Bigram whose first word has no unigram entry.
  CHECK_THROWS_AS(parse_arpa("\\data\\\n"
                             "ngram 1=3\n"
                             "ngram 2=1\n"
                             "\n"
                             "\\1-grams:\n"
                             "-99\t<s>\n"
                             "-0.5\t</s>\n"
                             "-0.4\ta\n"
                             "\n"
                             "\\2-grams:\n"
                             "-0.3\tb a\n"
                             "\n"
                             "\\end\\\n"),
                  MalformedArpa);
  // No \data\ header at all.
  CHECK_THROWS_AS(parse_arpa("\\1-grams:\n-0.5\ta\n\\end\\\n"), MalformedArpa);
  // Duplicate unigram entry.
  CHECK_THROWS_AS(parse_arpa("\\data\\\n"
                             "ngram 1=2\n"
                             "\n"
                             "\\1-grams:\n"
                             "-0.5\ta\n"
                             "-0.4\ta\n"
                             "\n"
                             "\\end\\\n"),
                  MalformedArpa);
  // Unparseable probability.
  CHECK_THROWS_AS(parse_arpa("\\data\\\n"
                             "ngram 1=1\n"
                             "\n"
                             "\\1-grams:\n"
                             "oops\ta\n"
                             "\n"
                             "\\end\\\n"),
                  MalformedArpa);
  // Missing \end\ terminator.
  CHECK_THROWS_AS(parse_arpa("\\data\\\n"
                             "ngram 1=1\n"
                             "\n"
                             "\\1-grams:\n"
                             "-0.5\ta\n"),
                  MalformedArpa);
}

TEST_CASE("serialization round-trip is stable") {
  for (const char* name : {"backoff.arpa", "mini.arpa"}) {
    ArpaModel m1 = load_fixture(name);
    std::string s1 = serialize_arpa(m1);
    ArpaModel m2 = parse_arpa(s1);
    std::string s2 = serialize_arpa(m2);
    CHECK(s1 == s2);
    CHECK(m2.order() == m1.order());
    CHECK(m2.vocab_size() == m1.vocab_size());
    for (int k = 1; k <= m1.order(); ++k) CHECK(m2.ngram_count(k) == m1.ngram_count(k));
  }
  // Scores survive the round trip.
  ArpaModel m = load_fixture("backoff.arpa");
  ArpaModel r = parse_arpa(serialize_arpa(m));
  CHECK(std::abs(r.score_word({"a"}, "c") - m.score_word({"a"}, "c")) <= 1e-12);
  CHECK(std::abs(score_sentence(r, {"a", "b"}).log10_total -
                 score_sentence(m, {"a", "b"}).log10_total) <= 1e-12);
}

TEST_CASE("estimated model matches hand-computed probabilities") {
  // Corpus: "a a", "b a", "a". Events: a x4, b x1, </s> x3, total 8;
  // vocabulary {<s>, </s>, a, b}. With discount 0.1 the unigram rule
  // 0.9*c/8 + 0.1/3 gives p(a)=29/60, p(b)=7/48, p(</s>)=89/240.
  ArpaModel m = estimate_arpa({{"a", "a"}, {"b", "a"}, {"a"}}, 2, 0.1);
  CHECK(m.order() == 2);
  CHECK(m.vocab_size() == 4);
  CHECK(m.ngram_count(1) == 4);
  // Seen bigrams: <s>a, <s>b, aa, a</s>, ba.
  CHECK(m.ngram_count(2) == 5);

  const double tol = 1e-12;
  CHECK(m.find({"<s>"})->log10_prob == -99.0);
  CHECK(std::abs(m.find({"a"})->log10_prob - (-0.31575325248468755)) <= tol);
  CHECK(std::abs(m.find({"b"})->log10_prob - (-0.83614319736133036)) <= tol);
  CHECK(std::abs(m.find({"</s>"})->log10_prob - (-0.43082123506669323)) <= tol);

  // Bigram conditionals are 0.9*c/ctx_total: log10(0.6), log10(0.3),
  // log10(0.225), log10(0.675), log10(0.9).
  CHECK(std::abs(m.find({"<s>", "a"})->log10_prob - (-0.22184874961635637)) <= tol);
  CHECK(std::abs(m.find({"<s>", "b"})->log10_prob - (-0.52287874528033762)) <= tol);
  CHECK(std::abs(m.find({"a", "a"})->log10_prob - (-0.64781748188863753)) <= tol);
  CHECK(std::abs(m.find({"a", "</s>"})->log10_prob - (-0.17069622716897506)) <= tol);
  CHECK(std::abs(m.find({"b", "a"})->log10_prob - (-0.045757490560675115)) <= tol);

  // Backoff weights: log10(0.1 / (1 - mass of seen successors)).
  CHECK(m.find({"<s>"})->has_backoff);
  CHECK(std::abs(m.find({"<s>"})->log10_backoff - (-0.56917876493330677)) <= tol);
  CHECK(std::abs(m.find({"a"})->log10_backoff - (-0.16385680263866939)) <= tol);
  CHECK(std::abs(m.find({"b"})->log10_backoff - (-0.71321044345062901)) <= tol);

  // Unseen bigram (a, b): bo(a) cancels against uni(b) to exactly 0.1.
  CHECK(std::abs(m.score_word({"a"}, "b") - (-1.0)) <= tol);
  // log10(0.6 * 0.225 * 0.675).
  CHECK(std::abs(score_sentence(m, {"a", "a"}).log10_total - (-1.040362458673969)) <= tol);
}

TEST_CASE("estimated conditionals sum to one per context") {
  ArpaModel m = estimate_arpa({{"a", "a"}, {"b", "a"}, {"a"}}, 2, 0.1);
  // Sum over the full vocabulary; the 1e-99 mass on <s> is absorbed by
  // the tolerance.
  CHECK(std::abs(conditional_mass(m, {"<s>"}) - 1.0) <= 1e-9);
  CHECK(std::abs(conditional_mass(m, {"a"}) - 1.0) <= 1e-9);
  CHECK(std::abs(conditional_mass(m, {"b"}) - 1.0) <= 1e-9);
  // Unigrams themselves form a distribution.
  CHECK(std::abs(conditional_mass(m, {}) - 1.0) <= 1e-9);
}

TEST_CASE("estimated model survives serialization") {
  ArpaModel m = estimate_arpa({{"a", "a"}, {"b", "a"}, {"a"}}, 2, 0.1);
  std::string s1 = serialize_arpa(m);
  ArpaModel r = parse_arpa(s1);
  CHECK(serialize_arpa(r) == s1);
  // %.7g keeps seven significant digits.
  CHECK(std::abs(r.score_word({"a"}, "b") - m.score_word({"a"}, "b")) <= 1e-6);
}

TEST_CASE("estimator rejects bad configuration") {
  CHECK_THROWS_AS(estimate_arpa({{"a"}}, 0, 0.1), ConfigError);
  CHECK_THROWS_AS(estimate_arpa({{"a"}}, 2, 0.0), ConfigError);
  CHECK_THROWS_AS(estimate_arpa({{"a"}}, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(estimate_arpa({}, 2, 0.1), ConfigError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace casr

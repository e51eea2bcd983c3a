// tests/test_rescore.cc

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
#include <random>
#include <string>
#include <vector>

#include "casr/decoder/metrics.h"
#include "casr/decoder/rescore.h"
#include "casr/util/error.h"
#include "doctest.h"

namespace casr {
namespace {

constexpr double kLn10 = 2.302585092994046;

// Order-1 model under which the lenient sentence scores are
// "a" -> -0.5 and "b" -> -0.25.
ArpaModel crossover_lm() {
  return parse_arpa(
      "\\data\\\n"
      "ngram 1=4\n"
      "\n"
      "\\1-grams:\n"
      "-99\t<s>\n"
      "-0.05\t</s>\n"
      "-0.45\ta\n"
      "-0.2\tb\n"
      "\n"
      "\\end\\\n");
}

// With lm("a") - lm("b") = -0.25, the combined scores of
// {"a", -1.0} and {"b", -1.0 - 0.25*ln10*cross} are equal exactly at
// alpha = cross.
std::vector<Candidate> crossover_pair(double cross) {
  return {{"a", -1.0}, {"b", -1.0 - 0.25 * kLn10 * cross}};
}

TEST_SUITE("rescore") {

TEST_CASE("edit distance hand cases") {
  CHECK(edit_distance({}, {}) == 0);
  CHECK(edit_distance({"a"}, {}) == 1);
  CHECK(edit_distance({}, {"a", "b"}) == 2);
  CHECK(edit_distance({"a", "b", "c"}, {"a", "x", "c"}) == 1);
  CHECK(edit_distance({"a", "b"}, {"b", "a"}) == 2);
  CHECK(edit_distance_chars("kitten", "sitting") == 3);
  CHECK(edit_distance_chars("", "abc") == 3);
}

TEST_CASE("word and character error rates") {
  CHECK(wer("a b c", "a b c") == 0.0);
  CHECK(std::abs(wer("a x c", "a b c") - 1.0 / 3.0) <= 1e-15);
  CHECK(wer("", "a b") == 1.0);
  // The denominator is the reference length, so the rate is asymmetric.
  CHECK(wer("a b c d", "a b") == 1.0);
  CHECK(wer("a b", "a b c d") == 0.5);
  // Word comparison goes through the lowercasing tokenizer.
  CHECK(wer("A  B", "a b") == 0.0);

  CHECK(std::abs(cer("abd", "abc") - 1.0 / 3.0) <= 1e-15);
  CHECK(cer("", "ab") == 1.0);

  CHECK_THROWS_AS(wer("a", ""), ConfigError);
  CHECK_THROWS_AS(wer("a", "   "), ConfigError);
  CHECK_THROWS_AS(cer("a", ""), ConfigError);
}

TEST_CASE("accumulator pools errors over tokens") {
  ErrorRateAccumulator acc;
  CHECK(acc.rate() == 0.0);
  acc.add_words("a x", "a b");  // 1 error, 2 tokens
  acc.add_words("c", "c");      // 0 errors, 1 token
  CHECK(std::abs(acc.rate() - 1.0 / 3.0) <= 1e-15);

  ErrorRateAccumulator chars;
  chars.add_chars("ab", "ac");  // 1 error, 2 chars
  chars.add_chars("x", "xyz");  // 2 errors, 3 chars
  CHECK(chars.errors == 3);
  CHECK(chars.tokens == 5);
  CHECK(std::abs(chars.rate() - 0.6) <= 1e-15);
}

TEST_CASE("combined score formula") {
  CHECK(std::abs(combined_score(-1.5, -0.5, 2.0) - (-1.5 - kLn10)) <= 1e-12);
  // Zero weight reduces to the acoustic score alone.
  CHECK(combined_score(-3.25, -7.0, 0.0) == -3.25);
  // The insertion bonus defaults to zero, so the count is inert.
  CHECK(combined_score(-1.0, -1.0, 1.0) == combined_score(-1.0, -1.0, 1.0, 0.0, 7));
  CHECK(std::abs(combined_score(-1.0, -1.0, 1.0, 0.5, 4) - (-1.0 - kLn10 + 2.0)) <= 1e-12);
}

TEST_CASE("lenient scoring maps or flattens unknown words") {
  ArpaModel m = load_arpa(std::string(CASR_TEST_DATA_DIR) + "/backoff.arpa");

  // No <unk> in the model: the word costs a flat -99 and the context is
  // left untouched.
  std::vector<std::string> ctx{"a"};
  CHECK(lenient_word_score(m, &ctx, "zzz") == -99.0);
  REQUIRE(ctx.size() == 1);
  CHECK(ctx[0] == "a");

  // In-vocabulary words advance the context window.
  ctx = {kSentenceStart};
  CHECK(lenient_word_score(m, &ctx, "a") == -0.30103);
  CHECK(lenient_word_score(m, &ctx, "b") == -0.69897);
  REQUIRE(ctx.size() == 1);
  CHECK(ctx[0] == "b");

  // Full sentences agree with the strict scorer when everything is known.
  CHECK(std::abs(lenient_sentence_log10(m, "a b") -
                 score_sentence(m, {"a", "b"}).log10_total) <= 1e-12);
  // An empty transcript scores the bare sentence end.
  CHECK(std::abs(lenient_sentence_log10(m, "") - (-0.45)) <= 1e-12);

  // With <unk> present the unknown word takes its probability.
  ArpaModel unk = parse_arpa(
      "\\data\\\n"
      "ngram 1=3\n"
      "\n"
      "\\1-grams:\n"
      "-99\t<s>\n"
      "-0.5\t</s>\n"
      "-0.4\t<unk>\n"
      "\n"
      "\\end\\\n");
  std::vector<std::string> uctx{kSentenceStart};
  CHECK(lenient_word_score(unk, &uctx, "zzz") == -0.4);
}

TEST_CASE("zero weight rescoring is the acoustic argmax") {
  ArpaModel m = crossover_lm();
  // The language model prefers "b"; the acoustics prefer "a".
  std::vector<Candidate> cands = {{"a", -1.0}, {"b", -1.5}};
  ScoredCandidate best = rescore_best(cands, m, 0.0);
  CHECK(best.transcript == "a");
  CHECK(best.combined == -1.0);
}

TEST_CASE("rescoring preserves candidate order and fills every field") {
  ArpaModel m = crossover_lm();
  std::vector<Candidate> cands = {{"b", -2.0}, {"a", -1.0}};
  std::vector<ScoredCandidate> scored = rescore_candidates(cands, m, 1.5);
  REQUIRE(scored.size() == 2);
  CHECK(scored[0].transcript == "b");
  CHECK(scored[1].transcript == "a");
  CHECK(std::abs(scored[0].log10_p_lm - (-0.25)) <= 1e-12);
  CHECK(std::abs(scored[1].log10_p_lm - (-0.5)) <= 1e-12);
  for (const auto& s : scored)
    CHECK(s.combined == combined_score(s.log_p_am, s.log10_p_lm, 1.5));

  CHECK_THROWS_AS(rescore_candidates({}, m, 1.0), ConfigError);
  CHECK_THROWS_AS(rescore_best({}, m, 1.0), ConfigError);
}

TEST_CASE("winner flips at the engineered crossover weight") {
  ArpaModel m = crossover_lm();
  std::vector<Candidate> cands = crossover_pair(2.0);

  // At the crossover the two combined scores coincide.
  std::vector<ScoredCandidate> at = rescore_candidates(cands, m, 2.0);
  CHECK(std::abs(at[0].combined - at[1].combined) <= 1e-9);

  CHECK(rescore_best(cands, m, 2.0 - 1e-6).transcript == "a");
  CHECK(rescore_best(cands, m, 2.0 + 1e-6).transcript == "b");
  // The flip is sharp: well clear of the crossover nothing changes.
  CHECK(rescore_best(cands, m, 0.5).transcript == "a");
  CHECK(rescore_best(cands, m, 4.0).transcript == "b");
}

TEST_CASE("score ties break to shorter then lexicographic transcripts") {
  // Equal unigrams and equal acoustics: exact combined-score ties.
  ArpaModel even = parse_arpa(
      "\\data\\\n"
      "ngram 1=4\n"
      "\n"
      "\\1-grams:\n"
      "-99\t<s>\n"
      "-0.1\t</s>\n"
      "-0.3\ta\n"
      "-0.3\tb\n"
      "\n"
      "\\end\\\n");
  CHECK(rescore_best({{"b", -1.0}, {"a", -1.0}}, even, 1.0).transcript == "a");

  // lm("a a") = 2 * (-0.2) and lm("b") = -0.4 tie exactly; the shorter
  // transcript wins.
  ArpaModel doubled = parse_arpa(
      "\\data\\\n"
      "ngram 1=4\n"
      "\n"
      "\\1-grams:\n"
      "-99\t<s>\n"
      "-0.1\t</s>\n"
      "-0.2\ta\n"
      "-0.4\tb\n"
      "\n"
      "\\end\\\n");
  CHECK(rescore_best({{"a a", -1.0}, {"b", -1.0}}, doubled, 1.0).transcript == "b");
}

TEST_CASE("weight tuning recovers the engineered minimum") {
  ArpaModel m = crossover_lm();
  // Example 1 is correct only above alpha 1.5, example 2 only below 2.5:
  // corpus WER is 0.5 outside (1.5, 2.5) and 0 inside, centered on 2.
  std::vector<TuneExample> examples;
  examples.push_back({crossover_pair(1.5), "b"});
  examples.push_back({crossover_pair(2.5), "a"});

  AlphaTuneResult r = tune_alpha(examples, m, 0.0, 5.0, 50, 7);
  REQUIRE(r.curve.size() == 50);
  CHECK(r.best_wer == 0.0);
  CHECK(r.best_alpha > 1.5);
  CHECK(r.best_alpha < 2.5);

  // Replay the seeded draw sequence: same generator, same scaling.
  std::mt19937_64 rng(7);
  double expect_best = 1e300;
  for (int i = 0; i < 50; ++i) {
    double alpha = 5.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    CHECK(r.curve[static_cast<size_t>(i)].alpha == alpha);
    double expect_wer = (alpha > 1.5 && alpha < 2.5) ? 0.0 : 0.5;
    CHECK(r.curve[static_cast<size_t>(i)].wer == expect_wer);
    if (expect_wer == 0.0 && alpha < expect_best) expect_best = alpha;
  }
  // Ties on WER resolve to the smallest drawn weight.
  CHECK(r.best_alpha == expect_best);

  CHECK_THROWS_AS(tune_alpha(examples, m, 0.0, 5.0, 0, 1), ConfigError);
  CHECK_THROWS_AS(tune_alpha(examples, m, 3.0, 1.0, 10, 1), ConfigError);
  CHECK_THROWS_AS(tune_alpha({}, m, 0.0, 5.0, 10, 1), ConfigError);
}

TEST_CASE("routing gates on per-character confidence") {
  // exp(ln(0.25) / 2) = 0.5.
  RouteDecision d = route(std::log(0.25), 2, 0.4);
  CHECK(d.decision == CascadeRoute::kCascade);
  CHECK(std::abs(d.per_char_prob - 0.5) <= 1e-12);
  CHECK(std::abs(d.log_per_char - std::log(0.25) / 2.0) <= 1e-15);

  CHECK(route(std::log(0.25), 2, 0.6).decision == CascadeRoute::kLmRescore);
  // The gate is strictly above-threshold.
  CHECK(route(std::log(0.25), 2, 0.5).decision == CascadeRoute::kLmRescore);

  // An empty transcript always stays on the rescoring path.
  CHECK(route(0.0, 0, 0.0).decision == CascadeRoute::kLmRescore);
  CHECK(route(-1000.0, 0, 0.0).decision == CascadeRoute::kLmRescore);

  // A threshold of one (or more) can never be exceeded by a probability.
  CHECK(route(0.0, 5, 1.0).decision == CascadeRoute::kLmRescore);
  CHECK(route(-1e-9, 3, 1.0).decision == CascadeRoute::kLmRescore);
  CHECK(route(-0.5, 4, 1.5).decision == CascadeRoute::kLmRescore);
}

TEST_CASE("route names for logs and reports") {
  CHECK(std::string(route_decision_name(CascadeRoute::kCascade)) == "to_cascade");
  CHECK(std::string(route_decision_name(CascadeRoute::kLmRescore)) == "to_lm_rescoring");
  CHECK(std::string(route_stage_name(CascadeRoute::kCascade)) == "stage2");
  CHECK(std::string(route_stage_name(CascadeRoute::kLmRescore)) == "stage1");
}

}  // TEST_SUITE

}  // namespace
}  // namespace casr

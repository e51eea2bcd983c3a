// casr/decoder/rescore.cc

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

#include "casr/decoder/rescore.h"

#include <cmath>
#include <limits>
#include <random>

#include "casr/decoder/metrics.h"
#include "casr/util/error.h"

namespace casr {

namespace {
constexpr double kLn10 = 2.302585092994046;
constexpr double kOovLog10 = -99.0;

// 53-bit mantissa draw in [0, 1); avoids the library distribution whose
// output sequence is not pinned by the standard.
double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool transcript_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}
}  // namespace

double combined_score(double log_p_am, double log10_p_lm, double alpha, double word_bonus,
                      int64_t word_count) {
  return log_p_am + alpha * kLn10 * log10_p_lm + word_bonus * static_cast<double>(word_count);
}

double lenient_word_score(const ArpaModel& model, std::vector<std::string>* context,
                          const std::string& word) {
  if (!model.has_word(word) && !model.has_unk()) return kOovLog10;
  double s = model.score_word(*context, word, true);
  context->push_back(model.has_word(word) ? word : kUnknownWord);
  size_t max_ctx = static_cast<size_t>(model.order() - 1);
  if (context->size() > max_ctx)
    context->erase(context->begin(), context->end() - static_cast<long>(max_ctx));
  return s;
}

double lenient_sentence_log10(const ArpaModel& model, const std::string& text) {
  std::vector<std::string> context{kSentenceStart};
  double total = 0.0;
  for (const auto& w : tokenize(text)) total += lenient_word_score(model, &context, w);
  total += model.score_word(context, kSentenceEnd);
  return total;
}

std::vector<ScoredCandidate> rescore_candidates(const std::vector<Candidate>& candidates,
                                                const ArpaModel& model, double alpha) {
  if (candidates.empty()) throw ConfigError("rescoring needs at least one candidate");
  std::vector<ScoredCandidate> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    ScoredCandidate s;
    s.transcript = c.transcript;
    s.log_p_am = c.log_p_am;
    s.log10_p_lm = lenient_sentence_log10(model, c.transcript);
    s.combined = combined_score(s.log_p_am, s.log10_p_lm, alpha);
    out.push_back(s);
  }
  return out;
}

ScoredCandidate rescore_best(const std::vector<Candidate>& candidates, const ArpaModel& model,
                             double alpha) {
  auto scored = rescore_candidates(candidates, model, alpha);
  size_t best = 0;
  for (size_t i = 1; i < scored.size(); ++i) {
    if (scored[i].combined > scored[best].combined ||
        (scored[i].combined == scored[best].combined &&
         transcript_less(scored[i].transcript, scored[best].transcript)))
      best = i;
  }
  return scored[best];
}

AlphaTuneResult tune_alpha(const std::vector<TuneExample>& examples, const ArpaModel& model,
                           double lo, double hi, int trials, uint64_t seed) {
  if (trials < 1) throw ConfigError("alpha tuning needs at least one trial");
  if (hi < lo) throw ConfigError("alpha range is inverted");
  if (examples.empty()) throw ConfigError("alpha tuning needs at least one example");

  std::mt19937_64 rng(seed);
  AlphaTuneResult result;
  result.best_wer = std::numeric_limits<double>::infinity();
  result.best_alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    double alpha = lo + (hi - lo) * uniform_unit(rng);
    ErrorRateAccumulator acc;
    for (const auto& ex : examples) {
      auto best = rescore_best(ex.candidates, model, alpha);
      acc.add_words(best.transcript, ex.reference);
    }
    double w = acc.rate();
    result.curve.push_back({alpha, w});
    if (w < result.best_wer || (w == result.best_wer && alpha < result.best_alpha)) {
      result.best_wer = w;
      result.best_alpha = alpha;
    }
  }
  return result;
}

RouteDecision route(double log_p_am, size_t transcript_chars, double threshold) {
  RouteDecision d;
  if (transcript_chars == 0) {
    d.decision = CascadeRoute::kLmRescore;
    d.log_per_char = log_p_am;
    d.per_char_prob = std::exp(log_p_am);
    return d;
  }
  d.log_per_char = log_p_am / static_cast<double>(transcript_chars);
  d.per_char_prob = std::exp(d.log_per_char);
  d.decision = d.per_char_prob > threshold ? CascadeRoute::kCascade : CascadeRoute::kLmRescore;
  return d;
}

const char* route_decision_name(CascadeRoute r) {
  return r == CascadeRoute::kCascade ? "to_cascade" : "to_lm_rescoring";
}

const char* route_stage_name(CascadeRoute r) {
  return r == CascadeRoute::kCascade ? "stage2" : "stage1";
}

}  // namespace casr

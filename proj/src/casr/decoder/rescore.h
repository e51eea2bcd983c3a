// casr/decoder/rescore.h

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

#ifndef CASR_DECODER_RESCORE_H_
#define CASR_DECODER_RESCORE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "casr/lm/arpa.h"

namespace casr {

// An n-best entry: transcript text plus its acoustic log probability
// (natural log, total prefix mass from the beam search).
struct Candidate {
  std::string transcript;
  double log_p_am = 0.0;
};

struct ScoredCandidate {
  std::string transcript;
  double log_p_am = 0.0;
  double log10_p_lm = 0.0;
  double combined = 0.0;  // log_p_am + alpha * ln(10) * log10_p_lm
};

// Combined score with the LM weight alpha applied to the natural-log LM
// term. word_bonus is a per-word insertion bonus hook; the combination rule
// as published carries no length term, so it defaults to 0.
double combined_score(double log_p_am, double log10_p_lm, double alpha, double word_bonus = 0.0,
                      int64_t word_count = 0);

// Word score that never throws: out-of-vocabulary words map to <unk> when
// the model has one, otherwise cost a flat -99 log10 and leave the context
// unchanged. Context words must all be in vocabulary.
double lenient_word_score(const ArpaModel& model, std::vector<std::string>* context,
                          const std::string& word);

// Full-sentence lenient score including the </s> term; an empty transcript
// scores the bare sentence-end after <s>.
double lenient_sentence_log10(const ArpaModel& model, const std::string& text);

// Rescoring over an n-best list: every candidate gets its lenient sentence
// score, and the one with the highest combined score wins. Score ties break
// toward the shorter, then lexicographically smaller transcript. Throws
// ConfigError on an empty candidate list.
std::vector<ScoredCandidate> rescore_candidates(const std::vector<Candidate>& candidates,
                                                const ArpaModel& model, double alpha);
ScoredCandidate rescore_best(const std::vector<Candidate>& candidates, const ArpaModel& model,
                             double alpha);

// One utterance of the weight-tuning set.
struct TuneExample {
  std::vector<Candidate> candidates;
  std::string reference;
};

struct AlphaPoint {
  double alpha = 0.0;
  double wer = 0.0;
};

struct AlphaTuneResult {
  double best_alpha = 0.0;
  double best_wer = 0.0;
  std::vector<AlphaPoint> curve;  // in draw order
};

// Draws `trials` weights uniformly at random from [lo, hi] (seeded, so the
// draw sequence is reproducible), rescores every example at each weight,
// and picks the corpus-WER minimizer. Equal WERs go to the smaller weight.
AlphaTuneResult tune_alpha(const std::vector<TuneExample>& examples, const ArpaModel& model,
                           double lo, double hi, int trials, uint64_t seed);

enum class CascadeRoute { kLmRescore, kCascade };

struct RouteDecision {
  CascadeRoute decision = CascadeRoute::kLmRescore;
  double log_per_char = 0.0;   // log_p_am / transcript length
  double per_char_prob = 0.0;  // exp of the above
};

// Confidence gate for two-stage decoding: the transcript's per-character
// geometric mean acoustic probability, exp(log_p_am / len). Above the
// threshold the utterance goes to the cascaded model; otherwise it stays on
// the rescoring path. An empty transcript always takes the rescoring path.
RouteDecision route(double log_p_am, size_t transcript_chars, double threshold);

const char* route_decision_name(CascadeRoute r);  // "to_cascade" | "to_lm_rescoring"
const char* route_stage_name(CascadeRoute r);     // "stage2" | "stage1"

}  // namespace casr

#endif  // CASR_DECODER_RESCORE_H_

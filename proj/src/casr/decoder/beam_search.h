// casr/decoder/beam_search.h

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

#ifndef CASR_DECODER_BEAM_SEARCH_H_
#define CASR_DECODER_BEAM_SEARCH_H_

#include <string>
#include <vector>

#include "casr/ctc/alphabet.h"
#include "casr/lm/arpa.h"
#include "casr/util/tensor.h"

namespace casr {

struct DecodeConfig {
  int beam_width = 300;
  int top_n = 10;
  // In-beam shallow fusion: when a space closes a word, the word's language
  // model score scaled by lm_alpha * ln(10) joins the pruning score. Off by
  // default; the usual path rescores the n-best list afterwards.
  bool lm_fusion = false;
  double lm_alpha = 2.0;
};

struct BeamHypothesis {
  LabelSequence labels;
  double log_p_blank;     // mass of paths ending in blank
  double log_p_nonblank;  // mass of paths ending in the last label
  double log10_p_lm = 0.0;  // fused word scores so far (fusion mode only)

  double log_p_total() const;
};

struct GreedyResult {
  LabelSequence labels;
  // Best-path score Σ_t max_c log q_t^c, not the full collapsed-target mass.
  double log_p_best_path = 0.0;
};

// Per-frame argmax (ties to the lowest index) then collapse. log_probs is
// T x |alphabet| in log domain with blank in the last column.
GreedyResult greedy_decode(const Matrix& log_probs, const Alphabet& alphabet);

// Prefix beam search over collapsed label sequences. Each prefix keeps
// separate blank-ending and non-blank-ending masses so a repeated character
// is only emitted across a blank. Equal prefixes produced by different
// extensions merge by probability addition. Hypotheses are ranked by total
// mass, ties broken toward the shorter then lexicographically smaller label
// sequence; at most cfg.top_n survive. `lm` must be non-null when
// cfg.lm_fusion is set.
std::vector<BeamHypothesis> prefix_beam_search(const Matrix& log_probs, const Alphabet& alphabet,
                                               const DecodeConfig& cfg,
                                               const ArpaModel* lm = nullptr);

}  // namespace casr

#endif  // CASR_DECODER_BEAM_SEARCH_H_

// casr/ctc/ctc.h

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

#ifndef CASR_CTC_CTC_H_
#define CASR_CTC_CTC_H_

#include <limits>

#include "casr/ctc/alphabet.h"
#include "casr/util/tensor.h"

namespace casr {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; kLogZero is the additive identity.
double log_add(double a, double b);

// Numerically stable softmax of each row.
Matrix softmax_rows(const Matrix& logits);

// Removes repeated consecutive symbols, then removes blanks.
LabelSequence collapse(const LabelSequence& path, int blank);

// Shortest path length that can emit `target`: |y| plus one separating blank
// between each pair of equal consecutive labels.
int64_t min_path_length(const LabelSequence& target);

// Log of the total probability over all length-T paths collapsing to
// `target`, with `posts` holding per-frame posteriors (rows sum to 1).
// Computed by the forward recursion over the blank-interleaved target in log
// space. Returns kLogZero when the target cannot be aligned in T frames.
double ctc_log_prob(const Matrix& posts, const LabelSequence& target, int blank);

// Same quantity from the backward recursion; the two agree to ~1e-10 and the
// pair feeds the gradient's occupancy terms.
double ctc_log_prob_backward(const Matrix& posts, const LabelSequence& target, int blank);

struct CtcResult {
  double log_prob = kLogZero;  // ln p(target | inputs)
  double loss = 0.0;           // -log_prob
  Matrix grad;                 // d loss / d logits, T x alphabet
};

// Loss and gradient with respect to pre-softmax logits, via the
// forward-backward occupancy. Gradient rows sum to zero.
// Throws ImpossibleAlignment when no path can emit the target.
CtcResult ctc_loss_and_grad(const Matrix& logits, const LabelSequence& target, int blank);

}  // namespace casr

#endif  // CASR_CTC_CTC_H_

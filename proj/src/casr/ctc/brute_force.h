// casr/ctc/brute_force.h

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

#ifndef CASR_CTC_BRUTE_FORCE_H_
#define CASR_CTC_BRUTE_FORCE_H_

#include <map>

#include "casr/ctc/alphabet.h"
#include "casr/util/tensor.h"

namespace casr {

// Exhaustive-enumeration oracle for the path-sum probability: walks every
// |alphabet|^T path, keeps the ones collapsing to `target`, sums products in
// linear space. Returns the natural log of the sum, kLogZero when no path
// matches. Independent of the forward-backward recursion by design.
// Throws OracleTooLarge when |alphabet|^T exceeds 1e7 paths.
double brute_force_ctc(const Matrix& posts, const LabelSequence& target, int blank);

// Full path-sum distribution: total probability per reachable collapsed
// target. The values sum to 1 when the rows of `posts` do.
std::map<LabelSequence, double> brute_force_ctc_all(const Matrix& posts, int blank);

}  // namespace casr

#endif  // CASR_CTC_BRUTE_FORCE_H_

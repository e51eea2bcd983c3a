// casr/ctc/brute_force.cc

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

#include "casr/ctc/brute_force.h"

#include <cmath>

#include "casr/ctc/ctc.h"
#include "casr/util/error.h"

namespace casr {

namespace {

void check_size(const Matrix& posts) {
  const double paths = std::pow(static_cast<double>(posts.cols()),
                                static_cast<double>(posts.rows()));
  if (paths > 1e7) {
    throw OracleTooLarge("enumeration of " + std::to_string(posts.cols()) + "^" +
                         std::to_string(posts.rows()) + " paths is over the 1e7 cap");
  }
}

template <typename Visit>
void enumerate_paths(const Matrix& posts, Visit&& visit) {
  const int64_t T = posts.rows();
  const int A = static_cast<int>(posts.cols());
  LabelSequence path(static_cast<size_t>(T), 0);
  while (true) {
    double p = 1.0;
    for (int64_t t = 0; t < T; ++t) p *= posts(t, path[static_cast<size_t>(t)]);
    visit(path, p);
    // odometer increment
    int64_t i = T - 1;
    for (; i >= 0; --i) {
      if (++path[static_cast<size_t>(i)] < A) break;
      path[static_cast<size_t>(i)] = 0;
    }
    if (i < 0) break;
  }
}

}  // namespace

double brute_force_ctc(const Matrix& posts, const LabelSequence& target, int blank) {
  check_size(posts);
  if (posts.rows() == 0) return target.empty() ? 0.0 : kLogZero;
  double total = 0.0;
  enumerate_paths(posts, [&](const LabelSequence& path, double p) {
    if (collapse(path, blank) == target) total += p;
  });
  return total > 0.0 ? std::log(total) : kLogZero;
}

std::map<LabelSequence, double> brute_force_ctc_all(const Matrix& posts, int blank) {
  check_size(posts);
  std::map<LabelSequence, double> dist;
  if (posts.rows() == 0) {
    dist[{}] = 1.0;
    return dist;
  }
  enumerate_paths(posts, [&](const LabelSequence& path, double p) {
    dist[collapse(path, blank)] += p;
  });
  return dist;
}

}  // namespace casr

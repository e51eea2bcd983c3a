// casr/ctc/ctc.cc

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

#include "casr/ctc/ctc.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "casr/util/error.h"

namespace casr {

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int64_t t = 0; t < logits.rows(); ++t) {
    const double* in = logits.row(t);
    double* o = out.row(t);
    double mx = in[0];
    for (int64_t k = 1; k < logits.cols(); ++k) mx = std::max(mx, in[k]);
    double sum = 0.0;
    for (int64_t k = 0; k < logits.cols(); ++k) {
      o[k] = std::exp(in[k] - mx);
      sum += o[k];
    }
    for (int64_t k = 0; k < logits.cols(); ++k) o[k] /= sum;
  }
  return out;
}

LabelSequence collapse(const LabelSequence& path, int blank) {
  LabelSequence out;
  int prev = -1;
  for (int c : path) {
    if (c != prev && c != blank) out.push_back(c);
    prev = c;
  }
  return out;
}

int64_t min_path_length(const LabelSequence& target) {
  int64_t len = static_cast<int64_t>(target.size());
  for (size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++len;
  }
  return len;
}

namespace {

// Blank-interleaved target: blank at even slots, target labels at odd slots.
inline int extended_label(const LabelSequence& target, int blank, int64_t s) {
  return (s % 2 == 0) ? blank : target[static_cast<size_t>(s / 2)];
}

// log posteriors of the extended target per frame, la(t, s).
Matrix forward_lattice(const Matrix& lq, const LabelSequence& target, int blank) {
  const int64_t T = lq.rows();
  const int64_t S = 2 * static_cast<int64_t>(target.size()) + 1;
  Matrix la(T, S, kLogZero);
  la(0, 0) = lq(0, blank);
  if (S > 1) la(0, 1) = lq(0, extended_label(target, blank, 1));
  for (int64_t t = 1; t < T; ++t) {
    for (int64_t s = 0; s < S; ++s) {
      const int lab = extended_label(target, blank, s);
      double v = la(t - 1, s);
      if (s >= 1) v = log_add(v, la(t - 1, s - 1));
      if (s >= 2 && lab != blank && lab != extended_label(target, blank, s - 2)) {
        v = log_add(v, la(t - 1, s - 2));
      }
      la(t, s) = v == kLogZero ? kLogZero : v + lq(t, lab);
    }
  }
  return la;
}

Matrix backward_lattice(const Matrix& lq, const LabelSequence& target, int blank) {
  const int64_t T = lq.rows();
  const int64_t S = 2 * static_cast<int64_t>(target.size()) + 1;
  Matrix lb(T, S, kLogZero);
  lb(T - 1, S - 1) = lq(T - 1, blank);
  if (S > 1) lb(T - 1, S - 2) = lq(T - 1, extended_label(target, blank, S - 2));
  for (int64_t t = T - 2; t >= 0; --t) {
    for (int64_t s = S - 1; s >= 0; --s) {
      const int lab = extended_label(target, blank, s);
      double v = lb(t + 1, s);
      if (s + 1 < S) v = log_add(v, lb(t + 1, s + 1));
      if (s + 2 < S) {
        const int nxt = extended_label(target, blank, s + 2);
        if (nxt != blank && nxt != lab) v = log_add(v, lb(t + 1, s + 2));
      }
      lb(t, s) = v == kLogZero ? kLogZero : v + lq(t, lab);
    }
  }
  return lb;
}

Matrix log_of(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (int64_t i = 0; i < m.rows(); ++i) {
    for (int64_t j = 0; j < m.cols(); ++j) out(i, j) = std::log(m(i, j));
  }
  return out;
}

}  // namespace

double ctc_log_prob(const Matrix& posts, const LabelSequence& target, int blank) {
  const int64_t T = posts.rows();
  if (T == 0) return target.empty() ? 0.0 : kLogZero;
  if (min_path_length(target) > T) return kLogZero;
  const Matrix lq = log_of(posts);
  const Matrix la = forward_lattice(lq, target, blank);
  const int64_t S = 2 * static_cast<int64_t>(target.size()) + 1;
  double total = la(T - 1, S - 1);
  if (S > 1) total = log_add(total, la(T - 1, S - 2));
  return total;
}

double ctc_log_prob_backward(const Matrix& posts, const LabelSequence& target, int blank) {
  const int64_t T = posts.rows();
  if (T == 0) return target.empty() ? 0.0 : kLogZero;
  if (min_path_length(target) > T) return kLogZero;
  const Matrix lq = log_of(posts);
  const Matrix lb = backward_lattice(lq, target, blank);
  double total = lb(0, 0);
  if (lb.cols() > 1) total = log_add(total, lb(0, 1));
  return total;
}

CtcResult ctc_loss_and_grad(const Matrix& logits, const LabelSequence& target, int blank) {
  const int64_t T = logits.rows();
  const int64_t A = logits.cols();
  if (T == 0) {
    if (!target.empty()) {
      throw ImpossibleAlignment("no frames for a non-empty target");
    }
    CtcResult r;
    r.log_prob = 0.0;
    r.loss = 0.0;
    r.grad = Matrix(0, A);
    return r;
  }
  if (min_path_length(target) > T) {
    throw ImpossibleAlignment("target needs " + std::to_string(min_path_length(target)) +
                              " frames but only " + std::to_string(T) + " are available");
  }

  const Matrix q = softmax_rows(logits);
  const Matrix lq = log_of(q);
  const Matrix la = forward_lattice(lq, target, blank);
  const Matrix lb = backward_lattice(lq, target, blank);

  const int64_t S = 2 * static_cast<int64_t>(target.size()) + 1;
  double log_total = la(T - 1, S - 1);
  if (S > 1) log_total = log_add(log_total, la(T - 1, S - 2));
  if (log_total == kLogZero) {
    throw ImpossibleAlignment("zero total path probability");
  }

  CtcResult r;
  r.log_prob = log_total;
  r.loss = -log_total;
  r.grad = Matrix(T, A);
  std::vector<double> log_occ(static_cast<size_t>(A));
  for (int64_t t = 0; t < T; ++t) {
    std::fill(log_occ.begin(), log_occ.end(), kLogZero);
    for (int64_t s = 0; s < S; ++s) {
      if (la(t, s) == kLogZero || lb(t, s) == kLogZero) continue;
      const int lab = extended_label(target, blank, s);
      // alpha and beta both include the frame-t posterior; divide one out.
      const double lg = la(t, s) + lb(t, s) - lq(t, lab);
      log_occ[static_cast<size_t>(lab)] = log_add(log_occ[static_cast<size_t>(lab)], lg);
    }
    for (int64_t k = 0; k < A; ++k) {
      const double occ = log_occ[static_cast<size_t>(k)] == kLogZero
                             ? 0.0
                             : std::exp(log_occ[static_cast<size_t>(k)] - log_total);
      r.grad(t, k) = q(t, k) - occ;
    }
  }
  return r;
}

}  // namespace casr

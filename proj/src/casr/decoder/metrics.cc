// casr/decoder/metrics.cc

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

#include "casr/decoder/metrics.h"

#include <algorithm>

#include "casr/lm/arpa.h"
#include "casr/util/error.h"

namespace casr {

namespace {

template <typename Seq>
int64_t levenshtein(const Seq& a, const Seq& b) {
  size_t n = a.size(), m = b.size();
  std::vector<int64_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= m; ++j) {
      int64_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

int64_t edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return levenshtein(a, b);
}

int64_t edit_distance_chars(const std::string& a, const std::string& b) {
  return levenshtein(a, b);
}

double wer(const std::string& hyp, const std::string& ref) {
  auto r = tokenize(ref), h = tokenize(hyp);
  if (r.empty()) throw ConfigError("word error rate needs a non-empty reference");
  return static_cast<double>(edit_distance(h, r)) / static_cast<double>(r.size());
}

double cer(const std::string& hyp, const std::string& ref) {
  if (ref.empty()) throw ConfigError("character error rate needs a non-empty reference");
  return static_cast<double>(edit_distance_chars(hyp, ref)) / static_cast<double>(ref.size());
}

void ErrorRateAccumulator::add_words(const std::string& hyp, const std::string& ref) {
  auto r = tokenize(ref), h = tokenize(hyp);
  errors += edit_distance(h, r);
  tokens += static_cast<int64_t>(r.size());
}

void ErrorRateAccumulator::add_chars(const std::string& hyp, const std::string& ref) {
  errors += edit_distance_chars(hyp, ref);
  tokens += static_cast<int64_t>(ref.size());
}

}  // namespace casr

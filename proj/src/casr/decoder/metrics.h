// casr/decoder/metrics.h

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

#ifndef CASR_DECODER_METRICS_H_
#define CASR_DECODER_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace casr {

// Levenshtein distance with unit costs.
int64_t edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b);
int64_t edit_distance_chars(const std::string& a, const std::string& b);

// Single-pair rates: edit distance over the reference token count. An empty
// reference (no words for wer, no characters for cer) throws ConfigError.
double wer(const std::string& hyp, const std::string& ref);
double cer(const std::string& hyp, const std::string& ref);

// Corpus-level rate: total errors over total reference tokens.
struct ErrorRateAccumulator {
  int64_t errors = 0;
  int64_t tokens = 0;

  void add_words(const std::string& hyp, const std::string& ref);
  void add_chars(const std::string& hyp, const std::string& ref);
  double rate() const { return tokens == 0 ? 0.0 : static_cast<double>(errors) / tokens; }
};

}  // namespace casr

#endif  // CASR_DECODER_METRICS_H_

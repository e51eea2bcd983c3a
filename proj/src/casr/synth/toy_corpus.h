// casr/synth/toy_corpus.h

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

#ifndef CASR_SYNTH_TOY_CORPUS_H_
#define CASR_SYNTH_TOY_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "casr/audio/wav.h"

namespace casr {

// Synthetic tone-sequence corpus: each letter of a small alphabet maps to a
// fixed sine frequency, an utterance is a random letter string rendered as a
// tone sequence with short gaps plus a noise floor. Small enough to train on
// in minutes yet separable enough for near-zero character error.
struct ToyCorpusConfig {
  int letters = 5;  // alphabet a.. ; tone count
  int train_utterances = 200;
  int test_utterances = 50;
  int min_len = 2;
  int max_len = 8;
  double tone_s = 0.15;
  double gap_s = 0.03;
  double lead_s = 0.05;
  double noise_stddev = 0.01;
  int sample_rate = 16000;
  double max_duration_s = 2.0;  // hard cap every utterance must fit under
  uint64_t seed = 0;

  // Throws ConfigError when counts or timings are unusable or the longest
  // possible utterance would exceed max_duration_s.
  void validate() const;
};

// Tone for letter index i, spaced so neighbours never share an FFT bin.
double tone_frequency_hz(int letter_index);

struct ToyUtterance {
  std::string id;
  std::string text;  // letter string, no separators
  AudioClip clip;
};

struct ToyCorpus {
  std::vector<ToyUtterance> train;
  std::vector<ToyUtterance> test;
};

ToyCorpus generate_toy_corpus(const ToyCorpusConfig& cfg);

// Lays out dir/wav/<id>.wav plus dir/train.jsonl and dir/test.jsonl manifests
// whose audio paths are relative to the process working directory.
void write_toy_corpus(const ToyCorpus& corpus, const std::string& dir);

}  // namespace casr

#endif  // CASR_SYNTH_TOY_CORPUS_H_

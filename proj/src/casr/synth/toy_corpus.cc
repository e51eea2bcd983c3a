// casr/synth/toy_corpus.cc

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

#include "casr/synth/toy_corpus.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "casr/sched/manifest.h"
#include "casr/util/error.h"

namespace casr {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAmplitude = 0.3;
constexpr double kFadeS = 0.005;

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, so wav bytes do not depend on the standard library's
// normal_distribution implementation.
double gaussian(std::mt19937_64& rng) {
  double u1 = uniform_unit(rng);
  double u2 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

void ToyCorpusConfig::validate() const {
  if (letters < 2 || letters > 19) throw ConfigError("letters must lie in [2, 19]");
  if (train_utterances < 1 || test_utterances < 1)
    throw ConfigError("both splits need at least one utterance");
  if (min_len < 1 || max_len < min_len) throw ConfigError("bad utterance length range");
  if (tone_s <= 0.0 || gap_s < 0.0 || lead_s < 0.0) throw ConfigError("bad segment timing");
  if (noise_stddev < 0.0) throw ConfigError("noise stddev cannot be negative");
  if (sample_rate < 8000) throw ConfigError("sample rate too low");
  double longest = lead_s + max_len * (tone_s + gap_s);
  if (longest > max_duration_s)
    throw ConfigError("longest possible utterance exceeds the duration cap");
}

double tone_frequency_hz(int letter_index) { return 400.0 * (letter_index + 1); }

namespace {

ToyUtterance render(const ToyCorpusConfig& cfg, const std::string& id, std::mt19937_64& rng) {
  ToyUtterance u;
  u.id = id;
  int len = cfg.min_len + static_cast<int>(rng() % static_cast<uint64_t>(cfg.max_len - cfg.min_len + 1));
  for (int i = 0; i < len; ++i)
    u.text.push_back(static_cast<char>('a' + static_cast<int>(rng() % static_cast<uint64_t>(cfg.letters))));

  int sr = cfg.sample_rate;
  auto n = [&](double seconds) { return static_cast<size_t>(std::lround(seconds * sr)); };
  size_t tone_n = n(cfg.tone_s), gap_n = n(cfg.gap_s), fade_n = n(kFadeS);

  u.clip.sample_rate = sr;
  auto& s = u.clip.samples;
  s.assign(n(cfg.lead_s), 0.0);
  for (char c : u.text) {
    double f = tone_frequency_hz(c - 'a');
    for (size_t t = 0; t < tone_n; ++t) {
      double env = 1.0;
      if (t < fade_n) env = static_cast<double>(t) / fade_n;
      size_t left = tone_n - 1 - t;
      if (left < fade_n) env = std::min(env, static_cast<double>(left) / fade_n);
      s.push_back(kAmplitude * env * std::sin(2.0 * kPi * f * static_cast<double>(t) / sr));
    }
    s.insert(s.end(), gap_n, 0.0);
  }
  if (cfg.noise_stddev > 0.0)
    for (double& x : s) x += cfg.noise_stddev * gaussian(rng);
  return u;
}

}  // namespace

ToyCorpus generate_toy_corpus(const ToyCorpusConfig& cfg) {
  cfg.validate();
  ToyCorpus corpus;
  std::mt19937_64 rng(cfg.seed);
  char id[32];
  for (int i = 0; i < cfg.train_utterances; ++i) {
    std::snprintf(id, sizeof(id), "train_%03d", i);
    corpus.train.push_back(render(cfg, id, rng));
  }
  for (int i = 0; i < cfg.test_utterances; ++i) {
    std::snprintf(id, sizeof(id), "test_%03d", i);
    corpus.test.push_back(render(cfg, id, rng));
  }
  return corpus;
}

namespace {

Manifest write_split(const std::vector<ToyUtterance>& split, const std::string& dir) {
  Manifest m;
  for (const auto& u : split) {
    std::string path = dir + "/wav/" + u.id + ".wav";
    write_wav(path, u.clip);
    ManifestEntry e;
    e.id = u.id;
    e.audio = path;
    e.text = u.text;
    e.duration_s = u.clip.duration_s();
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace

void write_toy_corpus(const ToyCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir + "/wav");
  save_manifest(write_split(corpus.train, dir), dir + "/train.jsonl");
  save_manifest(write_split(corpus.test, dir), dir + "/test.jsonl");
}

}  // namespace casr

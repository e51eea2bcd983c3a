// tests/test_frontend.cc

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

#include "casr/audio/frontend.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "casr/audio/wav.h"
#include "casr/util/error.h"
#include "doctest.h"

namespace casr {
namespace {

AudioClip noise_clip(double seconds, uint64_t seed) {
  AudioClip clip;
  std::mt19937_64 rng(seed);
  size_t n = static_cast<size_t>(seconds * clip.sample_rate);
  clip.samples.resize(n);
  for (auto& s : clip.samples)
    s = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  return clip;
}

// O(n^2) reference DFT of one Hann-windowed frame.
std::vector<double> naive_log_power(const std::vector<double>& samples, size_t start, int win,
                                    int bins, double floor) {
  std::vector<double> row(static_cast<size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < win; ++i) {
      double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / win));
      double x = samples[start + static_cast<size_t>(i)] * w;
      double ang = -2.0 * std::numbers::pi * k * i / win;
      re += x * std::cos(ang);
      im += x * std::sin(ang);
    }
    row[static_cast<size_t>(k)] = std::log(re * re + im * im + floor);
  }
  return row;
}

TEST_SUITE("frontend") {

TEST_CASE("frame count formula hand values") {
  // N = (1000x - 20) / 10, floor.
  CHECK(frame_count(1.0) == 98);
  CHECK(frame_count(10.0) == 998);
  CHECK(frame_count(21.0) == 2098);
  CHECK(frame_count(0.02) == 0);
  CHECK(frame_count(0.03) == 1);
  CHECK(frame_count(0.125) == 10);
  CHECK_THROWS_AS(frame_count(0.019), DurationTooShort);
  CHECK_THROWS_AS(frame_count(0.0), DurationTooShort);
}

TEST_CASE("frame count matches the closed form at millisecond granularity") {
  for (int64_t ms = 20; ms <= 21000; ms += 7) {
    CHECK(frame_count_ms(ms) == (ms - 20) / 10);
    CHECK(frame_count(static_cast<double>(ms) / 1000.0) == (ms - 20) / 10);
  }
}

TEST_CASE("frame count is monotone in duration") {
  int64_t prev = frame_count_ms(20);
  for (int64_t ms = 21; ms <= 4000; ++ms) {
    int64_t cur = frame_count_ms(ms);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("spectrogram rows match a naive DFT") {
  AudioClip clip = noise_clip(0.2, 11);
  FrontendConfig cfg;
  cfg.normalize = false;
  Spectrogram spec = compute_spectrogram(clip, cfg);
  REQUIRE(spec.frame_count() == 18);
  REQUIRE(spec.feature_dim() == 161);

  int win = clip.sample_rate * cfg.window_ms / 1000;
  int hop = clip.sample_rate * cfg.hop_ms / 1000;
  for (int64_t t : {int64_t{0}, int64_t{7}, int64_t{17}}) {
    auto want =
        naive_log_power(clip.samples, static_cast<size_t>(t * hop), win, cfg.fft_bins, cfg.log_floor);
    for (int64_t k = 0; k < spec.feature_dim(); ++k)
      CHECK(spec.frames(t, k) == doctest::Approx(want[static_cast<size_t>(k)]).epsilon(1e-9));
  }
}

TEST_CASE("pure tone concentrates energy in its bin") {
  AudioClip clip;
  clip.samples.resize(static_cast<size_t>(clip.sample_rate) / 2);
  for (size_t i = 0; i < clip.samples.size(); ++i)
    clip.samples[i] =
        0.5 * std::sin(2.0 * std::numbers::pi * 800.0 * static_cast<double>(i) / clip.sample_rate);
  FrontendConfig cfg;
  cfg.normalize = false;
  Spectrogram spec = compute_spectrogram(clip, cfg);
  // 800 Hz at a 320-sample window: bin 800 / 50 = 16.
  for (int64_t t = 0; t < spec.frame_count(); ++t) {
    int64_t best = 0;
    for (int64_t k = 1; k < spec.feature_dim(); ++k)
      if (spec.frames(t, k) > spec.frames(t, best)) best = k;
    CHECK(best == 16);
  }
}

TEST_CASE("normalized features have zero mean and unit variance") {
  AudioClip clip = noise_clip(0.5, 23);
  Spectrogram spec = compute_spectrogram(clip);
  for (int64_t k = 0; k < spec.feature_dim(); ++k) {
    double mean = 0.0, var = 0.0;
    for (int64_t t = 0; t < spec.frame_count(); ++t) mean += spec.frames(t, k);
    mean /= static_cast<double>(spec.frame_count());
    for (int64_t t = 0; t < spec.frame_count(); ++t) {
      double d = spec.frames(t, k) - mean;
      var += d * d;
    }
    var /= static_cast<double>(spec.frame_count());
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("constant signal leaves normalized columns at zero") {
  AudioClip clip;
  clip.samples.assign(static_cast<size_t>(clip.sample_rate) / 10, 0.0);
  Spectrogram spec = compute_spectrogram(clip);
  for (int64_t t = 0; t < spec.frame_count(); ++t)
    for (int64_t k = 0; k < spec.feature_dim(); ++k) CHECK(spec.frames(t, k) == 0.0);
}

TEST_CASE("spectrogram file round trip") {
  AudioClip clip = noise_clip(0.1, 5);
  Spectrogram spec = compute_spectrogram(clip);
  std::string path = "frontend_roundtrip.cspc";
  write_spectrogram(path, spec);
  Spectrogram back = read_spectrogram(path);
  REQUIRE(back.frame_count() == spec.frame_count());
  REQUIRE(back.feature_dim() == spec.feature_dim());
  for (int64_t t = 0; t < spec.frame_count(); ++t)
    for (int64_t k = 0; k < spec.feature_dim(); ++k)
      CHECK(back.frames(t, k) ==
            doctest::Approx(spec.frames(t, k)).epsilon(1e-6));  // stored as float32
  std::remove(path.c_str());
}

TEST_CASE("wav round trip at 16-bit precision") {
  AudioClip clip = noise_clip(0.05, 9);
  std::string path = "frontend_roundtrip.wav";
  write_wav(path, clip);
  AudioClip back = read_wav(path);
  REQUIRE(back.sample_rate == clip.sample_rate);
  REQUIRE(back.samples.size() == clip.samples.size());
  for (size_t i = 0; i < clip.samples.size(); ++i)
    CHECK(back.samples[i] == doctest::Approx(clip.samples[i]).epsilon(2e-4));
  std::remove(path.c_str());
}

}  // TEST_SUITE

}  // namespace
}  // namespace casr

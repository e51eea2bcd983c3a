// casr/audio/augment.cc

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

#include "casr/audio/augment.h"

#include <cmath>
#include <random>

#include "casr/util/error.h"

namespace casr {

namespace {

AudioClip speed_perturb(const AudioClip& clip, double factor) {
  if (!(factor >= 0.9 && factor <= 1.1)) {
    throw InvalidAugmentation("speed factor " + std::to_string(factor) +
                              " outside [0.9, 1.1]");
  }
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  if (clip.samples.empty()) return out;
  if (factor == 1.0) {
    out.samples = clip.samples;
    return out;
  }
  const size_t n = clip.samples.size();
  const auto out_n = static_cast<size_t>(std::floor((n - 1) / factor)) + 1;
  out.samples.resize(out_n);
  for (size_t i = 0; i < out_n; ++i) {
    const double pos = i * factor;
    const auto lo = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    const size_t hi = lo + 1 < n ? lo + 1 : lo;
    out.samples[i] = clip.samples[lo] * (1.0 - frac) + clip.samples[hi] * frac;
  }
  return out;
}

AudioClip add_noise(const AudioClip& clip, double snr_db, uint64_t seed) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw InvalidAugmentation("noise SNR must be finite or +inf");
  }
  AudioClip out = clip;
  if (std::isinf(snr_db) || clip.samples.empty()) return out;
  double power = 0.0;
  for (double s : clip.samples) power += s * s;
  power /= static_cast<double>(clip.samples.size());
  if (power <= 0.0) return out;  // silence carries no SNR reference
  const double noise_power = power / std::pow(10.0, snr_db / 10.0);
  const double scale = std::sqrt(noise_power);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& s : out.samples) s += scale * gauss(rng);
  return out;
}

}  // namespace

AudioClip augment(const AudioClip& clip, AugmentKind kind, double param, uint64_t seed) {
  check_clip(clip);
  switch (kind) {
    case AugmentKind::kSpeed:
      return speed_perturb(clip, param);
    case AugmentKind::kNoise:
      return add_noise(clip, param, seed);
  }
  throw InvalidAugmentation("unknown augmentation kind");
}

}  // namespace casr

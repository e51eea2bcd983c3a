// casr/audio/augment.h

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

#ifndef CASR_AUDIO_AUGMENT_H_
#define CASR_AUDIO_AUGMENT_H_

#include <cstdint>

#include "casr/audio/wav.h"

namespace casr {

enum class AugmentKind { kSpeed, kNoise };

// Deterministic data augmentation.
//   kSpeed: linear-interpolation resampling; param is the speed factor in
//           [0.9, 1.1], output duration scales by 1/factor. Factor 1.0 is a
//           bit-exact identity.
//   kNoise: seeded Gaussian noise at param dB SNR relative to the clip's
//           power. +inf SNR (and any silent clip) leaves samples unchanged.
// Throws InvalidAugmentation on an out-of-range factor or a NaN/-inf SNR.
AudioClip augment(const AudioClip& clip, AugmentKind kind, double param, uint64_t seed);

}  // namespace casr

#endif  // CASR_AUDIO_AUGMENT_H_

// casr/audio/frontend.h

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

#ifndef CASR_AUDIO_FRONTEND_H_
#define CASR_AUDIO_FRONTEND_H_

#include <cstdint>
#include <string>

#include "casr/audio/wav.h"
#include "casr/util/tensor.h"

namespace casr {

enum class WindowFn { kHann, kRectangular };

struct FrontendConfig {
  int window_ms = 20;
  int hop_ms = 10;
  int fft_bins = 161;  // fft_size/2 + 1 at 16 kHz / 20 ms
  bool normalize = true;  // per-utterance, per-feature zero-mean unit-variance
  double log_floor = 1e-10;
  WindowFn window = WindowFn::kHann;
};

// Log-power spectral frames, one row per 20 ms window hopped by 10 ms.
struct Spectrogram {
  Matrix frames;  // frame_count x feature_dim

  int64_t frame_count() const { return frames.rows(); }
  int64_t feature_dim() const { return frames.cols(); }
};

// Frame count for a clip of `duration_ms` whole milliseconds:
//   N = (1000x - 20) / 10   in integer arithmetic.
// One frame fewer than the usual floor((samples-window)/hop)+1 framing; the
// last window therefore always fits inside the clip.
// Throws DurationTooShort below one 20 ms window.
int64_t frame_count_ms(int64_t duration_ms, const FrontendConfig& cfg = {});

// Same formula with duration in seconds, rounded to whole milliseconds first.
int64_t frame_count(double duration_s, const FrontendConfig& cfg = {});

// STFT log-power spectrogram: row t covers samples [t*hop, t*hop + window),
// each row is log(|FFT|^2 + log_floor) over the first fft_bins bins.
// When cfg.normalize is set, each feature column is shifted and scaled to
// zero mean and unit variance over the utterance (columns with zero variance
// are left at zero after mean removal).
Spectrogram compute_spectrogram(const AudioClip& clip, const FrontendConfig& cfg = {});

// Flat binary spectrogram file: "CSPC", u32 version, u32 rows, u32 cols,
// then rows*cols row-major float32.
void write_spectrogram(const std::string& path, const Spectrogram& spec);
Spectrogram read_spectrogram(const std::string& path);

}  // namespace casr

#endif  // CASR_AUDIO_FRONTEND_H_

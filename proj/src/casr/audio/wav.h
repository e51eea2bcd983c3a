// casr/audio/wav.h

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

#ifndef CASR_AUDIO_WAV_H_
#define CASR_AUDIO_WAV_H_

#include <cstdint>
#include <string>
#include <vector>

namespace casr {

// Mono audio clip with samples in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 16000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  // Whole milliseconds of audio, floor. All framing arithmetic runs on this.
  int64_t duration_ms() const {
    return static_cast<int64_t>(samples.size()) * 1000 / sample_rate;
  }
};

// Reads a 16-bit little-endian mono PCM RIFF/WAVE file.
// Throws InvalidAudio on any other encoding and on non-finite samples.
AudioClip read_wav(const std::string& path);
AudioClip parse_wav(const std::string& bytes);

// Writes the clip as 16-bit mono PCM; samples are clamped to [-1, 1].
void write_wav(const std::string& path, const AudioClip& clip);

// Throws InvalidAudio unless every sample is finite and sample_rate > 0.
void check_clip(const AudioClip& clip);

}  // namespace casr

#endif  // CASR_AUDIO_WAV_H_

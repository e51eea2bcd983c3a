// casr/audio/wav.cc

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

#include "casr/audio/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "casr/util/error.h"
#include "casr/util/io.h"

namespace casr {

namespace {

uint32_t le32(const char* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

uint16_t le16(const char* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

}  // namespace

void check_clip(const AudioClip& clip) {
  if (clip.sample_rate <= 0) throw InvalidAudio("sample_rate must be positive");
  for (double s : clip.samples) {
    if (!std::isfinite(s)) throw InvalidAudio("non-finite sample value");
  }
}

AudioClip parse_wav(const std::string& b) {
  if (b.size() < 44 || b.compare(0, 4, "RIFF") != 0 || b.compare(8, 4, "WAVE") != 0) {
    throw InvalidAudio("not a RIFF/WAVE file");
  }
  size_t pos = 12;
  int sample_rate = 0;
  uint16_t channels = 0, bits = 0, format = 0;
  bool have_fmt = false;
  AudioClip clip;
  while (pos + 8 <= b.size()) {
    std::string id = b.substr(pos, 4);
    uint32_t sz = le32(b.data() + pos + 4);
    pos += 8;
    if (pos + sz > b.size()) throw InvalidAudio("truncated chunk: " + id);
    if (id == "fmt ") {
      if (sz < 16) throw InvalidAudio("short fmt chunk");
      format = le16(b.data() + pos);
      channels = le16(b.data() + pos + 2);
      sample_rate = static_cast<int>(le32(b.data() + pos + 4));
      bits = le16(b.data() + pos + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw InvalidAudio("data chunk before fmt chunk");
      if (format != 1) throw InvalidAudio("only PCM (format 1) is supported");
      if (channels != 1) throw InvalidAudio("only mono audio is supported");
      if (bits != 16) throw InvalidAudio("only 16-bit samples are supported");
      size_t n = sz / 2;
      clip.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s;
        std::memcpy(&s, b.data() + pos + 2 * i, 2);
        clip.samples[i] = s / 32768.0;
      }
      clip.sample_rate = sample_rate;
      return clip;
    }
    pos += sz + (sz & 1);  // chunks are word-aligned
  }
  throw InvalidAudio("no data chunk found");
}

AudioClip read_wav(const std::string& path) { return parse_wav(slurp_file(path)); }

void write_wav(const std::string& path, const AudioClip& clip) {
  check_clip(clip);
  const uint32_t n = static_cast<uint32_t>(clip.samples.size());
  const uint32_t data_bytes = n * 2;
  std::ostringstream os;
  os.write("RIFF", 4);
  write_u32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_u32(os, 16);
  uint16_t fmt = 1, channels = 1, bits = 16;
  os.write(reinterpret_cast<const char*>(&fmt), 2);
  os.write(reinterpret_cast<const char*>(&channels), 2);
  write_u32(os, static_cast<uint32_t>(clip.sample_rate));
  write_u32(os, static_cast<uint32_t>(clip.sample_rate) * 2);  // byte rate
  uint16_t block_align = 2;
  os.write(reinterpret_cast<const char*>(&block_align), 2);
  os.write(reinterpret_cast<const char*>(&bits), 2);
  os.write("data", 4);
  write_u32(os, data_bytes);
  for (uint32_t i = 0; i < n; ++i) {
    double s = std::clamp(clip.samples[i], -1.0, 1.0);
    auto q = static_cast<int16_t>(std::lrint(s * 32767.0));
    os.write(reinterpret_cast<const char*>(&q), 2);
  }
  spit_file(path, os.str());
}

}  // namespace casr

// casr/audio/frontend.cc

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

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "casr/util/error.h"
#include "casr/util/io.h"

namespace casr {

namespace {

constexpr char kSpecMagic[4] = {'C', 'S', 'P', 'C'};
constexpr uint32_t kSpecVersion = 1;

// FFTW plan creation is not thread safe; execution on caller-owned buffers is.
class FftPlanCache {
 public:
  fftw_plan get(int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    // FFTW_UNALIGNED lets one plan serve arbitrary caller buffers.
    std::vector<double> in(static_cast<size_t>(n));
    std::vector<fftw_complex> out(static_cast<size_t>(n / 2 + 1));
    fftw_plan p = fftw_plan_dft_r2c_1d(n, in.data(), out.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_[n] = p;
    return p;
  }

 private:
  std::mutex mu_;
  std::map<int, fftw_plan> plans_;
};

FftPlanCache& plan_cache() {
  static FftPlanCache cache;
  return cache;
}

void validate_config(const FrontendConfig& cfg) {
  if (!(cfg.window_ms > cfg.hop_ms && cfg.hop_ms > 0)) {
    throw Error("frontend config requires window_ms > hop_ms > 0");
  }
  if (cfg.fft_bins < 2) throw Error("fft_bins must be at least 2");
  if (!(cfg.log_floor > 0)) throw Error("log_floor must be positive");
}

}  // namespace

int64_t frame_count_ms(int64_t duration_ms, const FrontendConfig& cfg) {
  validate_config(cfg);
  if (duration_ms < cfg.window_ms) {
    throw DurationTooShort("clip of " + std::to_string(duration_ms) +
                           " ms is shorter than one " + std::to_string(cfg.window_ms) +
                           " ms window");
  }
  return (duration_ms - cfg.window_ms) / cfg.hop_ms;
}

int64_t frame_count(double duration_s, const FrontendConfig& cfg) {
  return frame_count_ms(std::llround(duration_s * 1000.0), cfg);
}

Spectrogram compute_spectrogram(const AudioClip& clip, const FrontendConfig& cfg) {
  validate_config(cfg);
  check_clip(clip);

  const int win = clip.sample_rate * cfg.window_ms / 1000;
  const int hop = clip.sample_rate * cfg.hop_ms / 1000;
  if (win < 2 * (cfg.fft_bins - 1)) {
    throw Error("window of " + std::to_string(win) + " samples cannot produce " +
                std::to_string(cfg.fft_bins) + " spectral bins");
  }
  const int64_t n_frames = frame_count_ms(clip.duration_ms(), cfg);

  std::vector<double> window(static_cast<size_t>(win), 1.0);
  if (cfg.window == WindowFn::kHann) {
    for (int i = 0; i < win; ++i) {
      window[static_cast<size_t>(i)] =
          0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / win));
    }
  }

  fftw_plan plan = plan_cache().get(win);
  std::vector<double> in(static_cast<size_t>(win));
  std::vector<fftw_complex> out(static_cast<size_t>(win / 2 + 1));

  Spectrogram spec;
  spec.frames = Matrix(n_frames, cfg.fft_bins);
  for (int64_t t = 0; t < n_frames; ++t) {
    const double* src = clip.samples.data() + t * hop;
    for (int i = 0; i < win; ++i) in[static_cast<size_t>(i)] = src[i] * window[static_cast<size_t>(i)];
    fftw_execute_dft_r2c(plan, in.data(), out.data());
    double* row = spec.frames.row(t);
    for (int k = 0; k < cfg.fft_bins; ++k) {
      const double re = out[static_cast<size_t>(k)][0];
      const double im = out[static_cast<size_t>(k)][1];
      row[k] = std::log(re * re + im * im + cfg.log_floor);
    }
  }

  if (cfg.normalize && n_frames > 0) {
    const int64_t n = n_frames;
    for (int64_t k = 0; k < cfg.fft_bins; ++k) {
      double mean = 0.0;
      for (int64_t t = 0; t < n; ++t) mean += spec.frames(t, k);
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (int64_t t = 0; t < n; ++t) {
        const double d = spec.frames(t, k) - mean;
        var += d * d;
      }
      var /= static_cast<double>(n);
      // A column that is constant up to summation dust must come out as
      // zeros, not have that dust amplified to unit variance.
      const bool constant = var <= 1e-20 * (1.0 + mean * mean);
      const double inv = constant ? 0.0 : 1.0 / std::sqrt(var);
      for (int64_t t = 0; t < n; ++t) {
        spec.frames(t, k) = constant ? 0.0 : (spec.frames(t, k) - mean) * inv;
      }
    }
  }
  return spec;
}

void write_spectrogram(const std::string& path, const Spectrogram& spec) {
  std::ostringstream os;
  os.write(kSpecMagic, 4);
  write_u32(os, kSpecVersion);
  write_u32(os, static_cast<uint32_t>(spec.frames.rows()));
  write_u32(os, static_cast<uint32_t>(spec.frames.cols()));
  write_f32_array(os, spec.frames.data(), spec.frames.size());
  spit_file(path, os.str());
}

Spectrogram read_spectrogram(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open spectrogram file: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kSpecMagic, 4)) {
    throw ParseError("bad spectrogram magic in " + path);
  }
  const uint32_t version = read_u32(is);
  if (version != kSpecVersion) {
    throw ParseError("unsupported spectrogram version " + std::to_string(version));
  }
  const uint32_t rows = read_u32(is);
  const uint32_t cols = read_u32(is);
  Spectrogram spec;
  spec.frames = Matrix(rows, cols);
  read_f32_array(is, spec.frames.data(), spec.frames.size());
  return spec;
}

}  // namespace casr

// casr/cascade/stats.h

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

#ifndef CASR_CASCADE_STATS_H_
#define CASR_CASCADE_STATS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace casr {

// Corpus-level transcript statistics. Counted characters are letters and the
// apostrophe; spaces, digits, and other punctuation are ignored, so
// avg_chars_per_second is a speaking-speed proxy rather than a byte rate.
struct SampleStats {
  double avg_words_per_sentence = 0.0;
  // Total counted characters / total duration.
  double avg_chars_per_second = 0.0;
  // Fraction of all counted characters, per character. Values sum to 1.
  std::map<char, double> per_character_rate;
  // Exact counts kept alongside the derived means.
  int64_t sample_count = 0;
  int64_t word_count = 0;
  int64_t char_count = 0;
  double total_duration_s = 0.0;
};

struct StatsSample {
  std::string transcript;
  double duration_s = 0.0;
};

// Throws ConfigError when samples is empty, a transcript is empty, or a
// duration is not positive.
SampleStats compute_sample_stats(const std::vector<StatsSample>& samples);

// (subset - full) / full. Throws ConfigError when full is zero.
double relative_difference(double subset, double full);

// Side-by-side comparison of a subset corpus against the full corpus.
struct StatsComparison {
  double words_per_sentence_rel = 0.0;
  double chars_per_second_rel = 0.0;
  // subset rate minus full rate, per character, over the union of characters.
  std::map<char, double> rate_difference;
};

StatsComparison compare_stats(const SampleStats& subset, const SampleStats& full);

}  // namespace casr

#endif  // CASR_CASCADE_STATS_H_

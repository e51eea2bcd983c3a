// casr/cascade/stats.cc

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

#include "casr/cascade/stats.h"

#include <cctype>

#include "casr/util/error.h"

namespace casr {

namespace {

bool counted_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalpha(u) != 0 || c == '\'';
}

}  // namespace

SampleStats compute_sample_stats(const std::vector<StatsSample>& samples) {
  if (samples.empty()) throw ConfigError("stats need at least one sample");

  SampleStats out;
  std::map<char, int64_t> char_counts;
  for (const auto& s : samples) {
    if (s.transcript.empty()) throw ConfigError("stats transcript is empty");
    if (s.duration_s <= 0.0) throw ConfigError("stats duration must be positive");
    out.total_duration_s += s.duration_s;

    bool in_word = false;
    for (char raw : s.transcript) {
      unsigned char u = static_cast<unsigned char>(raw);
      char c = static_cast<char>(std::tolower(u));
      if (std::isspace(u) != 0) {
        in_word = false;
      } else if (!in_word) {
        in_word = true;
        ++out.word_count;
      }
      if (counted_char(c)) {
        ++char_counts[c];
        ++out.char_count;
      }
    }
  }
  if (out.char_count == 0) throw ConfigError("stats corpus has no counted characters");
  out.sample_count = static_cast<int64_t>(samples.size());
  out.avg_words_per_sentence =
      static_cast<double>(out.word_count) / static_cast<double>(out.sample_count);
  out.avg_chars_per_second = static_cast<double>(out.char_count) / out.total_duration_s;
  for (const auto& [c, n] : char_counts)
    out.per_character_rate[c] = static_cast<double>(n) / static_cast<double>(out.char_count);
  return out;
}

double relative_difference(double subset, double full) {
  if (full == 0.0) throw ConfigError("relative difference against zero");
  return (subset - full) / full;
}

StatsComparison compare_stats(const SampleStats& subset, const SampleStats& full) {
  StatsComparison out;
  out.words_per_sentence_rel =
      relative_difference(subset.avg_words_per_sentence, full.avg_words_per_sentence);
  out.chars_per_second_rel =
      relative_difference(subset.avg_chars_per_second, full.avg_chars_per_second);
  for (const auto& [c, r] : full.per_character_rate) out.rate_difference[c] = -r;
  for (const auto& [c, r] : subset.per_character_rate) out.rate_difference[c] += r;
  return out;
}

}  // namespace casr

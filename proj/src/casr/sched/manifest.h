// casr/sched/manifest.h

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

#ifndef CASR_SCHED_MANIFEST_H_
#define CASR_SCHED_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

namespace casr {

struct ManifestEntry {
  std::string id;
  std::string audio;  // wav path, relative paths resolved by the caller
  std::string text;
  double duration_s = 0.0;
};

// Utterance list with clips over the duration cap already dropped.
struct Manifest {
  std::vector<ManifestEntry> entries;
  int64_t excluded_count = 0;

  size_t size() const { return entries.size(); }
  double exclusion_fraction() const {
    int64_t total = static_cast<int64_t>(entries.size()) + excluded_count;
    return total == 0 ? 0.0 : static_cast<double>(excluded_count) / static_cast<double>(total);
  }
};

// One JSON object per line: {"id", "audio", "text", "duration"}. Entries
// longer than max_duration_s are excluded and counted. Bad JSON, missing
// fields, non-positive durations, and duplicate ids all raise ParseError
// with the 1-based line number.
Manifest parse_manifest(const std::string& content, double max_duration_s = 21.0);
Manifest load_manifest(const std::string& path, double max_duration_s = 21.0);
void save_manifest(const Manifest& manifest, const std::string& path);

}  // namespace casr

#endif  // CASR_SCHED_MANIFEST_H_

// casr/sched/manifest.cc

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

#include "casr/sched/manifest.h"

#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "casr/util/error.h"
#include "casr/util/io.h"

namespace casr {

Manifest parse_manifest(const std::string& content, double max_duration_s) {
  Manifest manifest;
  std::unordered_set<std::string> seen;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("manifest line is not a JSON object", lineno);
    for (const char* field : {"id", "audio", "text", "duration"})
      if (!j.contains(field))
        throw ParseError(std::string("manifest record lacks '") + field + "'", lineno);
    ManifestEntry e;
    if (!j["id"].is_string() || !j["audio"].is_string() || !j["text"].is_string() ||
        !j["duration"].is_number())
      throw ParseError("manifest field has the wrong type", lineno);
    e.id = j["id"].get<std::string>();
    e.audio = j["audio"].get<std::string>();
    e.text = j["text"].get<std::string>();
    e.duration_s = j["duration"].get<double>();
    if (e.duration_s <= 0.0) throw ParseError("duration must be positive", lineno);
    if (!seen.insert(e.id).second) throw ParseError("duplicate id '" + e.id + "'", lineno);
    if (e.duration_s > max_duration_s) {
      ++manifest.excluded_count;
      continue;
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

Manifest load_manifest(const std::string& path, double max_duration_s) {
  return parse_manifest(slurp_file(path), max_duration_s);
}

void save_manifest(const Manifest& manifest, const std::string& path) {
  std::ostringstream out;
  for (const auto& e : manifest.entries) {
    nlohmann::json j{
        {"id", e.id}, {"audio", e.audio}, {"text", e.text}, {"duration", e.duration_s}};
    out << j.dump() << "\n";
  }
  spit_file(path, out.str());
}

}  // namespace casr

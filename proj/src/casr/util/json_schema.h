// casr/util/json_schema.h

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

#ifndef CASR_UTIL_JSON_SCHEMA_H_
#define CASR_UTIL_JSON_SCHEMA_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace casr {

// Structural validator for the subset of JSON Schema the shipped schema
// files use: "type", "properties", "required", "items", "enum". Returns a
// list of human-readable violations; empty means the instance validates.
std::vector<std::string> validate_json(const nlohmann::json& instance,
                                       const nlohmann::json& schema,
                                       const std::string& path = "$");

}  // namespace casr

#endif  // CASR_UTIL_JSON_SCHEMA_H_

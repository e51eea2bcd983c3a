// casr/util/json_schema.cc

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

#include "casr/util/json_schema.h"

namespace casr {

using nlohmann::json;

static bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

std::vector<std::string> validate_json(const json& instance, const json& schema,
                                       const std::string& path) {
  std::vector<std::string> errs;
  if (!schema.is_object()) return errs;

  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(instance, t.get<std::string>());
    } else if (t.is_array()) {
      for (const auto& tt : t) ok = ok || type_matches(instance, tt.get<std::string>());
    }
    if (!ok) {
      errs.push_back(path + ": expected type " + t.dump() + ", got " +
                     std::string(instance.type_name()));
      return errs;  // further checks would only cascade
    }
  }

  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& e : schema["enum"]) ok = ok || (e == instance);
    if (!ok) errs.push_back(path + ": value " + instance.dump() + " not in enum");
  }

  if (instance.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema["required"]) {
        if (!instance.contains(k.get<std::string>())) {
          errs.push_back(path + ": missing required key \"" + k.get<std::string>() + "\"");
        }
      }
    }
    if (schema.contains("properties")) {
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
        if (instance.contains(it.key())) {
          auto sub = validate_json(instance[it.key()], it.value(), path + "." + it.key());
          errs.insert(errs.end(), sub.begin(), sub.end());
        }
      }
    }
  }

  if (instance.is_array() && schema.contains("items")) {
    for (size_t i = 0; i < instance.size(); ++i) {
      auto sub = validate_json(instance[i], schema["items"],
                               path + "[" + std::to_string(i) + "]");
      errs.insert(errs.end(), sub.begin(), sub.end());
    }
  }

  return errs;
}

}  // namespace casr

// Copyright 2026 The Simple Surveys Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration for the simple_survey tool: a flat JSON object whose keys
// mirror the command-line flags. Values come from built-in defaults, then an
// optional --config file, then explicit flags.

#ifndef SIMPLESURVEY_TOOLS_RUN_CONFIG_H_
#define SIMPLESURVEY_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace simplesurvey::cli {

enum class ValueType { kString, kInt, kUint, kDouble, kIntList, kDoubleList };

struct KeySpec {
  std::string name;  // JSON key; the flag is --name with '_' shown as '-'
  ValueType type;
  nlohmann::json default_value;  // null when there is no default
  std::string help;
  std::vector<std::string> commands;  // empty means every command
};

// Every recognized key.
const std::vector<KeySpec>& Keys();

bool KeyApplies(const KeySpec& key, std::string_view command);

// Parses a flag's text into the key's JSON type. Lists are comma separated.
// Throws simplesurvey::Error(kInvalidArgument) on bad text.
nlohmann::json ParseValue(const KeySpec& key, const std::string& text);

// Checks that a value from a config file has the key's type.
void CheckValue(const KeySpec& key, const nlohmann::json& value);

// FNV-1a over the canonical dump of `config` with run-only keys (threads,
// out, config) removed, as 16 hex digits.
std::string ConfigHash(const nlohmann::json& config);

}  // namespace simplesurvey::cli

#endif  // SIMPLESURVEY_TOOLS_RUN_CONFIG_H_

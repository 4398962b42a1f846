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

#include "run_config.h"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "simplesurvey/error.h"

namespace simplesurvey::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kLoaders{"fit", "cv", "eval", "sweep", "embed", "summarize"};
const std::vector<std::string> kFitters{"fit", "cv", "eval", "sweep", "embed"};
const std::vector<std::string> kPairwise{"fit", "eval", "sweep"};

[[noreturn]] void Bad(const KeySpec& key, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "--" + key.name + ": " + what);
}

template <typename T>
T ParseNumber(const KeySpec& key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) Bad(key, "cannot parse '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> SplitCommas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.push_back(text.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

const std::vector<KeySpec>& Keys() {
  static const auto* keys = new std::vector<KeySpec>{
      {"seed", ValueType::kUint, 0, "random seed", {}},
      {"threads", ValueType::kInt, 0, "worker threads; 0 uses every core, 1 runs serially", {}},
      {"out", ValueType::kString, ".", "output directory", {}},
      {"scale", ValueType::kString, nullptr, "survey scale: r2, r5, r100 or pc", {}},
      {"ratings", ValueType::kString, "", "ratings CSV", kLoaders},
      {"comparisons", ValueType::kString, "", "comparisons CSV", kLoaders},
      {"heldout", ValueType::kUint, 20,
       "held-out comparisons per respondent (pc files: the last ones in file order)",
       {"simulate", "fit", "cv", "eval", "sweep", "embed", "summarize"}},
      {"k", ValueType::kInt, 3, "factorization rank", kFitters},
      {"gamma", ValueType::kDouble, 1.0, "regularization weight", kFitters},
      {"max_sweeps", ValueType::kInt, 500, "ALS sweep limit", kFitters},
      {"rel_tol", ValueType::kDouble, 1e-6, "relative objective decrease to stop", kFitters},
      {"epochs", ValueType::kInt, 200, "pc model epochs", kPairwise},
      {"step_size", ValueType::kDouble, 0.05, "pc model base step size", kPairwise},
      {"batch_size", ValueType::kUint, 32, "pc model mini-batch size", kPairwise},
      {"sizes", ValueType::kIntList, json::array({8, 16, 24, 32, 40, 48, 56, 64, 72}),
       "training queries per respondent, comma separated", {"sweep"}},
      {"draws", ValueType::kInt, 100, "subsamples per size", {"sweep"}},
      {"mode", ValueType::kString, "individual", "individual or aggregate", {"sweep"}},
      {"k_grid", ValueType::kIntList, json::array({1, 2, 3, 4, 5, 6, 7, 8}), "ranks to try",
       {"cv"}},
      {"gamma_grid", ValueType::kDoubleList, json::array({0.0, 0.1, 1.0, 10.0, 100.0}),
       "penalties to try", {"cv"}},
      {"repeats", ValueType::kInt, 10, "random holdout repeats", {"cv"}},
      {"holdout_fraction", ValueType::kDouble, 0.2, "share of entries held out", {"cv"}},
      {"model", ValueType::kString, "", "model JSON from `fit`", {"eval", "embed"}},
      {"m", ValueType::kUint, 50, "respondents", {"simulate"}},
      {"n", ValueType::kUint, 100, "items", {"simulate"}},
      {"rank", ValueType::kInt, 3, "true rank of the simulated world", {"simulate"}},
      {"noise", ValueType::kDouble, 0.5, "utility noise standard deviation", {"simulate"}},
      {"per_respondent", ValueType::kUint, 80,
       "ratings (or training comparisons for pc) per respondent", {"simulate"}},
      {"block_size", ValueType::kUint, 8, "queries per timing block", {"summarize"}},
  };
  return *keys;
}

bool KeyApplies(const KeySpec& key, std::string_view command) {
  return key.commands.empty() ||
         std::find(key.commands.begin(), key.commands.end(), command) != key.commands.end();
}

json ParseValue(const KeySpec& key, const std::string& text) {
  switch (key.type) {
    case ValueType::kString:
      return text;
    case ValueType::kInt:
      return ParseNumber<long long>(key, text);
    case ValueType::kUint:
      return ParseNumber<unsigned long long>(key, text);
    case ValueType::kDouble:
      return ParseNumber<double>(key, text);
    case ValueType::kIntList: {
      json list = json::array();
      for (auto part : SplitCommas(text)) list.push_back(ParseNumber<long long>(key, part));
      return list;
    }
    case ValueType::kDoubleList: {
      json list = json::array();
      for (auto part : SplitCommas(text)) list.push_back(ParseNumber<double>(key, part));
      return list;
    }
  }
  Bad(key, "unknown type");
}

void CheckValue(const KeySpec& key, const json& value) {
  auto is_int = [](const json& v) { return v.is_number_integer(); };
  bool ok = false;
  switch (key.type) {
    case ValueType::kString: ok = value.is_string(); break;
    case ValueType::kInt: ok = is_int(value); break;
    case ValueType::kUint: ok = value.is_number_unsigned(); break;
    case ValueType::kDouble: ok = value.is_number(); break;
    case ValueType::kIntList:
      ok = value.is_array() && std::all_of(value.begin(), value.end(), is_int);
      break;
    case ValueType::kDoubleList:
      ok = value.is_array() &&
           std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_number(); });
      break;
  }
  if (!ok) Bad(key, "config file value has the wrong type: " + value.dump());
}

std::string ConfigHash(const json& config) {
  json hashed = config;
  for (const char* key : {"threads", "out", "config"}) hashed.erase(key);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : hashed.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

}  // namespace simplesurvey::cli

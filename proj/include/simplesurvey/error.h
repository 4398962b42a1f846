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

#ifndef SIMPLESURVEY_ERROR_H_
#define SIMPLESURVEY_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace simplesurvey {

enum class ErrorCode {
  kIo,
  kMalformedRow,
  kDuplicateEntry,
  kOutOfRange,
  kDuplicatePair,
  kUnknownId,
  kEmptyInput,
  kInvalidArgument,
  kDimensionMismatch,
  kNumerical,
};

// Stable lowercase token used in machine-readable error lines.
std::string_view ErrorCodeName(ErrorCode code);

// Every library failure is reported as an Error; code() lets callers (and the
// CLI) distinguish the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simplesurvey

#endif  // SIMPLESURVEY_ERROR_H_

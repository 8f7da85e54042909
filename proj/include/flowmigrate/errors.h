// Copyright 2026 The flowmigrate Authors
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

#ifndef FLOWMIGRATE_ERRORS_H_
#define FLOWMIGRATE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowmigrate {

enum class ErrorCode {
  kParse,
  kInvariant,
  kInsufficientSlots,
  kDuplicateRoot,
  kUnknownRoot,
  kCommitWithoutPrepare,
  kStoreUnavailable,
  kWaveConflict,
  kUnknownInstance,
  kMissingMarker,
  kNoSinkOutputAfterRequest,
  kNeverStabilized,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Configuration problem that names the offending field (and line, when the
// input was text).
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::string field, const std::string& message)
      : Error(code, message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_ERRORS_H_

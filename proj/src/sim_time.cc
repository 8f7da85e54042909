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

#include "flowmigrate/sim_time.h"

#include <cctype>
#include <charconv>
#include <cmath>

#include "flowmigrate/errors.h"

namespace flowmigrate {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kInvariant: return "invariant-violation";
    case ErrorCode::kInsufficientSlots: return "insufficient-slots";
    case ErrorCode::kDuplicateRoot: return "duplicate-root";
    case ErrorCode::kUnknownRoot: return "unknown-root";
    case ErrorCode::kCommitWithoutPrepare: return "commit-without-prepare";
    case ErrorCode::kStoreUnavailable: return "store-unavailable";
    case ErrorCode::kWaveConflict: return "wave-conflict";
    case ErrorCode::kUnknownInstance: return "unknown-instance";
    case ErrorCode::kMissingMarker: return "missing-marker";
    case ErrorCode::kNoSinkOutputAfterRequest:
      return "no-sink-output-after-request";
    case ErrorCode::kNeverStabilized: return "never-stabilized";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

Duration ParseDuration(std::string_view text, std::string_view field) {
  auto fail = [&] {
    return ConfigError(ErrorCode::kParse, std::string(field),
                       "field '" + std::string(field) +
                           "': malformed duration '" + std::string(text) +
                           "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  if (text.empty()) throw fail();

  std::size_t split = 0;
  while (split < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[split])) ||
          text[split] == '.')) {
    ++split;
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + split, value);
  if (ec != std::errc() || ptr != text.data() + split) throw fail();

  std::string_view unit = text.substr(split);
  double scale;
  if (unit.empty() || unit == "ms") {
    scale = 1.0;
  } else if (unit == "s") {
    scale = 1000.0;
  } else if (unit == "min") {
    scale = 60000.0;
  } else {
    throw fail();
  }
  return Duration(static_cast<std::int64_t>(std::llround(value * scale)));
}

std::string FormatDuration(Duration d) {
  return std::to_string(d.count()) + "ms";
}

}  // namespace flowmigrate

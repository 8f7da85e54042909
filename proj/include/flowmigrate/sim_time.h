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

#ifndef FLOWMIGRATE_SIM_TIME_H_
#define FLOWMIGRATE_SIM_TIME_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace flowmigrate {

// Simulated time has millisecond resolution. Both points in time (measured
// from scenario start) and durations use the same representation.
using Duration = std::chrono::milliseconds;
using SimTime = std::chrono::milliseconds;

inline constexpr SimTime kTimeZero{0};

// Parses "30s", "100ms", "7.26s", "12min" or a bare number of milliseconds.
// Throws ConfigError(kParse) naming `field` on malformed input.
Duration ParseDuration(std::string_view text, std::string_view field);

// Renders a duration the way ParseDuration accepts it ("7260ms").
std::string FormatDuration(Duration d);

inline double ToSeconds(Duration d) {
  return static_cast<double>(d.count()) / 1000.0;
}

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_SIM_TIME_H_

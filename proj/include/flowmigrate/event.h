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

#ifndef FLOWMIGRATE_EVENT_H_
#define FLOWMIGRATE_EVENT_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "flowmigrate/sim_time.h"

namespace flowmigrate {

using EventId = std::uint64_t;
using RootId = std::uint64_t;

enum class EventKind : std::uint8_t {
  kData = 0,
  kPrepare = 1,
  kCommit = 2,
  kRollback = 3,
  kInit = 4,
};

std::string_view EventKindName(EventKind kind);

struct EventEnvelope {
  EventId event_id = 0;
  // Causal root. For control events this is the wave-round root.
  RootId root_id = 0;
  // Source sequence number for DATA; checkpoint id for control events.
  std::uint64_t root_seq_no = 0;
  EventKind kind = EventKind::kData;
  std::int32_t epoch = 0;
  bool replayed = false;
  SimTime emit_ts{0};
  // Replay attempt of the root; acks from an older attempt are stale.
  std::uint32_t attempt = 0;

  bool is_control() const { return kind != EventKind::kData; }
  bool operator==(const EventEnvelope&) const = default;
};

// Fixed-width little-endian encoding used inside pending-event blobs.
inline constexpr std::size_t kEncodedEventSize = 40;

void AppendEvent(std::vector<std::uint8_t>& out, const EventEnvelope& e);
std::vector<std::uint8_t> EncodeEvents(std::span<const EventEnvelope> events);
// Throws Error(kInternal) on a truncated or malformed blob.
std::vector<EventEnvelope> DecodeEvents(std::span<const std::uint8_t> blob);

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_EVENT_H_

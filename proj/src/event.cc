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

#include "flowmigrate/event.h"

#include "flowmigrate/bytes.h"

namespace flowmigrate {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kData: return "DATA";
    case EventKind::kPrepare: return "PREPARE";
    case EventKind::kCommit: return "COMMIT";
    case EventKind::kRollback: return "ROLLBACK";
    case EventKind::kInit: return "INIT";
  }
  return "?";
}

// Layout (40 bytes): event_id u64 | root_id u64 | root_seq_no u64 |
// emit_ts_ms i64 | attempt u32 | epoch i16 | kind u8 | replayed u8.
void AppendEvent(std::vector<std::uint8_t>& out, const EventEnvelope& e) {
  ByteWriter w(out);
  w.Put<std::uint64_t>(e.event_id);
  w.Put<std::uint64_t>(e.root_id);
  w.Put<std::uint64_t>(e.root_seq_no);
  w.Put<std::int64_t>(e.emit_ts.count());
  w.Put<std::uint32_t>(e.attempt);
  w.Put<std::int16_t>(static_cast<std::int16_t>(e.epoch));
  w.Put<std::uint8_t>(static_cast<std::uint8_t>(e.kind));
  w.Put<std::uint8_t>(e.replayed ? 1 : 0);
}

std::vector<std::uint8_t> EncodeEvents(std::span<const EventEnvelope> events) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + events.size() * kEncodedEventSize);
  ByteWriter(out).Put<std::uint32_t>(static_cast<std::uint32_t>(events.size()));
  for (const EventEnvelope& e : events) AppendEvent(out, e);
  return out;
}

std::vector<EventEnvelope> DecodeEvents(std::span<const std::uint8_t> blob) {
  std::vector<EventEnvelope> events;
  if (blob.empty()) return events;
  ByteReader r(blob);
  auto count = r.Get<std::uint32_t>();
  if (r.remaining() != count * kEncodedEventSize) {
    throw Error(ErrorCode::kInternal, "pending-event blob has wrong size");
  }
  events.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    EventEnvelope e;
    e.event_id = r.Get<std::uint64_t>();
    e.root_id = r.Get<std::uint64_t>();
    e.root_seq_no = r.Get<std::uint64_t>();
    e.emit_ts = SimTime(r.Get<std::int64_t>());
    e.attempt = r.Get<std::uint32_t>();
    e.epoch = r.Get<std::int16_t>();
    auto kind = r.Get<std::uint8_t>();
    if (kind > static_cast<std::uint8_t>(EventKind::kInit)) {
      throw Error(ErrorCode::kInternal, "bad event kind in blob");
    }
    e.kind = static_cast<EventKind>(kind);
    e.replayed = r.Get<std::uint8_t>() != 0;
    events.push_back(e);
  }
  return events;
}

}  // namespace flowmigrate

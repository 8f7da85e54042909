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

#include "flowmigrate/acker.h"

#include <algorithm>
#include <string>
#include <tuple>

#include "flowmigrate/errors.h"

namespace flowmigrate {

namespace {
std::string Hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  bool started = false;
  for (int shift = 60; shift >= 0; shift -= 4) {
    int d = static_cast<int>((v >> shift) & 0xf);
    if (d || started || shift == 0) {
      out.push_back(kDigits[d]);
      started = true;
    }
  }
  return out;
}
}  // namespace

const AckerEntry& Acker::RegisterRoot(RootId root_id, SimTime now) {
  auto [it, inserted] = entries_.try_emplace(root_id);
  if (!inserted) {
    throw Error(ErrorCode::kDuplicateRoot,
                "root " + Hex(root_id) + " already registered");
  }
  it->second.entry = AckerEntry{root_id, root_id, now, false, 0};
  it->second.order = next_order_++;
  return it->second.entry;
}

Acker::Slot& Acker::Lookup(RootId root_id) {
  auto it = entries_.find(root_id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kUnknownRoot, "root " + Hex(root_id) + " unknown");
  }
  if (it->second.entry.completed) {
    throw Error(ErrorCode::kInvariant,
                "root " + Hex(root_id) + " already completed");
  }
  return it->second;
}

std::uint64_t Acker::AnchorEmit(RootId root_id, EventId child) {
  AckerEntry& e = Lookup(root_id).entry;
  e.xor_hash ^= child;
  return e.xor_hash;
}

std::uint64_t Acker::AckEvent(RootId root_id, EventId event) {
  AckerEntry& e = Lookup(root_id).entry;
  e.xor_hash ^= event;
  if (e.xor_hash == 0) e.completed = true;
  return e.xor_hash;
}

std::vector<RootId> Acker::SweepTimeouts(SimTime now, Duration timeout) {
  std::vector<std::tuple<SimTime, std::uint64_t, RootId>> expired;
  for (const auto& [id, slot] : entries_) {
    if (!slot.entry.completed && now - slot.entry.register_ts >= timeout) {
      expired.emplace_back(slot.entry.register_ts, slot.order, id);
    }
  }
  std::sort(expired.begin(), expired.end());
  std::vector<RootId> out;
  out.reserve(expired.size());
  for (const auto& [ts, order, id] : expired) {
    Slot& slot = entries_.at(id);
    slot.entry.xor_hash = id;
    slot.entry.register_ts = now;
    ++slot.entry.attempt;
    slot.order = next_order_++;
    out.push_back(id);
  }
  return out;
}

void Acker::Discard(RootId root_id) { entries_.erase(root_id); }

const AckerEntry* Acker::Find(RootId root_id) const {
  auto it = entries_.find(root_id);
  return it == entries_.end() ? nullptr : &it->second.entry;
}

}  // namespace flowmigrate

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

#ifndef FLOWMIGRATE_ACKER_H_
#define FLOWMIGRATE_ACKER_H_

#include <cstdint>
#include <map>
#include <vector>

#include "flowmigrate/event.h"
#include "flowmigrate/sim_time.h"

namespace flowmigrate {

// Causal-tree tracking for one root. Every event id in the tree is XORed
// into `xor_hash` twice, once when anchored and once when acked, so the
// hash returns to zero exactly when the whole tree has been acked.
struct AckerEntry {
  RootId root_id = 0;
  std::uint64_t xor_hash = 0;
  SimTime register_ts{0};
  bool completed = false;
  std::uint32_t attempt = 0;
};

class Acker {
 public:
  // The root counts as anchored once: the new entry's hash is root_id.
  // Throws kDuplicateRoot if root_id is already tracked.
  const AckerEntry& RegisterRoot(RootId root_id, SimTime now);

  // Both throw kUnknownRoot for an untracked root and kInvariant for a
  // completed one.
  std::uint64_t AnchorEmit(RootId root_id, EventId child);
  std::uint64_t AckEvent(RootId root_id, EventId event);

  // Roots registered at least `timeout` ago that have not completed, oldest
  // registration first. Each returned root is re-registered at `now` with a
  // fresh hash and its attempt number bumped, ready for replay.
  std::vector<RootId> SweepTimeouts(SimTime now, Duration timeout);

  // Drops tracking for a root (completed roots are discarded by the owner
  // once it has observed completion).
  void Discard(RootId root_id);

  const AckerEntry* Find(RootId root_id) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Slot {
    AckerEntry entry;
    std::uint64_t order = 0;  // registration sequence, for stable sweeps
  };

  Slot& Lookup(RootId root_id);

  std::map<RootId, Slot> entries_;
  std::uint64_t next_order_ = 0;
};

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_ACKER_H_

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

// Checkpoint store with prepared/committed records.
//
// FILE_BACKED layout: one file per (instanceId, checkpointId) named
// "<instanceId>@<checkpointId>.ckpt" (instance id percent-encoded outside
// [A-Za-z0-9._-]). All integers little-endian:
//
//   magic        4 bytes  "FMCK"
//   header_len   u32      byte length of the header that follows
//   header:
//     version      u16    1
//     phase        u8     0 = PREPARED, 1 = COMMITTED
//     has_pending  u8     1 when a pending-event blob is present
//     checkpoint   u64
//     write_ts_ms  i64
//     id_len       u32
//     instance_id  id_len bytes (UTF-8)
//   user_len     u32
//   user_state   user_len bytes
//   pending_len  u32      0 when has_pending == 0
//   pending      pending_len bytes
//
// Files are written to a temporary name and renamed into place.

#ifndef FLOWMIGRATE_STATE_STORE_H_
#define FLOWMIGRATE_STATE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowmigrate/sim_time.h"

namespace flowmigrate {

using Blob = std::vector<std::uint8_t>;

enum class CheckpointPhase : std::uint8_t { kPrepared = 0, kCommitted = 1 };

struct CheckpointRecord {
  std::string instance_id;
  std::uint64_t checkpoint_id = 0;
  Blob user_state;
  std::optional<Blob> pending_events;
  CheckpointPhase phase = CheckpointPhase::kPrepared;
  SimTime write_ts{0};

  std::size_t PayloadBytes() const {
    return user_state.size() + (pending_events ? pending_events->size() : 0);
  }
  bool operator==(const CheckpointRecord&) const = default;
};

Blob EncodeRecord(const CheckpointRecord& record);
// Throws Error(kStoreUnavailable) on a corrupt image.
CheckpointRecord DecodeRecord(std::span<const std::uint8_t> bytes);

enum class StoreBackend { kInMemory, kFileBacked };

class StateStore {
 public:
  static StateStore InMemory();
  // Creates `dir` if needed and loads any records already present there.
  static StateStore FileBacked(const std::filesystem::path& dir);

  StateStore(StateStore&&) = default;
  StateStore& operator=(StateStore&&) = default;

  // Stores the record as PREPARED, replacing an earlier PREPARED record for
  // the same key. Committed records are immutable (kInvariant).
  void StorePrepare(CheckpointRecord record);
  // Flips the PREPARED record to COMMITTED; kCommitWithoutPrepare if there
  // is none.
  const CheckpointRecord& StoreCommit(const std::string& instance_id,
                                      std::uint64_t checkpoint_id,
                                      SimTime now);
  // COMMITTED record with the highest checkpoint id, if any.
  std::optional<CheckpointRecord> GetLatestCommitted(
      const std::string& instance_id) const;
  std::optional<CheckpointRecord> Get(const std::string& instance_id,
                                      std::uint64_t checkpoint_id) const;

  StoreBackend backend() const { return backend_; }
  std::size_t size() const;

 private:
  using Key = std::pair<std::string, std::uint64_t>;

  StateStore(StoreBackend backend, std::filesystem::path dir);
  void Persist(const CheckpointRecord& record);
  std::filesystem::path PathFor(const Key& key) const;

  StoreBackend backend_;
  std::filesystem::path dir_;
  std::map<Key, CheckpointRecord> records_;
  // Serializes file writes if the store is shared with real-time helpers.
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_STATE_STORE_H_

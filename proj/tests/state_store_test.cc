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

#include <gtest/gtest.h>

#include <filesystem>

#include "flowmigrate/errors.h"
#include "flowmigrate/event.h"
#include "flowmigrate/state_store.h"

namespace flowmigrate {
namespace {

namespace fs = std::filesystem;

CheckpointRecord Record(const std::string& inst, std::uint64_t id) {
  CheckpointRecord r;
  r.instance_id = inst;
  r.checkpoint_id = id;
  r.user_state = {1, 2, 3, static_cast<std::uint8_t>(id)};
  return r;
}

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("flowmigrate_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(StateStoreTest, PrepareCommitLatest) {
  StateStore store = StateStore::InMemory();
  store.StorePrepare(Record("T1#0", 1));
  EXPECT_FALSE(store.GetLatestCommitted("T1#0").has_value());
  store.StoreCommit("T1#0", 1, SimTime(50));
  auto latest = store.GetLatestCommitted("T1#0");
  ASSERT_TRUE(latest.has_value());
  EXPECT_EQ(latest->phase, CheckpointPhase::kCommitted);
  EXPECT_EQ(latest->user_state, Record("T1#0", 1).user_state);
  EXPECT_EQ(latest->write_ts, SimTime(50));
}

TEST(StateStoreTest, LatestIsHighestCommittedId) {
  StateStore store = StateStore::InMemory();
  for (std::uint64_t id : {3u, 7u}) {
    store.StorePrepare(Record("T1#0", id));
    store.StoreCommit("T1#0", id, SimTime(0));
  }
  store.StorePrepare(Record("T1#0", 9));
  EXPECT_EQ(store.GetLatestCommitted("T1#0")->checkpoint_id, 7u);
}

TEST(StateStoreTest, CommitWithoutPrepare) {
  StateStore store = StateStore::InMemory();
  try {
    store.StoreCommit("T1#0", 1, SimTime(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCommitWithoutPrepare);
  }
}

TEST(StateStoreTest, RecordCodecRoundTrip) {
  CheckpointRecord r = Record("grid/N#3", 12);
  EventEnvelope e{.event_id = 77, .root_id = 5, .root_seq_no = 9,
                  .kind = EventKind::kData, .epoch = 1, .replayed = true,
                  .emit_ts = SimTime(1234), .attempt = 2};
  std::vector<EventEnvelope> events{e, e};
  r.pending_events = EncodeEvents(events);
  r.phase = CheckpointPhase::kCommitted;
  r.write_ts = SimTime(999);
  EXPECT_EQ(DecodeRecord(EncodeRecord(r)), r);
  EXPECT_EQ(DecodeEvents(*r.pending_events), events);
  EXPECT_EQ(r.pending_events->size(), 4 + 2 * kEncodedEventSize);
}

TEST(StateStoreTest, TruncatedRecordIsRejected) {
  Blob bytes = EncodeRecord(Record("T1#0", 1));
  bytes.resize(bytes.size() - 2);
  EXPECT_THROW(DecodeRecord(bytes), Error);
}

TEST(StateStoreTest, FileBackedReloads) {
  fs::path dir = TempDir("store_reload");
  {
    StateStore store = StateStore::FileBacked(dir);
    store.StorePrepare(Record("T2#1", 4));
    store.StoreCommit("T2#1", 4, SimTime(10));
    EXPECT_EQ(store.backend(), StoreBackend::kFileBacked);
  }
  StateStore reopened = StateStore::FileBacked(dir);
  auto latest = reopened.GetLatestCommitted("T2#1");
  ASSERT_TRUE(latest.has_value());
  EXPECT_EQ(latest->checkpoint_id, 4u);
  EXPECT_EQ(latest->user_state, Record("T2#1", 4).user_state);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace flowmigrate

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

#include "flowmigrate/state_store.h"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "flowmigrate/bytes.h"
#include "flowmigrate/errors.h"

namespace flowmigrate {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'F', 'M', 'C', 'K'};
constexpr std::uint16_t kVersion = 1;

std::string PercentEncode(const std::string& s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

}  // namespace

Blob EncodeRecord(const CheckpointRecord& record) {
  Blob header;
  ByteWriter h(header);
  h.Put<std::uint16_t>(kVersion);
  h.Put<std::uint8_t>(static_cast<std::uint8_t>(record.phase));
  h.Put<std::uint8_t>(record.pending_events ? 1 : 0);
  h.Put<std::uint64_t>(record.checkpoint_id);
  h.Put<std::int64_t>(record.write_ts.count());
  h.Put<std::uint32_t>(static_cast<std::uint32_t>(record.instance_id.size()));
  h.PutString(record.instance_id);

  Blob out;
  ByteWriter w(out);
  w.PutString(std::string_view(kMagic, 4));
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(header.size()));
  w.PutBytes(header);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(record.user_state.size()));
  w.PutBytes(record.user_state);
  const Blob empty;
  const Blob& pending = record.pending_events ? *record.pending_events : empty;
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(pending.size()));
  w.PutBytes(pending);
  return out;
}

CheckpointRecord DecodeRecord(std::span<const std::uint8_t> bytes) {
  try {
    ByteReader r(bytes);
    if (r.GetString(4) != std::string_view(kMagic, 4)) {
      throw Error(ErrorCode::kStoreUnavailable, "bad checkpoint magic");
    }
    auto header_len = r.Get<std::uint32_t>();
    const Blob header = r.GetBytes(header_len);
    ByteReader h(header);
    if (h.Get<std::uint16_t>() != kVersion) {
      throw Error(ErrorCode::kStoreUnavailable, "unsupported checkpoint version");
    }
    CheckpointRecord rec;
    auto phase = h.Get<std::uint8_t>();
    if (phase > 1) throw Error(ErrorCode::kStoreUnavailable, "bad phase");
    rec.phase = static_cast<CheckpointPhase>(phase);
    bool has_pending = h.Get<std::uint8_t>() != 0;
    rec.checkpoint_id = h.Get<std::uint64_t>();
    rec.write_ts = SimTime(h.Get<std::int64_t>());
    rec.instance_id = h.GetString(h.Get<std::uint32_t>());
    rec.user_state = r.GetBytes(r.Get<std::uint32_t>());
    Blob pending = r.GetBytes(r.Get<std::uint32_t>());
    if (has_pending) rec.pending_events = std::move(pending);
    return rec;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kStoreUnavailable) throw;
    throw Error(ErrorCode::kStoreUnavailable,
                std::string("corrupt checkpoint record: ") + e.what());
  }
}

StateStore::StateStore(StoreBackend backend, fs::path dir)
    : backend_(backend), dir_(std::move(dir)) {}

StateStore StateStore::InMemory() {
  return StateStore(StoreBackend::kInMemory, {});
}

StateStore StateStore::FileBacked(const fs::path& dir) {
  StateStore store(StoreBackend::kFileBacked, dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kStoreUnavailable,
                "cannot create store directory " + dir.string());
  }
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() != ".ckpt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    Blob bytes((std::istreambuf_iterator<char>(in)),
               std::istreambuf_iterator<char>());
    CheckpointRecord rec = DecodeRecord(bytes);
    Key key{rec.instance_id, rec.checkpoint_id};
    store.records_[key] = std::move(rec);
  }
  if (ec) {
    throw Error(ErrorCode::kStoreUnavailable,
                "cannot list store directory " + dir.string());
  }
  return store;
}

fs::path StateStore::PathFor(const Key& key) const {
  return dir_ / (PercentEncode(key.first) + "@" + std::to_string(key.second) +
                 ".ckpt");
}

void StateStore::Persist(const CheckpointRecord& record) {
  if (backend_ != StoreBackend::kFileBacked) return;
  std::lock_guard<std::mutex> lock(*mu_);
  fs::path final_path = PathFor({record.instance_id, record.checkpoint_id});
  fs::path tmp = final_path;
  tmp += ".tmp";
  Blob bytes = EncodeRecord(record);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(ErrorCode::kStoreUnavailable,
                  "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) {
    throw Error(ErrorCode::kStoreUnavailable,
                "cannot rename into " + final_path.string());
  }
}

void StateStore::StorePrepare(CheckpointRecord record) {
  Key key{record.instance_id, record.checkpoint_id};
  auto it = records_.find(key);
  if (it != records_.end() && it->second.phase == CheckpointPhase::kCommitted) {
    throw Error(ErrorCode::kInvariant,
                "checkpoint " + std::to_string(key.second) + " of " +
                    key.first + " is already committed");
  }
  record.phase = CheckpointPhase::kPrepared;
  Persist(record);
  records_[key] = std::move(record);
}

const CheckpointRecord& StateStore::StoreCommit(const std::string& instance_id,
                                                std::uint64_t checkpoint_id,
                                                SimTime now) {
  auto it = records_.find({instance_id, checkpoint_id});
  if (it == records_.end() || it->second.phase != CheckpointPhase::kPrepared) {
    throw Error(ErrorCode::kCommitWithoutPrepare,
                "no prepared checkpoint " + std::to_string(checkpoint_id) +
                    " for " + instance_id);
  }
  CheckpointRecord committed = it->second;
  committed.phase = CheckpointPhase::kCommitted;
  committed.write_ts = now;
  Persist(committed);
  it->second = std::move(committed);
  return it->second;
}

std::optional<CheckpointRecord> StateStore::GetLatestCommitted(
    const std::string& instance_id) const {
  auto lo = records_.lower_bound({instance_id, 0});
  std::optional<CheckpointRecord> best;
  for (auto it = lo; it != records_.end() && it->first.first == instance_id;
       ++it) {
    if (it->second.phase == CheckpointPhase::kCommitted) best = it->second;
  }
  return best;
}

std::optional<CheckpointRecord> StateStore::Get(const std::string& instance_id,
                                                std::uint64_t checkpoint_id) const {
  auto it = records_.find({instance_id, checkpoint_id});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateStore::size() const { return records_.size(); }

}  // namespace flowmigrate

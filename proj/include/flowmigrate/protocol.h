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


// Checkpoint-wave coordinator and the DSM, DCR and CCR migration flows.

#ifndef FLOWMIGRATE_PROTOCOL_H_
#define FLOWMIGRATE_PROTOCOL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "flowmigrate/acker.h"
#include "flowmigrate/runtime.h"
#include "flowmigrate/state_store.h"

namespace flowmigrate {

enum class WaveRouting { kSequential, kBroadcast };

struct WaveState {
  std::uint64_t wave_id = 0;
  std::uint64_t checkpoint_id = 0;
  EventKind kind = EventKind::kPrepare;
  WaveRouting routing = WaveRouting::kSequential;
  std::set<InstanceId> acked_by;
  SimTime started_ts{0};
  bool complete = false;
  bool abandoned = false;
  bool migration = false;  // part of a migration rather than periodic
  // Each (re)send is a round with its own control root.
  std::vector<RootId> rounds;
  std::function<void()> on_complete;

  bool active() const { return !complete && !abandoned; }
};

struct MigrationRequest {
  SimTime request_ts{0};
  Schedule schedule_after;
  std::set<InstanceId> migrating;
  StrategyKind strategy = StrategyKind::kCcr;
};

// Instances whose placement differs between the two schedules.
MigrationRequest MakeMigrationRequest(const ScenarioConfig& config,
                                      SimTime request_ts);

enum class MigrationState { kIdle, kInProgress, kDone, kAborted };

struct ProtocolCounters {
  std::uint64_t waves_started = 0;
  std::uint64_t init_rounds = 0;
  std::uint64_t duplicate_inits = 0;
  std::uint64_t periodic_checkpoints = 0;
  std::uint64_t rollbacks = 0;
  std::uint64_t killed = 0;
  // A DCR task dequeued PREPARE with DATA still queued behind it.
  std::uint64_t prepare_not_last = 0;
  // A CCR task dequeued COMMIT with uncaptured DATA still queued.
  std::uint64_t commit_not_last = 0;
};

class Coordinator : public ControlPlane {
 public:
  Coordinator(Engine& engine, StateStore& store);

  // Schedules the migration trigger (when enabled) and, for DSM, the
  // periodic checkpoint loop. Call after Engine::Start.
  void Start();

  void RequestMigration();

  // Creates a wave and sends its first round. Throws kWaveConflict while
  // another wave of the same kind is in flight.
  WaveState& StartWave(EventKind kind, WaveRouting routing,
                       std::uint64_t checkpoint_id,
                       std::function<void()> on_complete = {});

  ControlOutcome OnControlEvent(TaskInstanceRuntime& inst,
                                const EventEnvelope& event) override;

  // Swallows the next control event of `kind` dequeued at `id` without
  // handling or acking it.
  void DropNextControl(const InstanceId& id, EventKind kind);

  MigrationState migration_state() const { return state_; }
  const std::optional<MigrationRequest>& request() const { return request_; }
  const ProtocolCounters& counters() const { return counters_; }
  const std::map<std::uint64_t, WaveState>& waves() const { return waves_; }
  // Instance keys in the order they acked the given wave.
  const std::vector<InstanceId>& ack_order(std::uint64_t wave_id) const;

 private:
  void SendRound(WaveState& wave);
  void ScheduleResend(std::uint64_t wave_id);
  void Ack(WaveState& wave, const InstanceId& id, const EventEnvelope& event);
  void Forward(WaveState& wave, const InstanceId& from,
               const EventEnvelope& event);
  void CheckComplete(WaveState& wave);
  WaveState* FindWave(RootId round_root);

  ControlOutcome HandlePrepare(WaveState& wave, TaskInstanceRuntime& inst,
                               const EventEnvelope& event);
  ControlOutcome HandleCommit(WaveState& wave, TaskInstanceRuntime& inst,
                              const EventEnvelope& event);
  ControlOutcome HandleRollback(WaveState& wave, TaskInstanceRuntime& inst,
                                const EventEnvelope& event);
  ControlOutcome HandleInit(WaveState& wave, TaskInstanceRuntime& inst,
                            const EventEnvelope& event);

  void StartCheckpoint(bool migration);
  void OnPrepareTimeout(std::uint64_t wave_id, bool migration);
  void RebalanceStart();
  void RebalanceDone();
  void OnInitComplete();
  void PeriodicTick(std::uint64_t k);
  void Abort();

  Engine& engine_;
  StateStore& store_;
  const ScenarioConfig& config_;
  Acker control_acker_;

  std::map<std::uint64_t, WaveState> waves_;
  std::map<RootId, std::uint64_t> round_to_wave_;
  std::map<std::pair<InstanceId, RootId>, int> barrier_;
  std::map<std::uint64_t, std::vector<InstanceId>> ack_order_;
  std::uint64_t next_wave_id_ = 1;
  std::uint64_t next_checkpoint_id_ = 1;

  MigrationState state_ = MigrationState::kIdle;
  std::optional<MigrationRequest> request_;
  bool periodic_suspended_ = false;
  bool first_init_acked_ = false;
  std::optional<std::uint64_t> init_wave_;
  std::multiset<std::pair<InstanceId, EventKind>> drops_;
  ProtocolCounters counters_;
};

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_PROTOCOL_H_

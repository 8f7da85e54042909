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


#include "flowmigrate/protocol.h"

#include <algorithm>

#include "flowmigrate/errors.h"

namespace flowmigrate {

MigrationRequest MakeMigrationRequest(const ScenarioConfig& config,
                                      SimTime request_ts) {
  MigrationRequest req;
  req.request_ts = request_ts;
  req.schedule_after = config.schedule_after;
  req.strategy = config.strategy;
  for (const auto& [id, before] : config.schedule_before.placements) {
    auto it = config.schedule_after.placements.find(id);
    if (it == config.schedule_after.placements.end() || it->second != before) {
      req.migrating.insert(id);
    }
  }
  return req;
}

Coordinator::Coordinator(Engine& engine, StateStore& store)
    : engine_(engine), store_(store), config_(engine.config()) {
  engine_.SetControlPlane(this);
}

void Coordinator::Start() {
  if (config_.migrate) {
    engine_.clock().ScheduleAt(config_.migration_trigger_at,
                               [this] { RequestMigration(); });
  }
  if (config_.strategy == StrategyKind::kDsm) {
    engine_.clock().ScheduleAt(config_.checkpoint_interval,
                               [this] { PeriodicTick(1); });
  }
}

const std::vector<InstanceId>& Coordinator::ack_order(
    std::uint64_t wave_id) const {
  static const std::vector<InstanceId> kEmpty;
  auto it = ack_order_.find(wave_id);
  return it == ack_order_.end() ? kEmpty : it->second;
}

void Coordinator::DropNextControl(const InstanceId& id, EventKind kind) {
  drops_.insert({id, kind});
}

WaveState& Coordinator::StartWave(EventKind kind, WaveRouting routing,
                                  std::uint64_t checkpoint_id,
                                  std::function<void()> on_complete) {
  for (const auto& [wid, w] : waves_) {
    if (w.kind == kind && w.active()) {
      throw Error(ErrorCode::kWaveConflict,
                  std::string(EventKindName(kind)) + " wave " +
                      std::to_string(wid) + " is still in flight");
    }
  }
  std::uint64_t id = next_wave_id_++;
  WaveState& wave = waves_[id];
  wave.wave_id = id;
  wave.checkpoint_id = checkpoint_id;
  wave.kind = kind;
  wave.routing = routing;
  wave.started_ts = engine_.now();
  wave.on_complete = std::move(on_complete);
  ++counters_.waves_started;
  SendRound(wave);
  return wave;
}

void Coordinator::SendRound(WaveState& wave) {
  RootId root = engine_.NewEventId();
  control_acker_.RegisterRoot(root, engine_.now());
  wave.rounds.push_back(root);
  round_to_wave_[root] = wave.wave_id;
  if (wave.kind == EventKind::kInit) ++counters_.init_rounds;

  std::vector<InstanceId> targets;
  if (wave.routing == WaveRouting::kBroadcast) {
    targets = engine_.instance_ids();
  } else {
    for (const InstanceId& id : engine_.EntryInstances()) {
      for (const EdgeDef& e : config_.dag.edges) {
        if (e.to == id.task && config_.dag.IsSource(e.from)) {
          targets.push_back(id);
        }
      }
    }
  }
  for (const InstanceId& target : targets) {
    EventEnvelope ev;
    ev.event_id = engine_.NewEventId();
    ev.root_id = root;
    ev.root_seq_no = wave.checkpoint_id;
    ev.kind = wave.kind;
    ev.emit_ts = engine_.now();
    control_acker_.AnchorEmit(root, ev.event_id);
    engine_.Deliver(ev, target);
  }
  if (control_acker_.AckEvent(root, root) == 0) control_acker_.Discard(root);
}

void Coordinator::ScheduleResend(std::uint64_t wave_id) {
  SimTime at = config_.strategy == StrategyKind::kDsm
                   ? engine_.TimeoutDeadline(engine_.now())
                   : engine_.now() + config_.init_resend_interval;
  engine_.clock().ScheduleAt(at, [this, wave_id] {
    WaveState& wave = waves_.at(wave_id);
    if (!wave.active()) return;
    SendRound(wave);
    ScheduleResend(wave_id);
  });
}

WaveState* Coordinator::FindWave(RootId round_root) {
  auto it = round_to_wave_.find(round_root);
  if (it == round_to_wave_.end()) return nullptr;
  return &waves_.at(it->second);
}

void Coordinator::Forward(WaveState& wave, const InstanceId& from,
                          const EventEnvelope& event) {
  const AckerEntry* tree = control_acker_.Find(event.root_id);
  for (const InstanceId& child : engine_.ChildInstances(from)) {
    EventEnvelope copy = event;
    copy.event_id = engine_.NewEventId();
    copy.emit_ts = engine_.now();
    if (tree != nullptr && !tree->completed) {
      control_acker_.AnchorEmit(event.root_id, copy.event_id);
    }
    engine_.Deliver(copy, child);
  }
  (void)wave;
}

void Coordinator::Ack(WaveState& wave, const InstanceId& id,
                      const EventEnvelope& event) {
  const AckerEntry* tree = control_acker_.Find(event.root_id);
  if (tree != nullptr && !tree->completed &&
      control_acker_.AckEvent(event.root_id, event.event_id) == 0) {
    control_acker_.Discard(event.root_id);
  }
  if (!wave.active()) return;
  if (wave.acked_by.insert(id).second) ack_order_[wave.wave_id].push_back(id);
  if (wave.kind == EventKind::kInit && wave.migration && !first_init_acked_) {
    first_init_acked_ = true;
    engine_.timeline().AppendPhase(engine_.now(), PhaseMarker::kFirstInitAcked);
  }
  CheckComplete(wave);
}

void Coordinator::CheckComplete(WaveState& wave) {
  if (!wave.active()) return;
  if (wave.acked_by.size() < engine_.instance_ids().size()) return;
  wave.complete = true;
  if (wave.on_complete) wave.on_complete();
}

ControlOutcome Coordinator::OnControlEvent(TaskInstanceRuntime& inst,
                                           const EventEnvelope& event) {
  auto drop = drops_.find({inst.id, event.kind});
  if (drop != drops_.end()) {
    drops_.erase(drop);
    return {};
  }
  WaveState* wave = FindWave(event.root_id);
  if (wave == nullptr || !wave->active()) return {};

  if (wave->routing == WaveRouting::kSequential) {
    auto key = std::make_pair(inst.id, event.root_id);
    int seen = ++barrier_[key];
    if (seen < engine_.UpstreamCopies(inst.id)) {
      const AckerEntry* tree = control_acker_.Find(event.root_id);
      if (tree != nullptr && !tree->completed &&
          control_acker_.AckEvent(event.root_id, event.event_id) == 0) {
        control_acker_.Discard(event.root_id);
      }
      return {};
    }
    barrier_.erase(key);
  }

  switch (event.kind) {
    case EventKind::kPrepare: return HandlePrepare(*wave, inst, event);
    case EventKind::kCommit: return HandleCommit(*wave, inst, event);
    case EventKind::kRollback: return HandleRollback(*wave, inst, event);
    case EventKind::kInit: return HandleInit(*wave, inst, event);
    case EventKind::kData: break;
  }
  throw Error(ErrorCode::kInternal, "DATA event routed to the coordinator");
}

namespace {
bool HasQueuedData(const TaskInstanceRuntime& inst) {
  return std::any_of(inst.input_queue.begin(), inst.input_queue.end(),
                     [](const EventEnvelope& e) { return !e.is_control(); });
}
}  // namespace

ControlOutcome Coordinator::HandlePrepare(WaveState& wave,
                                          TaskInstanceRuntime& inst,
                                          const EventEnvelope& event) {
  const bool capture = wave.routing == WaveRouting::kBroadcast;
  if (wave.migration && config_.strategy == StrategyKind::kDcr &&
      HasQueuedData(inst)) {
    ++counters_.prepare_not_last;
  }
  inst.snapshot = inst.user_state;
  engine_.PrepareAcks(inst);
  if (capture) inst.capture_flag = true;
  const std::uint64_t wave_id = wave.wave_id;
  const InstanceId id = inst.id;
  return {Duration(0), [this, wave_id, id, event, capture] {
            WaveState& w = waves_.at(wave_id);
            if (!w.active()) return;
            if (!capture) Forward(w, id, event);
            Ack(w, id, event);
          }};
}

ControlOutcome Coordinator::HandleCommit(WaveState& wave,
                                         TaskInstanceRuntime& inst,
                                         const EventEnvelope& event) {
  const bool with_pending =
      wave.migration && config_.strategy == StrategyKind::kCcr;
  if (with_pending && HasQueuedData(inst)) ++counters_.commit_not_last;

  CheckpointRecord rec;
  rec.instance_id = inst.key;
  rec.checkpoint_id = wave.checkpoint_id;
  rec.user_state = inst.snapshot.value_or(inst.user_state).Encode();
  if (with_pending) rec.pending_events = EncodeEvents(inst.pending_list);
  rec.write_ts = engine_.now();
  Duration cost = config_.store_latency.Cost(rec.PayloadBytes());

  const std::uint64_t wave_id = wave.wave_id;
  const InstanceId id = inst.id;
  return {cost, [this, wave_id, id, event, rec = std::move(rec)]() mutable {
            WaveState& w = waves_.at(wave_id);
            if (!w.active()) return;
            const std::string key = rec.instance_id;
            const std::uint64_t cid = rec.checkpoint_id;
            store_.StorePrepare(std::move(rec));
            store_.StoreCommit(key, cid, engine_.now());
            TaskInstanceRuntime& target = engine_.instance(id);
            target.snapshot.reset();
            engine_.CommitAcks(target);
            Forward(w, id, event);
            Ack(w, id, event);
          }};
}

ControlOutcome Coordinator::HandleRollback(WaveState& wave,
                                           TaskInstanceRuntime& inst,
                                           const EventEnvelope& event) {
  inst.snapshot.reset();
  engine_.RollbackAcks(inst);
  if (inst.capture_flag) {
    inst.capture_flag = false;
    engine_.RequeueFront(inst, std::move(inst.pending_list));
    inst.pending_list.clear();
  }
  const std::uint64_t wave_id = wave.wave_id;
  const InstanceId id = inst.id;
  return {Duration(0), [this, wave_id, id, event] {
            Ack(waves_.at(wave_id), id, event);
          }};
}

ControlOutcome Coordinator::HandleInit(WaveState& wave,
                                       TaskInstanceRuntime& inst,
                                       const EventEnvelope& event) {
  const std::uint64_t wave_id = wave.wave_id;
  const InstanceId id = inst.id;
  const bool sequential = wave.routing == WaveRouting::kSequential;

  if (inst.initialized) {
    ++counters_.duplicate_inits;
    return {Duration(0), [this, wave_id, id, event, sequential] {
              WaveState& w = waves_.at(wave_id);
              if (!w.active()) return;
              TaskInstanceRuntime& target = engine_.instance(id);
              std::vector<EventEnvelope> resume;
              if (target.capture_flag) {
                target.capture_flag = false;
                resume = std::move(target.pending_list);
                target.pending_list.clear();
              }
              if (sequential) Forward(w, id, event);
              Ack(w, id, event);
              engine_.RequeueFront(target, std::move(resume));
            }};
  }

  std::optional<CheckpointRecord> rec = store_.GetLatestCommitted(inst.key);
  Duration cost =
      rec ? config_.store_latency.Cost(rec->PayloadBytes()) : Duration(0);
  return {cost, [this, wave_id, id, event, sequential, rec = std::move(rec)] {
            WaveState& w = waves_.at(wave_id);
            if (!w.active()) return;
            TaskInstanceRuntime& target = engine_.instance(id);
            DemoUserTask restored;
            std::vector<EventEnvelope> resume;
            if (rec) {
              restored = DemoUserTask::Decode(rec->user_state);
              if (rec->pending_events) resume = DecodeEvents(*rec->pending_events);
            }
            engine_.rollbacks()[target.key] =
                static_cast<std::int64_t>(target.count_at_kill) -
                static_cast<std::int64_t>(restored.processed_count);
            target.user_state = restored;
            target.initialized = true;
            target.status = InstanceStatus::kRunning;
            resume.insert(resume.end(), target.deferred.begin(),
                          target.deferred.end());
            target.deferred.clear();
            if (sequential) Forward(w, id, event);
            Ack(w, id, event);
            engine_.RequeueFront(target, std::move(resume));
          }};
}

void Coordinator::StartCheckpoint(bool migration) {
  const std::uint64_t cid = next_checkpoint_id_++;
  const bool broadcast =
      migration && config_.strategy == StrategyKind::kCcr;
  WaveState& prepare = StartWave(
      EventKind::kPrepare,
      broadcast ? WaveRouting::kBroadcast : WaveRouting::kSequential, cid,
      [this, cid, migration, broadcast] {
        if (migration) {
          engine_.timeline().AppendPhase(engine_.now(),
                                         broadcast ? PhaseMarker::kCaptureDone
                                                   : PhaseMarker::kDrainDone);
        }
        WaveState& commit = StartWave(
            EventKind::kCommit, WaveRouting::kSequential, cid,
            [this, migration] {
              if (migration) {
                RebalanceStart();
              } else {
                ++counters_.periodic_checkpoints;
              }
            });
        commit.migration = migration;
      });
  prepare.migration = migration;
  const std::uint64_t wave_id = prepare.wave_id;
  engine_.clock().ScheduleAt(engine_.TimeoutDeadline(engine_.now()),
                             [this, wave_id, migration] {
                               OnPrepareTimeout(wave_id, migration);
                             });
}

void Coordinator::OnPrepareTimeout(std::uint64_t wave_id, bool migration) {
  WaveState& wave = waves_.at(wave_id);
  if (!wave.active()) return;
  wave.abandoned = true;
  ++counters_.rollbacks;
  StartWave(EventKind::kRollback, WaveRouting::kBroadcast, wave.checkpoint_id)
      .migration = migration;
  if (migration) Abort();
}

void Coordinator::Abort() {
  state_ = MigrationState::kAborted;
  if (engine_.source_paused()) {
    engine_.UnpauseSource();
    engine_.timeline().AppendPhase(engine_.now(), PhaseMarker::kSourceUnpaused);
  }
}

void Coordinator::RequestMigration() {
  if (state_ == MigrationState::kInProgress) {
    throw Error(ErrorCode::kWaveConflict, "a migration is already in progress");
  }
  request_ = MakeMigrationRequest(config_, engine_.now());
  state_ = MigrationState::kInProgress;
  engine_.timeline().AppendPhase(engine_.now(), PhaseMarker::kRequest);
  engine_.BeginNewEpoch();

  if (config_.strategy == StrategyKind::kDsm) {
    for (auto& [wid, w] : waves_) {
      if (w.active() && !w.migration) w.abandoned = true;
    }
    periodic_suspended_ = true;
    RebalanceStart();
    return;
  }
  engine_.PauseSource();
  StartCheckpoint(true);
}

void Coordinator::RebalanceStart() {
  engine_.timeline().AppendPhase(engine_.now(), PhaseMarker::kRebalanceStart);
  if (TotalSlots(config_.vms_after) < config_.dag.TotalInstances()) {
    throw Error(ErrorCode::kInsufficientSlots,
                "target schedule has fewer slots than instances");
  }
  for (const InstanceId& id : request_->migrating) {
    engine_.Kill(id);
    ++counters_.killed;
  }
  engine_.clock().ScheduleAfter(config_.rebalance_duration,
                                [this] { RebalanceDone(); });
}

void Coordinator::RebalanceDone() {
  for (const InstanceId& id : request_->migrating) {
    engine_.Respawn(id, request_->schedule_after.placements.at(id));
  }
  engine_.timeline().AppendPhase(engine_.now(), PhaseMarker::kRebalanceDone);
  const bool broadcast = config_.strategy == StrategyKind::kCcr;
  WaveState& init = StartWave(
      EventKind::kInit,
      broadcast ? WaveRouting::kBroadcast : WaveRouting::kSequential,
      next_checkpoint_id_ - 1, [this] { OnInitComplete(); });
  init.migration = true;
  init_wave_ = init.wave_id;
  ScheduleResend(init.wave_id);
}

void Coordinator::OnInitComplete() {
  engine_.timeline().AppendPhase(engine_.now(), PhaseMarker::kAllInitAcked);
  state_ = MigrationState::kDone;
  if (config_.strategy == StrategyKind::kDsm) {
    periodic_suspended_ = false;
    return;
  }
  engine_.UnpauseSource();
  engine_.timeline().AppendPhase(engine_.now(), PhaseMarker::kSourceUnpaused);
}

void Coordinator::PeriodicTick(std::uint64_t k) {
  if (engine_.now() >= config_.run_duration) return;
  bool busy = false;
  for (const auto& [wid, w] : waves_) {
    if (w.active() &&
        (w.kind == EventKind::kPrepare || w.kind == EventKind::kCommit)) {
      busy = true;
    }
  }
  if (!periodic_suspended_ && !busy) {
    // Deferred by a zero delay so source emissions due at the same instant
    // enter the queues ahead of the wave.
    engine_.clock().ScheduleAfter(Duration(0), [this] {
      if (!periodic_suspended_) StartCheckpoint(false);
    });
  }
  engine_.clock().ScheduleAt(
      SimTime(config_.checkpoint_interval.count() *
              static_cast<std::int64_t>(k + 1)),
      [this, k] { PeriodicTick(k + 1); });
}

}  // namespace flowmigrate

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


// Discrete-event dataflow engine: per-instance FIFO queues with timed
// service, edge routing, the paced source with its root cache, and
// instance kill/respawn. Control events are handed to a ControlPlane.

#ifndef FLOWMIGRATE_RUNTIME_H_
#define FLOWMIGRATE_RUNTIME_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "flowmigrate/acker.h"
#include "flowmigrate/event.h"
#include "flowmigrate/model.h"
#include "flowmigrate/scenario.h"
#include "flowmigrate/sim_clock.h"
#include "flowmigrate/state_store.h"
#include "flowmigrate/timeline.h"

namespace flowmigrate {

// Reference stateful task: counts DATA events and remembers the last
// sequence number seen.
struct DemoUserTask {
  std::uint64_t processed_count = 0;
  std::uint64_t last_seq_no = 0;

  void Process(const EventEnvelope& e) {
    ++processed_count;
    last_seq_no = e.root_seq_no;
  }
  Blob Encode() const;  // 16 bytes, little-endian
  static DemoUserTask Decode(std::span<const std::uint8_t> bytes);

  bool operator==(const DemoUserTask&) const = default;
};

enum class InstanceStatus { kRunning, kKilled, kRespawning, kReady };

std::string_view InstanceStatusName(InstanceStatus s);

// Round-robin cursors of one sender: one per out-edge for DUPLICATE edges,
// plus one shared cursor choosing among SHUFFLE edges.
struct RouterState {
  std::vector<std::uint64_t> edge_cursor;
  std::uint64_t shuffle_cursor = 0;
};

struct HeldAck {
  RootId root = 0;
  EventId event = 0;
  std::uint32_t attempt = 0;
};

struct TaskInstanceRuntime {
  InstanceId id;
  std::string key;  // id.ToString()
  const TaskDef* task = nullptr;
  Placement placement;
  InstanceStatus status = InstanceStatus::kRunning;
  bool initialized = true;

  std::deque<EventEnvelope> input_queue;
  std::vector<EventEnvelope> parked;    // DATA that arrived while respawning
  std::vector<EventEnvelope> deferred;  // DATA dequeued before INIT
  bool capture_flag = false;
  std::vector<EventEnvelope> pending_list;

  DemoUserTask user_state;
  std::optional<DemoUserTask> snapshot;  // prepared, not yet committed

  // Acks withheld by stateful tasks under periodic checkpointing: `held`
  // since the last PREPARE, `prepared` covered by the pending snapshot.
  std::vector<HeldAck> held_acks;
  std::vector<HeldAck> prepared_acks;

  bool busy = false;
  std::uint64_t incarnation = 0;
  Duration startup_delay{0};
  std::uint64_t count_at_kill = 0;
  RouterState router;
};

struct SourceRuntime {
  TaskId task;
  bool paused = false;
  std::deque<std::uint64_t> backlog;  // sequence numbers awaiting emission
  std::map<RootId, EventEnvelope> root_cache;
  RouterState router;
};

struct EngineCounters {
  std::uint64_t roots_emitted = 0;
  std::uint64_t replays = 0;
  std::uint64_t data_serviced = 0;
  std::uint64_t sink_exits = 0;
  std::uint64_t dropped_at_killed = 0;
  std::uint64_t control_dropped = 0;
  std::uint64_t parked = 0;
  std::uint64_t deferred = 0;
  std::uint64_t captured = 0;
  std::uint64_t stale_discarded = 0;
  std::uint64_t max_backlog = 0;
};

// What a control handler needs the engine to do once it has run.
struct ControlOutcome {
  Duration busy{0};           // store I/O on top of the service time
  std::function<void()> done;  // runs after `busy`, unless the instance died
};

class ControlPlane {
 public:
  virtual ~ControlPlane() = default;
  virtual ControlOutcome OnControlEvent(TaskInstanceRuntime& inst,
                                        const EventEnvelope& event) = 0;
};

class Engine {
 public:
  Engine(const ScenarioConfig& config, SimClock& clock, Timeline& timeline);

  void SetControlPlane(ControlPlane* plane) { control_ = plane; }

  // Schedules source pacing and, with DATA acking, timeout sweeps.
  void Start();

  const ScenarioConfig& config() const { return config_; }
  SimClock& clock() { return clock_; }
  SimTime now() const { return clock_.now(); }
  Timeline& timeline() { return timeline_; }
  Acker& data_acker() { return acker_; }
  const EngineCounters& counters() const { return counters_; }

  // Instances in enumeration order (task order, then ordinal).
  const std::vector<InstanceId>& instance_ids() const { return order_; }
  TaskInstanceRuntime& instance(const InstanceId& id);
  const TaskInstanceRuntime& instance(const InstanceId& id) const;

  // Instances of tasks with an in-edge from a source.
  std::vector<InstanceId> EntryInstances() const;
  // Every instance of every user task downstream of `id` by one edge.
  std::vector<InstanceId> ChildInstances(const InstanceId& id) const;
  // Copies of a sequential wave event an instance must see before acting:
  // one per upstream instance, a source counting as one.
  int UpstreamCopies(const InstanceId& id) const;

  // Schedules arrival at `to` after the network delay.
  void Deliver(const EventEnvelope& event, const InstanceId& to);

  // Puts events at the head of the instance queue, keeping their order.
  void RequeueFront(TaskInstanceRuntime& inst,
                    std::vector<EventEnvelope> events);
  // Resumes servicing after state changes made outside a handler.
  void Kick(TaskInstanceRuntime& inst);

  void PauseSource();
  // Emits the whole backlog as a burst, then continues paced emission.
  void UnpauseSource();
  bool source_paused() const;

  // Roots first emitted from now on carry epoch 1.
  void BeginNewEpoch() { epoch_ = 1; }

  void Kill(const InstanceId& id);
  // Brings a killed instance back at `placement`. It accepts events after
  // its start-up delay and services DATA only once initialized.
  void Respawn(const InstanceId& id, const Placement& placement);

  EventId NewEventId();

  // Withheld acks follow the checkpoint: PREPARE moves them to the
  // prepared set, COMMIT releases them, ROLLBACK returns them to held.
  void PrepareAcks(TaskInstanceRuntime& inst);
  void CommitAcks(TaskInstanceRuntime& inst);
  void RollbackAcks(TaskInstanceRuntime& inst);

  // Stops new paced emissions; scheduled work continues.
  bool source_done() const { return now() >= config_.run_duration; }
  // First timeout sweep at which an item sent at `sent` counts as expired.
  // Sweeps fire on multiples of the sweep interval.
  SimTime TimeoutDeadline(SimTime sent) const;
  // True once no source, instance or acker work is outstanding.
  bool Quiescent() const;

  // Count rolled back by the last restore, per instance key.
  std::map<std::string, std::int64_t>& rollbacks() { return rollbacks_; }

 private:
  void SourceTick(std::size_t source_index, std::uint64_t k);
  void EmitRoot(SourceRuntime& src, std::uint64_t seq);
  void Replay(RootId root);
  void Sweep();
  // Routes children of `parent` from `sender` (task) using `router`. A
  // stateful `holder` may withhold the parent's ack until its next commit.
  void EmitChildren(const TaskId& sender, RouterState& router,
                    const EventEnvelope& parent, int count,
                    TaskInstanceRuntime* holder = nullptr);
  void DeliverToSink(const EventEnvelope& event);
  void Arrive(const InstanceId& to, const EventEnvelope& event);
  void Pump(TaskInstanceRuntime& inst);
  void Complete(const InstanceId& id, std::uint64_t incarnation,
                const EventEnvelope& event);
  bool IsStale(const EventEnvelope& event) const;
  void OnRootAck(RootId root, std::uint64_t hash);
  // Outputs per input: ceil(selectivity).
  static int OutputCount(double selectivity);
  void BecomeReady(const InstanceId& id, std::uint64_t incarnation);
  // One draw per worker slot; instances sharing a slot start together.
  Duration WorkerStartupDelay(const Placement& worker) const;

  const ScenarioConfig& config_;
  SimClock& clock_;
  Timeline& timeline_;
  ControlPlane* control_ = nullptr;
  Acker acker_;
  bool acking_;

  std::vector<InstanceId> order_;
  std::map<InstanceId, TaskInstanceRuntime> instances_;
  std::map<TaskId, std::vector<const EdgeDef*>> out_edges_;
  std::vector<SourceRuntime> sources_;
  std::uint64_t next_seq_ = 0;
  std::int32_t epoch_ = 0;
  Duration period_{125};

  std::mt19937_64 id_rng_;
  EngineCounters counters_;
  std::map<std::string, std::int64_t> rollbacks_;
};

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_RUNTIME_H_

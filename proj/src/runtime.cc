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


#include "flowmigrate/runtime.h"

#include <algorithm>
#include <cmath>

#include "flowmigrate/bytes.h"
#include "flowmigrate/errors.h"

namespace flowmigrate {

namespace {
// Generator stream for worker start-up draws, derived from the seed.
constexpr std::uint64_t kStartupStream = 0x9e3779b97f4a7c15ULL;
}  // namespace

Blob DemoUserTask::Encode() const {
  Blob out;
  ByteWriter w(out);
  w.Put<std::uint64_t>(processed_count);
  w.Put<std::uint64_t>(last_seq_no);
  return out;
}

DemoUserTask DemoUserTask::Decode(std::span<const std::uint8_t> bytes) {
  DemoUserTask t;
  if (bytes.empty()) return t;
  ByteReader r(bytes);
  t.processed_count = r.Get<std::uint64_t>();
  t.last_seq_no = r.Get<std::uint64_t>();
  return t;
}

std::string_view InstanceStatusName(InstanceStatus s) {
  switch (s) {
    case InstanceStatus::kRunning: return "RUNNING";
    case InstanceStatus::kKilled: return "KILLED";
    case InstanceStatus::kRespawning: return "RESPAWNING";
    case InstanceStatus::kReady: return "READY";
  }
  return "?";
}

Engine::Engine(const ScenarioConfig& config, SimClock& clock,
               Timeline& timeline)
    : config_(config),
      clock_(clock),
      timeline_(timeline),
      acking_(config.DataAckingEnabled()),
      id_rng_(config.random_seed) {
  for (const EdgeDef& e : config_.dag.edges) out_edges_[e.from].push_back(&e);

  order_ = EnumerateInstances(config_.dag);
  for (const InstanceId& id : order_) {
    TaskInstanceRuntime inst;
    inst.id = id;
    inst.key = id.ToString();
    inst.task = config_.dag.FindTask(id.task);
    auto it = config_.schedule_before.placements.find(id);
    if (it != config_.schedule_before.placements.end()) {
      inst.placement = it->second;
    }
    inst.router.edge_cursor.assign(out_edges_[id.task].size(), 0);
    instances_.emplace(id, std::move(inst));
  }
  for (const TaskId& s : config_.dag.source_tasks) {
    SourceRuntime src;
    src.task = s;
    src.router.edge_cursor.assign(out_edges_[s].size(), 0);
    sources_.push_back(std::move(src));
  }
}

TaskInstanceRuntime& Engine::instance(const InstanceId& id) {
  auto it = instances_.find(id);
  if (it == instances_.end()) {
    throw Error(ErrorCode::kUnknownInstance,
                "unknown instance " + id.ToString());
  }
  return it->second;
}

const TaskInstanceRuntime& Engine::instance(const InstanceId& id) const {
  return const_cast<Engine*>(this)->instance(id);
}

std::vector<InstanceId> Engine::EntryInstances() const {
  std::vector<InstanceId> out;
  for (const InstanceId& id : order_) {
    for (const EdgeDef& e : config_.dag.edges) {
      if (e.to == id.task && config_.dag.IsSource(e.from)) {
        out.push_back(id);
        break;
      }
    }
  }
  return out;
}

std::vector<InstanceId> Engine::ChildInstances(const InstanceId& id) const {
  std::vector<InstanceId> out;
  auto it = out_edges_.find(id.task);
  if (it == out_edges_.end()) return out;
  for (const EdgeDef* e : it->second) {
    const TaskDef* child = config_.dag.FindTask(e->to);
    if (child == nullptr) continue;  // sink
    for (int k = 0; k < child->instance_count; ++k) {
      out.push_back(InstanceId{e->to, k});
    }
  }
  return out;
}

int Engine::UpstreamCopies(const InstanceId& id) const {
  int copies = 0;
  for (const EdgeDef& e : config_.dag.edges) {
    if (e.to != id.task) continue;
    if (config_.dag.IsSource(e.from)) {
      ++copies;
    } else if (const TaskDef* parent = config_.dag.FindTask(e.from)) {
      copies += parent->instance_count;
    }
  }
  return copies;
}

void Engine::Start() {
  period_ = Duration(static_cast<std::int64_t>(
      std::llround(1000.0 / std::max(config_.source_rate, 1e-9))));
  for (std::size_t s = 0; s < sources_.size(); ++s) {
    clock_.ScheduleAt(kTimeZero, [this, s] { SourceTick(s, 0); });
  }
  if (acking_) {
    clock_.ScheduleAfter(config_.AckSweepInterval(), [this] { Sweep(); });
  }
}

EventId Engine::NewEventId() {
  EventId id = 0;
  while (id == 0) id = id_rng_();
  return id;
}

void Engine::SourceTick(std::size_t source_index, std::uint64_t k) {
  SimTime at(static_cast<std::int64_t>(
      std::floor(static_cast<double>(k) * 1000.0 / config_.source_rate)));
  if (at >= config_.run_duration) return;
  SourceRuntime& src = sources_[source_index];
  std::uint64_t seq = next_seq_++;
  if (src.paused) {
    src.backlog.push_back(seq);
    counters_.max_backlog =
        std::max<std::uint64_t>(counters_.max_backlog, src.backlog.size());
  } else {
    EmitRoot(src, seq);
  }
  SimTime next(static_cast<std::int64_t>(
      std::floor(static_cast<double>(k + 1) * 1000.0 / config_.source_rate)));
  clock_.ScheduleAt(next, [this, source_index, k] {
    SourceTick(source_index, k + 1);
  });
}

void Engine::EmitRoot(SourceRuntime& src, std::uint64_t seq) {
  EventEnvelope root;
  root.event_id = NewEventId();
  root.root_id = root.event_id;
  root.root_seq_no = seq;
  root.kind = EventKind::kData;
  root.epoch = epoch_;
  root.emit_ts = now();
  ++counters_.roots_emitted;
  timeline_.Append(TimelineRecord{now(), Site::kSourceEmit, root.event_id,
                                  seq, root.epoch, false, std::nullopt});
  if (acking_) {
    acker_.RegisterRoot(root.root_id, now());
    src.root_cache.emplace(root.root_id, root);
  }
  EmitChildren(src.task, src.router, root, 1);
}

SimTime Engine::TimeoutDeadline(SimTime sent) const {
  const std::int64_t interval = config_.AckSweepInterval().count();
  const std::int64_t due = (sent + config_.ack_timeout).count();
  return SimTime((due + interval - 1) / interval * interval);
}

void Engine::Sweep() {
  for (RootId root : acker_.SweepTimeouts(now(), config_.ack_timeout)) {
    Replay(root);
  }
  if (!source_done() || acker_.size() > 0) {
    clock_.ScheduleAfter(config_.AckSweepInterval(), [this] { Sweep(); });
  }
}

void Engine::Replay(RootId root) {
  const AckerEntry* entry = acker_.Find(root);
  for (SourceRuntime& src : sources_) {
    auto it = src.root_cache.find(root);
    if (it == src.root_cache.end()) continue;
    EventEnvelope copy = it->second;
    copy.replayed = true;
    copy.attempt = entry ? entry->attempt : copy.attempt + 1;
    ++counters_.replays;
    timeline_.Append(TimelineRecord{now(), Site::kReplay, copy.event_id,
                                    copy.root_seq_no, copy.epoch, true,
                                    std::nullopt});
    EmitChildren(src.task, src.router, copy, 1);
    return;
  }
}

int Engine::OutputCount(double selectivity) {
  return static_cast<int>(std::ceil(selectivity - 1e-12));
}

void Engine::EmitChildren(const TaskId& sender, RouterState& router,
                          const EventEnvelope& parent, int count,
                          TaskInstanceRuntime* holder) {
  auto it = out_edges_.find(sender);
  std::vector<std::pair<EventEnvelope, const EdgeDef*>> out;
  if (it != out_edges_.end()) {
    const auto& edges = it->second;
    std::vector<std::size_t> shuffle;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i]->grouping == Grouping::kShuffle) shuffle.push_back(i);
    }
    for (int n = 0; n < count; ++n) {
      auto add = [&](std::size_t edge_index) {
        EventEnvelope child = parent;
        child.event_id = NewEventId();
        out.emplace_back(child, edges[edge_index]);
      };
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i]->grouping == Grouping::kDuplicate) add(i);
      }
      if (!shuffle.empty()) {
        add(shuffle[router.shuffle_cursor++ % shuffle.size()]);
      }
    }
  }

  const bool track = acking_ && !IsStale(parent);
  if (track) {
    for (const auto& [child, edge] : out) {
      acker_.AnchorEmit(parent.root_id, child.event_id);
    }
  }

  for (const auto& [child, edge] : out) {
    if (config_.dag.IsSink(edge->to)) {
      clock_.ScheduleAfter(config_.network_delay,
                           [this, child = child] { DeliverToSink(child); });
      continue;
    }
    const TaskDef* target = config_.dag.FindTask(edge->to);
    std::size_t edge_index = 0;
    const auto& edges = out_edges_[sender];
    while (edges[edge_index] != edge) ++edge_index;
    std::uint64_t& cursor = router.edge_cursor[edge_index];
    int ordinal = static_cast<int>(cursor++ %
                                   static_cast<std::uint64_t>(target->instance_count));
    Deliver(child, InstanceId{edge->to, ordinal});
  }

  if (!track) return;
  if (holder != nullptr && holder->task->stateful && config_.ack_on_commit &&
      config_.strategy == StrategyKind::kDsm) {
    holder->held_acks.push_back({parent.root_id, parent.event_id, parent.attempt});
    return;
  }
  OnRootAck(parent.root_id, acker_.AckEvent(parent.root_id, parent.event_id));
}

void Engine::OnRootAck(RootId root, std::uint64_t hash) {
  if (hash != 0) return;
  acker_.Discard(root);
  for (SourceRuntime& src : sources_) src.root_cache.erase(root);
}

bool Engine::IsStale(const EventEnvelope& event) const {
  if (!acking_ || event.is_control()) return false;
  const AckerEntry* entry = acker_.Find(event.root_id);
  return entry == nullptr || entry->completed || entry->attempt != event.attempt;
}

void Engine::DeliverToSink(const EventEnvelope& event) {
  ++counters_.sink_exits;
  timeline_.Append(TimelineRecord{now(), Site::kSinkExit, event.event_id,
                                  event.root_seq_no, event.epoch,
                                  event.replayed, std::nullopt});
  if (acking_ && !IsStale(event)) {
    OnRootAck(event.root_id, acker_.AckEvent(event.root_id, event.event_id));
  }
}

void Engine::Deliver(const EventEnvelope& event, const InstanceId& to) {
  instance(to);  // validates the target
  clock_.ScheduleAfter(config_.network_delay,
                       [this, to, event] { Arrive(to, event); });
}

void Engine::Arrive(const InstanceId& to, const EventEnvelope& event) {
  TaskInstanceRuntime& inst = instance(to);
  switch (inst.status) {
    case InstanceStatus::kKilled:
      if (event.is_control()) {
        ++counters_.control_dropped;
      } else {
        ++counters_.dropped_at_killed;
      }
      return;
    case InstanceStatus::kRespawning:
      if (event.is_control()) {
        ++counters_.control_dropped;
      } else {
        ++counters_.parked;
        inst.parked.push_back(event);
      }
      return;
    case InstanceStatus::kReady:
    case InstanceStatus::kRunning:
      inst.input_queue.push_back(event);
      Pump(inst);
      return;
  }
}

void Engine::RequeueFront(TaskInstanceRuntime& inst,
                          std::vector<EventEnvelope> events) {
  inst.input_queue.insert(inst.input_queue.begin(), events.begin(),
                          events.end());
}

void Engine::Kick(TaskInstanceRuntime& inst) { Pump(inst); }

void Engine::Pump(TaskInstanceRuntime& inst) {
  while (!inst.busy && !inst.input_queue.empty() &&
         (inst.status == InstanceStatus::kRunning ||
          inst.status == InstanceStatus::kReady)) {
    EventEnvelope ev = inst.input_queue.front();
    inst.input_queue.pop_front();

    if (ev.is_control()) {
      if (control_ == nullptr) continue;
      inst.busy = true;
      ControlOutcome outcome = control_->OnControlEvent(inst, ev);
      const std::uint64_t incarnation = inst.incarnation;
      const InstanceId id = inst.id;
      auto finish = [this, id, incarnation, done = std::move(outcome.done)] {
        TaskInstanceRuntime& target = instance(id);
        if (target.incarnation != incarnation) return;
        target.busy = false;
        if (done) done();
        Pump(target);
      };
      clock_.ScheduleAfter(inst.task->service_time + outcome.busy,
                           std::move(finish));
      return;
    }

    if (!inst.initialized) {
      ++counters_.deferred;
      inst.deferred.push_back(ev);
      continue;
    }
    if (inst.capture_flag) {
      ++counters_.captured;
      inst.pending_list.push_back(ev);
      continue;
    }
    if (IsStale(ev)) {
      ++counters_.stale_discarded;
      continue;
    }
    inst.busy = true;
    clock_.ScheduleAfter(inst.task->service_time,
                         [this, id = inst.id, inc = inst.incarnation, ev] {
                           Complete(id, inc, ev);
                         });
  }
}

void Engine::Complete(const InstanceId& id, std::uint64_t incarnation,
                      const EventEnvelope& event) {
  TaskInstanceRuntime& inst = instance(id);
  if (inst.incarnation != incarnation) return;
  ++counters_.data_serviced;
  if (inst.task->stateful) inst.user_state.Process(event);
  EmitChildren(inst.id.task, inst.router, event,
               OutputCount(inst.task->selectivity), &inst);
  inst.busy = false;
  Pump(inst);
}

void Engine::PrepareAcks(TaskInstanceRuntime& inst) {
  inst.prepared_acks.insert(inst.prepared_acks.end(), inst.held_acks.begin(),
                            inst.held_acks.end());
  inst.held_acks.clear();
}

void Engine::CommitAcks(TaskInstanceRuntime& inst) {
  std::vector<HeldAck> acks = std::move(inst.prepared_acks);
  inst.prepared_acks.clear();
  for (const HeldAck& a : acks) {
    const AckerEntry* entry = acker_.Find(a.root);
    if (entry == nullptr || entry->completed || entry->attempt != a.attempt) {
      continue;
    }
    OnRootAck(a.root, acker_.AckEvent(a.root, a.event));
  }
}

void Engine::RollbackAcks(TaskInstanceRuntime& inst) {
  inst.held_acks.insert(inst.held_acks.begin(), inst.prepared_acks.begin(),
                        inst.prepared_acks.end());
  inst.prepared_acks.clear();
}

void Engine::PauseSource() {
  for (SourceRuntime& src : sources_) src.paused = true;
}

void Engine::UnpauseSource() {
  for (SourceRuntime& src : sources_) {
    src.paused = false;
    while (!src.backlog.empty()) {
      std::uint64_t seq = src.backlog.front();
      src.backlog.pop_front();
      EmitRoot(src, seq);
    }
  }
}

bool Engine::source_paused() const {
  return !sources_.empty() && sources_.front().paused;
}

void Engine::Kill(const InstanceId& id) {
  TaskInstanceRuntime& inst = instance(id);
  if (inst.status == InstanceStatus::kKilled) {
    throw Error(ErrorCode::kInvariant, "instance " + inst.key +
                                           " is already killed");
  }
  counters_.dropped_at_killed += inst.input_queue.size() + inst.parked.size() +
                                 inst.deferred.size() + (inst.busy ? 1 : 0);
  inst.status = InstanceStatus::kKilled;
  inst.count_at_kill = inst.user_state.processed_count;
  inst.input_queue.clear();
  inst.parked.clear();
  inst.deferred.clear();
  inst.pending_list.clear();
  inst.held_acks.clear();
  inst.prepared_acks.clear();
  inst.capture_flag = false;
  inst.snapshot.reset();
  inst.user_state = DemoUserTask{};
  inst.busy = false;
  inst.initialized = false;
  ++inst.incarnation;
}

void Engine::Respawn(const InstanceId& id, const Placement& placement) {
  TaskInstanceRuntime& inst = instance(id);
  if (inst.status != InstanceStatus::kKilled) {
    throw Error(ErrorCode::kInvariant,
                "respawn of live instance " + inst.key);
  }
  inst.placement = placement;
  inst.startup_delay = WorkerStartupDelay(placement);
  inst.status = InstanceStatus::kRespawning;
  inst.initialized = false;
  inst.router = RouterState{};
  inst.router.edge_cursor.assign(out_edges_[id.task].size(), 0);
  clock_.ScheduleAfter(inst.startup_delay,
                       [this, id, inc = inst.incarnation] {
                         BecomeReady(id, inc);
                       });
}

Duration Engine::WorkerStartupDelay(const Placement& worker) const {
  // FNV-1a over the worker identity keeps draws independent of respawn order.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : worker.vm_id + "#" + std::to_string(worker.slot_index)) {
    h = (h ^ c) * 0x100000001b3ULL;
  }
  std::mt19937_64 rng(config_.random_seed ^ kStartupStream ^ h);
  const auto jitter = static_cast<std::uint64_t>(
      std::max<std::int64_t>(0, config_.worker_startup_jitter.count()));
  return config_.worker_startup_min +
         Duration(static_cast<std::int64_t>(rng() % (jitter + 1)));
}

void Engine::BecomeReady(const InstanceId& id, std::uint64_t incarnation) {
  TaskInstanceRuntime& inst = instance(id);
  if (inst.incarnation != incarnation ||
      inst.status != InstanceStatus::kRespawning) {
    return;
  }
  inst.status = InstanceStatus::kReady;
  for (const EventEnvelope& e : inst.parked) inst.input_queue.push_back(e);
  inst.parked.clear();
  Pump(inst);
}

bool Engine::Quiescent() const {
  if (!source_done()) return false;
  for (const SourceRuntime& src : sources_) {
    if (!src.backlog.empty()) return false;
  }
  if (acker_.size() > 0) return false;
  for (const auto& [id, inst] : instances_) {
    if (inst.busy || !inst.input_queue.empty() || !inst.pending_list.empty() ||
        !inst.parked.empty() || !inst.deferred.empty()) {
      return false;
    }
  }
  return true;
}

}  // namespace flowmigrate

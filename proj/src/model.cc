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

#include "flowmigrate/model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <set>

#include "flowmigrate/errors.h"

namespace flowmigrate {

const TaskDef* DagDef::FindTask(const TaskId& id) const {
  for (const TaskDef& t : tasks) {
    if (t.task_id == id) return &t;
  }
  return nullptr;
}

bool DagDef::IsSource(const TaskId& id) const {
  return std::find(source_tasks.begin(), source_tasks.end(), id) !=
         source_tasks.end();
}

bool DagDef::IsSink(const TaskId& id) const {
  return std::find(sink_tasks.begin(), sink_tasks.end(), id) !=
         sink_tasks.end();
}

int DagDef::TotalInstances() const {
  int total = 0;
  for (const TaskDef& t : tasks) total += t.instance_count;
  return total;
}

std::string InstanceId::ToString() const {
  return task + "#" + std::to_string(ordinal);
}

std::optional<InstanceId> InstanceId::Parse(const std::string& text) {
  auto hash = text.rfind('#');
  if (hash == std::string::npos || hash == 0 || hash + 1 == text.size()) {
    return std::nullopt;
  }
  int ordinal = 0;
  const char* first = text.data() + hash + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, ordinal);
  if (ec != std::errc() || ptr != last || ordinal < 0) return std::nullopt;
  return InstanceId{text.substr(0, hash), ordinal};
}

bool ValidationResult::Has(std::string_view kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

namespace {

// Every node id known to the DAG: sources, user tasks, sinks.
std::vector<TaskId> AllNodes(const DagDef& dag) {
  std::vector<TaskId> nodes = dag.source_tasks;
  for (const TaskDef& t : dag.tasks) nodes.push_back(t.task_id);
  nodes.insert(nodes.end(), dag.sink_tasks.begin(), dag.sink_tasks.end());
  return nodes;
}

std::map<TaskId, std::vector<const EdgeDef*>> OutEdges(const DagDef& dag) {
  std::map<TaskId, std::vector<const EdgeDef*>> out;
  for (const EdgeDef& e : dag.edges) out[e.from].push_back(&e);
  return out;
}

// Kahn's algorithm; returns fewer nodes than AllNodes when a cycle exists.
std::vector<TaskId> KahnOrder(const DagDef& dag) {
  std::vector<TaskId> nodes = AllNodes(dag);
  std::map<TaskId, int> indegree;
  for (const TaskId& n : nodes) indegree[n] = 0;
  for (const EdgeDef& e : dag.edges) {
    if (indegree.count(e.to) && indegree.count(e.from)) ++indegree[e.to];
  }
  auto out = OutEdges(dag);
  std::deque<TaskId> ready;
  for (const TaskId& n : nodes) {
    if (indegree[n] == 0) ready.push_back(n);
  }
  std::vector<TaskId> order;
  while (!ready.empty()) {
    TaskId n = ready.front();
    ready.pop_front();
    order.push_back(n);
    for (const EdgeDef* e : out[n]) {
      if (!indegree.count(e->to)) continue;
      if (--indegree[e->to] == 0) ready.push_back(e->to);
    }
  }
  return order;
}

}  // namespace

ValidationResult ValidateDag(const DagDef& dag) {
  ValidationResult result;
  auto add = [&](std::string kind, std::string subject) {
    result.violations.push_back({std::move(kind), std::move(subject)});
  };

  if (dag.source_tasks.empty()) add("no source", dag.name);
  if (dag.sink_tasks.empty()) add("no sink", dag.name);

  std::set<TaskId> seen;
  for (const TaskId& n : AllNodes(dag)) {
    if (!seen.insert(n).second) add("duplicate task id", n);
  }
  for (const TaskDef& t : dag.tasks) {
    if (t.service_time.count() <= 0) add("service time not positive", t.task_id);
    if (!(t.selectivity > 0.0)) add("selectivity not positive", t.task_id);
    if (t.instance_count < 1) add("instance count below 1", t.task_id);
  }

  for (const EdgeDef& e : dag.edges) {
    std::string label = e.from + "->" + e.to;
    if (!seen.count(e.from)) add("unknown edge endpoint", label);
    if (!seen.count(e.to)) add("unknown edge endpoint", label);
    if (dag.IsSource(e.to)) add("source has in-edge", label);
    if (dag.IsSink(e.from)) add("sink has out-edge", label);
    if (e.from == e.to) add("cycle", label);
  }

  std::vector<TaskId> order = KahnOrder(dag);
  if (order.size() < seen.size()) {
    std::set<TaskId> ordered(order.begin(), order.end());
    for (const TaskId& n : AllNodes(dag)) {
      if (!ordered.count(n)) {
        add("cycle", n);
        break;
      }
    }
  }

  // Reachability from sources over known edges.
  auto out = OutEdges(dag);
  std::set<TaskId> reached;
  std::deque<TaskId> frontier(dag.source_tasks.begin(), dag.source_tasks.end());
  while (!frontier.empty()) {
    TaskId n = frontier.front();
    frontier.pop_front();
    if (!reached.insert(n).second) continue;
    for (const EdgeDef* e : out[n]) frontier.push_back(e->to);
  }
  for (const TaskId& n : AllNodes(dag)) {
    if (!reached.count(n)) add("unreachable from source", n);
  }
  return result;
}

std::vector<TaskId> TopologicalOrder(const DagDef& dag) {
  std::vector<TaskId> order = KahnOrder(dag);
  if (order.size() != AllNodes(dag).size()) {
    throw Error(ErrorCode::kInvariant, "dag '" + dag.name + "' has a cycle");
  }
  return order;
}

std::map<TaskId, double> ComputeCumulativeRates(const DagDef& dag,
                                                double source_rate) {
  std::map<TaskId, double> rate;
  for (const TaskId& n : AllNodes(dag)) rate[n] = 0.0;
  for (const TaskId& s : dag.source_tasks) rate[s] = source_rate;

  auto out = OutEdges(dag);
  for (const TaskId& n : TopologicalOrder(dag)) {
    const TaskDef* def = dag.FindTask(n);
    double output = rate[n] * (def ? def->selectivity : 1.0);
    const auto& edges = out[n];
    auto shuffles = std::count_if(edges.begin(), edges.end(), [](auto* e) {
      return e->grouping == Grouping::kShuffle;
    });
    for (const EdgeDef* e : edges) {
      rate[e->to] += e->grouping == Grouping::kDuplicate
                         ? output
                         : output / static_cast<double>(shuffles);
    }
  }
  return rate;
}

int MinInstances(double rate, double rate_per_instance) {
  if (!(rate_per_instance > 0.0)) {
    throw Error(ErrorCode::kInvariant, "rate per instance must be positive");
  }
  // Tolerate float noise from accumulated rates (24.000000001 -> 3).
  double ratio = rate / rate_per_instance;
  int n = static_cast<int>(std::ceil(ratio - 1e-9));
  return std::max(1, n);
}

double PathMultiplicity(const DagDef& dag) {
  auto rates = ComputeCumulativeRates(dag, 1.0);
  double total = 0.0;
  for (const TaskId& s : dag.sink_tasks) total += rates[s];
  return total;
}

std::vector<InstanceId> EnumerateInstances(const DagDef& dag) {
  std::vector<InstanceId> out;
  for (const TaskDef& t : dag.tasks) {
    for (int k = 0; k < t.instance_count; ++k) out.push_back({t.task_id, k});
  }
  return out;
}

int TotalSlots(std::span<const VmDef> vms) {
  int total = 0;
  for (const VmDef& vm : vms) total += vm.slot_count;
  return total;
}

Schedule RoundRobinPlacement(std::span<const InstanceId> instances,
                             std::span<const VmDef> vms) {
  if (static_cast<int>(instances.size()) > TotalSlots(vms)) {
    throw Error(ErrorCode::kInsufficientSlots,
                std::to_string(instances.size()) + " instances exceed " +
                    std::to_string(TotalSlots(vms)) + " slots");
  }
  std::vector<int> used(vms.size(), 0);
  Schedule schedule;
  std::size_t cursor = 0;
  for (const InstanceId& inst : instances) {
    // At least one VM has room, so this terminates within one cycle.
    while (used[cursor] >= vms[cursor].slot_count) {
      cursor = (cursor + 1) % vms.size();
    }
    schedule.placements[inst] = {vms[cursor].vm_id, used[cursor]++};
    cursor = (cursor + 1) % vms.size();
  }
  return schedule;
}

ValidationResult ValidateSchedule(const Schedule& schedule, const DagDef& dag,
                                  std::span<const VmDef> vms) {
  ValidationResult result;
  std::map<VmId, int> slots;
  for (const VmDef& vm : vms) {
    if (vm.slot_count < 1) {
      result.violations.push_back({"vm slot count below 1", vm.vm_id});
    }
    slots[vm.vm_id] = vm.slot_count;
  }
  std::set<Placement> taken;
  for (const auto& [inst, place] : schedule.placements) {
    const TaskDef* def = dag.FindTask(inst.task);
    if (!def || inst.ordinal >= def->instance_count) {
      result.violations.push_back({"unknown instance", inst.ToString()});
    }
    auto vm = slots.find(place.vm_id);
    if (vm == slots.end()) {
      result.violations.push_back({"unknown vm", inst.ToString()});
    } else if (place.slot_index < 0 || place.slot_index >= vm->second) {
      result.violations.push_back({"slot out of range", inst.ToString()});
    }
    if (!taken.insert(place).second) {
      result.violations.push_back({"slot shared", inst.ToString()});
    }
  }
  for (const InstanceId& inst : EnumerateInstances(dag)) {
    if (!schedule.placements.count(inst)) {
      result.violations.push_back({"instance not placed", inst.ToString()});
    }
  }
  return result;
}

}  // namespace flowmigrate

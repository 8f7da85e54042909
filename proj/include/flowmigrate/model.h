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

// Dataflow topologies, cluster resources and placements.
//
// A DagDef lists user tasks plus pseudo source and sink tasks. Sources and
// sinks are never placed on VM slots and never migrate; only user task
// instances appear in a Schedule.

#ifndef FLOWMIGRATE_MODEL_H_
#define FLOWMIGRATE_MODEL_H_

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowmigrate/sim_time.h"

namespace flowmigrate {

using TaskId = std::string;
using VmId = std::string;

struct TaskDef {
  TaskId task_id;
  std::string name;
  Duration service_time{100};
  double selectivity = 1.0;
  bool stateful = true;
  int instance_count = 1;
};

// DUPLICATE edges each carry a full copy of the parent's output. The SHUFFLE
// edges leaving one task form a group that splits the output round-robin.
// Within a child task, instances are always chosen round-robin.
enum class Grouping { kDuplicate, kShuffle };

struct EdgeDef {
  TaskId from;
  TaskId to;
  Grouping grouping = Grouping::kDuplicate;
};

struct DagDef {
  std::string name;
  std::vector<TaskDef> tasks;  // user tasks only
  std::vector<EdgeDef> edges;
  std::vector<TaskId> source_tasks;
  std::vector<TaskId> sink_tasks;

  const TaskDef* FindTask(const TaskId& id) const;
  bool IsSource(const TaskId& id) const;
  bool IsSink(const TaskId& id) const;
  int TotalInstances() const;
};

struct VmDef {
  VmId vm_id;
  int slot_count = 1;
};

struct InstanceId {
  TaskId task;
  int ordinal = 0;

  std::string ToString() const;  // "task#ordinal"
  static std::optional<InstanceId> Parse(const std::string& text);

  auto operator<=>(const InstanceId&) const = default;
};

struct Placement {
  VmId vm_id;
  int slot_index = 0;

  auto operator<=>(const Placement&) const = default;
};

struct Schedule {
  std::map<InstanceId, Placement> placements;

  bool operator==(const Schedule&) const = default;
};

struct Violation {
  std::string kind;     // "cycle", "sink has out-edge", ...
  std::string subject;  // offending task or edge
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(std::string_view kind) const;
};

ValidationResult ValidateDag(const DagDef& dag);

// Input events/sec reaching every task (user, source and sink). Sources
// receive `source_rate`; a task's input is the sum over in-edges of the
// parent's output rate (input x selectivity), split across SHUFFLE groups.
std::map<TaskId, double> ComputeCumulativeRates(const DagDef& dag,
                                                double source_rate);

int MinInstances(double rate, double rate_per_instance);

// Sink arrivals produced per source event, i.e. the number of distinct
// source-to-sink paths under DUPLICATE fan-out (selectivity 1).
double PathMultiplicity(const DagDef& dag);

// Tasks in dependency order (sources first). Requires an acyclic DAG.
std::vector<TaskId> TopologicalOrder(const DagDef& dag);

// Instances of every user task, in task-list order then by ordinal.
std::vector<InstanceId> EnumerateInstances(const DagDef& dag);

// Storm-style round-robin: instance k goes to the next VM (cycling in
// order) that still has a free slot. Throws kInsufficientSlots.
Schedule RoundRobinPlacement(std::span<const InstanceId> instances,
                             std::span<const VmDef> vms);

// Checks every Schedule invariant against the DAG and VM set.
ValidationResult ValidateSchedule(const Schedule& schedule, const DagDef& dag,
                                  std::span<const VmDef> vms);

int TotalSlots(std::span<const VmDef> vms);

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_MODEL_H_

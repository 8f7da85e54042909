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

#include <map>
#include <vector>

#include "flowmigrate/bundled.h"
#include "flowmigrate/errors.h"
#include "flowmigrate/model.h"

namespace flowmigrate {
namespace {

TEST(ValidateDagTest, LinearChainIsValid) {
  EXPECT_TRUE(ValidateDag(*BundledDag("linear")).ok());
}

TEST(ValidateDagTest, BackEdgeIsACycle) {
  DagDef dag = *BundledDag("linear");
  dag.edges.push_back({"T5", "T1", Grouping::kDuplicate});
  ValidationResult r = ValidateDag(dag);
  EXPECT_TRUE(r.Has("cycle"));
}

TEST(ValidateDagTest, SinkWithOutEdge) {
  DagDef dag = *BundledDag("linear");
  dag.edges.push_back({dag.sink_tasks.front(), "T1", Grouping::kDuplicate});
  EXPECT_TRUE(ValidateDag(dag).Has("sink has out-edge"));
}

TEST(ValidateDagTest, AllBundledDagsAreValid) {
  for (const std::string& name : SuiteDagNames()) {
    EXPECT_TRUE(ValidateDag(*BundledDag(name)).ok()) << name;
  }
  EXPECT_TRUE(ValidateDag(*BundledDag("linear50")).ok());
}

TEST(CumulativeRatesTest, LinearPassesRateThrough) {
  auto rates = ComputeCumulativeRates(*BundledDag("linear"), 8.0);
  for (int i = 1; i <= 5; ++i) {
    EXPECT_DOUBLE_EQ(rates.at("T" + std::to_string(i)), 8.0);
  }
}

TEST(CumulativeRatesTest, DiamondJoinSumsInEdges) {
  auto rates = ComputeCumulativeRates(*BundledDag("diamond"), 8.0);
  EXPECT_DOUBLE_EQ(rates.at("E"), 24.0);
}

TEST(CumulativeRatesTest, GridPeaksAt32) {
  DagDef grid = *BundledDag("grid");
  auto rates = ComputeCumulativeRates(grid, 8.0);
  double peak = 0;
  for (const TaskDef& t : grid.tasks) peak = std::max(peak, rates.at(t.task_id));
  EXPECT_DOUBLE_EQ(peak, 32.0);
  EXPECT_DOUBLE_EQ(PathMultiplicity(grid), 4.0);
}

TEST(MinInstancesTest, Examples) {
  EXPECT_EQ(MinInstances(8, 8), 1);
  EXPECT_EQ(MinInstances(24, 8), 3);
  EXPECT_EQ(MinInstances(25, 8), 4);
}

TEST(InstanceCountTest, GridHas21) {
  EXPECT_EQ(BundledDag("grid")->TotalInstances(), 21);
}

TEST(InstanceIdTest, RoundTrip) {
  InstanceId id{"T3", 2};
  EXPECT_EQ(id.ToString(), "T3#2");
  EXPECT_EQ(InstanceId::Parse("T3#2"), id);
  EXPECT_FALSE(InstanceId::Parse("T3").has_value());
}

std::vector<VmDef> MakeVms(int count, int slots) {
  std::vector<VmDef> vms;
  for (int i = 1; i <= count; ++i) vms.push_back({"vm" + std::to_string(i), slots});
  return vms;
}

std::vector<InstanceId> MakeInstances(int n) {
  std::vector<InstanceId> out;
  for (int i = 0; i < n; ++i) out.push_back({"T", i});
  return out;
}

TEST(RoundRobinTest, FiveOverThreeVms) {
  auto vms = MakeVms(3, 2);
  auto instances = MakeInstances(5);
  Schedule s = RoundRobinPlacement(instances, vms);
  std::vector<std::string> pattern;
  for (const InstanceId& id : instances) pattern.push_back(s.placements.at(id).vm_id);
  EXPECT_EQ(pattern, (std::vector<std::string>{"vm1", "vm2", "vm3", "vm1", "vm2"}));
}

TEST(RoundRobinTest, EvenDivision) {
  auto vms = MakeVms(2, 4);
  Schedule s = RoundRobinPlacement(MakeInstances(8), vms);
  std::map<std::string, int> per_vm;
  for (const auto& [id, p] : s.placements) ++per_vm[p.vm_id];
  EXPECT_EQ(per_vm["vm1"], 4);
  EXPECT_EQ(per_vm["vm2"], 4);
}

TEST(RoundRobinTest, InsufficientSlots) {
  auto vms = MakeVms(2, 3);
  try {
    RoundRobinPlacement(MakeInstances(8), vms);
    FAIL() << "expected insufficient slots";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSlots);
  }
}

TEST(ValidateScheduleTest, DoubleBookedSlotIsRejected) {
  DagDef dag = *BundledDag("linear");
  auto vms = MakeVms(3, 2);
  Schedule s = RoundRobinPlacement(EnumerateInstances(dag), vms);
  EXPECT_TRUE(ValidateSchedule(s, dag, vms).ok());
  s.placements.at({"T2", 0}) = s.placements.at({"T1", 0});
  EXPECT_FALSE(ValidateSchedule(s, dag, vms).ok());
}

TEST(TopologicalOrderTest, LinearIsInChainOrder) {
  auto order = TopologicalOrder(*BundledDag("linear"));
  std::vector<TaskId> tasks;
  for (const TaskId& t : order) {
    if (t.starts_with("T")) tasks.push_back(t);
  }
  EXPECT_EQ(tasks, (std::vector<TaskId>{"T1", "T2", "T3", "T4", "T5"}));
}

}  // namespace
}  // namespace flowmigrate

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

#include <vector>

#include "flowmigrate/errors.h"
#include "flowmigrate/metrics.h"
#include "flowmigrate/protocol.h"
#include "flowmigrate/simulation.h"
#include "flowmigrate/suite.h"
#include "test_support.h"

namespace flowmigrate {
namespace {

using testing::Config;
using testing::SmallLinear;

const WaveState* FindWave(const Coordinator& c, EventKind kind) {
  for (const auto& [id, w] : c.waves()) {
    if (w.kind == kind && w.migration) return &w;
  }
  return nullptr;
}

TEST(ProtocolTest, DcrDrainOfIdleChainTakesFiveServiceTimes) {
  auto doc = SmallLinear("DCR");
  doc["sourceRate"] = 0.5;  // one root every 2s, done 500ms later
  doc["migrationTriggerAt"] = "41s";
  RunResult run = RunSimulation(Config(doc));
  SimTime request = *run.timeline.FindPhase(PhaseMarker::kRequest);
  SimTime drained = *run.timeline.FindPhase(PhaseMarker::kDrainDone);
  EXPECT_GE(drained - request, Duration(500));
  EXPECT_LE(drained - request, Duration(600));
  // The COMMIT wave follows the same path before the rebalance starts.
  auto drain = ComputeDrainCaptureDuration(run.timeline, StrategyKind::kDcr);
  ASSERT_TRUE(drain.has_value());
  EXPECT_GE(*drain, Duration(1'000));
  EXPECT_EQ(InFlightAtRequest(run.timeline), 0u);
}

TEST(ProtocolTest, MigrationBeforeAnyDataCompletes) {
  RunOptions options;
  options.setup = [&](Engine&, Coordinator& c) {
    c.RequestMigration();  // at t = 0, before any data
  };
  auto doc = SmallLinear("DCR");
  doc["migrate"] = false;
  RunResult run = RunSimulation(Config(doc), options);
  ASSERT_EQ(run.migration, MigrationState::kDone);
  EXPECT_EQ(run.engine.replays, 0u);
}

TEST(ProtocolTest, DcrWavesAckInChainOrder) {
  RunOptions options;
  std::vector<InstanceId> prepare_order;
  std::vector<InstanceId> init_order;
  options.setup = [&](Engine& engine, Coordinator& c) {
    engine.clock().ScheduleAt(SimTime(149'000), [&] {
      if (const WaveState* w = FindWave(c, EventKind::kPrepare)) {
        prepare_order = c.ack_order(w->wave_id);
      }
      if (const WaveState* w = FindWave(c, EventKind::kInit)) {
        init_order = c.ack_order(w->wave_id);
      }
    });
  };
  RunSimulation(Config(SmallLinear("DCR")), options);
  std::vector<InstanceId> chain{{"T1", 0}, {"T2", 0}, {"T3", 0}, {"T4", 0},
                                {"T5", 0}};
  EXPECT_EQ(prepare_order, chain);
  EXPECT_EQ(init_order, chain);
}

TEST(ProtocolTest, CcrCapturesWithoutLossOrReplay) {
  RunResult run = RunSimulation(Config(SmallLinear("CCR")));
  ASSERT_EQ(run.migration, MigrationState::kDone);
  EXPECT_GT(run.engine.captured, 0u);
  EXPECT_EQ(run.engine.replays, 0u);
  AuditResult audit = ExactlyOnceAudit(run.timeline, 1, false);
  EXPECT_TRUE(audit.pass);
  EXPECT_GT(run.protocol.duplicate_inits, 0u);
}

TEST(ProtocolTest, CcrBroadcastInitReachesEveryInstance) {
  RunOptions options;
  std::size_t acked = 0;
  WaveRouting routing = WaveRouting::kSequential;
  options.setup = [&](Engine& engine, Coordinator& c) {
    engine.clock().ScheduleAt(SimTime(149'000), [&] {
      const WaveState* w = FindWave(c, EventKind::kInit);
      ASSERT_NE(w, nullptr);
      acked = w->acked_by.size();
      routing = w->routing;
    });
  };
  RunSimulation(Config(SmallLinear("CCR")), options);
  EXPECT_EQ(acked, 5u);
  EXPECT_EQ(routing, WaveRouting::kBroadcast);
}

TEST(ProtocolTest, StrategiesPreserveStateExceptDsm) {
  auto baseline_doc = SmallLinear("CCR");
  baseline_doc["migrate"] = false;
  auto baseline = RunSimulation(Config(baseline_doc)).TaskTotals();
  for (const char* s : {"DCR", "CCR"}) {
    RunResult run = RunSimulation(Config(SmallLinear(s)));
    EXPECT_EQ(run.TaskTotals(), baseline) << s;
    EXPECT_TRUE(ExactlyOnceAudit(run.timeline, 1, false).pass) << s;
  }
}

TEST(ProtocolTest, DsmLosesInFlightAndReplaysThem) {
  RunResult run = RunSimulation(Config(SmallLinear("DSM")));
  ASSERT_EQ(run.migration, MigrationState::kDone);
  EXPECT_GT(InFlightAtRequest(run.timeline), 0u);
  EXPECT_GT(run.engine.dropped_at_killed, 0u);
  EXPECT_GT(run.engine.replays, 0u);
  EXPECT_TRUE(ExactlyOnceAudit(run.timeline, 1, true).pass);
  EXPECT_EQ(run.protocol.killed, 5u);
}

TEST(ProtocolTest, DsmRestoresFromPeriodicCheckpoint) {
  RunResult run = RunSimulation(Config(SmallLinear("DSM")));
  EXPECT_GE(run.protocol.periodic_checkpoints, 1u);
  ASSERT_FALSE(run.rollbacks.empty());
  for (const auto& [key, rolled] : run.rollbacks) {
    EXPECT_GE(rolled, 0) << key;
    EXPECT_LE(rolled, 30 * 8) << key;
  }
}

TEST(ProtocolTest, DroppedPrepareTimesOutAndRollsBack) {
  auto doc = SmallLinear("DSM");
  doc["migrate"] = false;
  RunOptions options;
  options.setup = [](Engine&, Coordinator& c) {
    c.DropNextControl({"T3", 0}, EventKind::kPrepare);
  };
  RunResult run = RunSimulation(Config(doc), options);
  EXPECT_EQ(run.protocol.rollbacks, 1u);
  EXPECT_GE(run.protocol.periodic_checkpoints, 1u);
  EXPECT_TRUE(ExactlyOnceAudit(run.timeline, 1, true).pass);
}

TEST(ProtocolTest, IdentityScheduleKillsNothing) {
  auto doc = SmallLinear("CCR");
  doc["vmsAfter"] = doc["vmsBefore"];
  RunResult run = RunSimulation(Config(doc));
  EXPECT_EQ(run.protocol.killed, 0u);
  EXPECT_EQ(ComputeRebalanceDuration(run.timeline), Duration(2'000));
  EXPECT_EQ(run.migration, MigrationState::kDone);
}

TEST(ProtocolTest, MigrationRequestListsMovedInstances) {
  auto doc = SmallLinear("CCR");
  doc["dag"] = "grid";
  doc["vmsBefore"] = testing::Vms("d2-", 11, 2);
  doc["vmsAfter"] = testing::Vms("d3-", 6, 4);
  ScenarioConfig c = Config(doc);
  EXPECT_EQ(c.schedule_after.placements.size(), 21u);
  EXPECT_EQ(TotalSlots(c.vms_after), 24);
  MigrationRequest req = MakeMigrationRequest(c, SimTime(180'000));
  EXPECT_EQ(req.migrating.size(), 21u);
}

TEST(ProtocolTest, SecondRequestWhileMigratingConflicts) {
  RunOptions options;
  options.setup = [](Engine& engine, Coordinator& c) {
    engine.clock().ScheduleAt(SimTime(40'001), [&c] {
      try {
        c.RequestMigration();
        ADD_FAILURE() << "expected a wave conflict";
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kWaveConflict);
      }
    });
  };
  RunSimulation(Config(SmallLinear("DCR")), options);
}

}  // namespace
}  // namespace flowmigrate

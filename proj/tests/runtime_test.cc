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

#include <algorithm>
#include <vector>

#include "flowmigrate/errors.h"
#include "flowmigrate/runtime.h"
#include "flowmigrate/sim_clock.h"
#include "flowmigrate/timeline.h"
#include "test_support.h"

namespace flowmigrate {
namespace {

struct Harness {
  explicit Harness(std::string_view strategy)
      : config(testing::Config(testing::SmallLinear(strategy))),
        engine(config, clock, timeline) {}

  std::vector<TimelineRecord> At(Site site) const {
    std::vector<TimelineRecord> out;
    for (const auto& r : timeline.records()) {
      if (r.site == site) out.push_back(r);
    }
    return out;
  }

  ScenarioConfig config;
  SimClock clock;
  Timeline timeline;
  Engine engine;
};

TEST(RuntimeTest, SourceEmitsEightPerSecond) {
  Harness h("CCR");
  h.engine.Start();
  h.clock.RunUntil(SimTime(999));
  auto emits = h.At(Site::kSourceEmit);
  ASSERT_EQ(emits.size(), 8u);
  for (std::size_t i = 0; i < emits.size(); ++i) {
    EXPECT_EQ(emits[i].root_seq, i);
    EXPECT_EQ(emits[i].epoch, 0);
  }
}

TEST(RuntimeTest, FirstSinkExitAfterFiveServiceTimes) {
  Harness h("CCR");
  h.engine.Start();
  h.clock.RunUntil(SimTime(2000));
  auto exits = h.At(Site::kSinkExit);
  ASSERT_FALSE(exits.empty());
  EXPECT_EQ(exits.front().ts, SimTime(500));
  EXPECT_EQ(exits.front().root_seq, 0u);
}

TEST(RuntimeTest, PausedSourceBuildsBacklogThenBursts) {
  Harness h("CCR");
  h.engine.PauseSource();
  h.engine.Start();
  h.clock.RunUntil(SimTime(9'999));
  EXPECT_TRUE(h.At(Site::kSourceEmit).empty());
  EXPECT_EQ(h.engine.counters().max_backlog, 80u);
  h.engine.UnpauseSource();
  auto burst = h.At(Site::kSourceEmit);
  EXPECT_EQ(burst.size(), 80u);
  EXPECT_TRUE(std::all_of(burst.begin(), burst.end(), [](const auto& r) {
    return r.ts == SimTime(9'875);
  }));
}

TEST(RuntimeTest, UnpauseWithEmptyBacklogEmitsNothing) {
  Harness h("CCR");
  h.engine.Start();
  h.clock.RunUntil(SimTime(0));
  h.engine.PauseSource();
  std::size_t before = h.At(Site::kSourceEmit).size();
  h.engine.UnpauseSource();
  EXPECT_EQ(h.At(Site::kSourceEmit).size(), before);
}

TEST(RuntimeTest, CaptureFlagParksDataInPendingList) {
  Harness h("CCR");
  h.engine.instance({"T1", 0}).capture_flag = true;
  h.engine.Start();
  h.clock.RunUntil(SimTime(999));
  EXPECT_EQ(h.engine.instance({"T1", 0}).pending_list.size(), 8u);
  EXPECT_EQ(h.engine.instance({"T1", 0}).user_state.processed_count, 0u);
  EXPECT_TRUE(h.At(Site::kSinkExit).empty());
}

TEST(RuntimeTest, KilledInstanceDropsDataAndRootsStayIncomplete) {
  Harness h("DSM");
  h.engine.Start();
  h.clock.RunUntil(SimTime(5'000));
  h.engine.Kill({"T3", 0});
  h.clock.RunUntil(SimTime(6'000));
  // Only events already past T3 reach the sink.
  for (const auto& r : h.At(Site::kSinkExit)) EXPECT_LE(r.ts, SimTime(5'200));
  EXPECT_GE(h.engine.counters().dropped_at_killed, 8u);
  int incomplete = 0;
  for (const auto& r : h.At(Site::kSourceEmit)) {
    if (r.ts < SimTime(4'600)) continue;
    const AckerEntry* e = h.engine.data_acker().Find(r.event_id);
    if (e != nullptr && !e->completed && e->xor_hash != 0) ++incomplete;
  }
  EXPECT_GE(incomplete, 8);
}

TEST(RuntimeTest, TimedOutRootsAreReplayed) {
  Harness h("DSM");
  h.engine.Start();
  h.clock.RunUntil(SimTime(5'000));
  h.engine.Kill({"T3", 0});
  h.clock.RunUntil(SimTime(70'000));
  auto replays = h.At(Site::kReplay);
  ASSERT_FALSE(replays.empty());
  // Sweeps run every 30s; roots sent after t=0 expire at the 60s sweep.
  EXPECT_EQ(replays.front().ts, SimTime(60'000));
  EXPECT_TRUE(replays.front().replayed);
}

TEST(RuntimeTest, KillingTwiceIsAnInvariantBreach) {
  Harness h("CCR");
  h.engine.Start();
  h.engine.Kill({"T2", 0});
  EXPECT_THROW(h.engine.Kill({"T2", 0}), Error);
}

TEST(RuntimeTest, DemoTaskCodecRoundTrip) {
  DemoUserTask t{.processed_count = 1234567, .last_seq_no = 99};
  Blob b = t.Encode();
  EXPECT_EQ(b.size(), 16u);
  EXPECT_EQ(DemoUserTask::Decode(b), t);
}

TEST(RuntimeTest, ChildInstancesAndUpstreamCopies) {
  Harness h("CCR");
  EXPECT_EQ(h.engine.ChildInstances({"T1", 0}),
            (std::vector<InstanceId>{{"T2", 0}}));
  EXPECT_EQ(h.engine.UpstreamCopies({"T1", 0}), 1);
  EXPECT_EQ(h.engine.EntryInstances(), (std::vector<InstanceId>{{"T1", 0}}));
}

}  // namespace
}  // namespace flowmigrate

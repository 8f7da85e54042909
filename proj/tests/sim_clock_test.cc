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

#include "flowmigrate/sim_clock.h"
#include "flowmigrate/sim_time.h"

namespace flowmigrate {
namespace {

TEST(SimClockTest, RunsInTimeOrder) {
  SimClock clock;
  std::vector<int> seen;
  clock.ScheduleAt(SimTime(30), [&] { seen.push_back(3); });
  clock.ScheduleAt(SimTime(10), [&] { seen.push_back(1); });
  clock.ScheduleAt(SimTime(20), [&] { seen.push_back(2); });
  clock.RunUntil(SimTime(100));
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(clock.now(), SimTime(30));
}

TEST(SimClockTest, TiesKeepScheduleOrder) {
  SimClock clock;
  std::vector<int> seen;
  for (int i = 0; i < 5; ++i) {
    clock.ScheduleAt(SimTime(7), [&, i] { seen.push_back(i); });
  }
  clock.RunUntil(SimTime(7));
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(SimClockTest, ActionsCanScheduleMore) {
  SimClock clock;
  int fired = 0;
  std::function<void()> tick = [&] {
    if (++fired < 3) clock.ScheduleAfter(Duration(5), tick);
  };
  clock.ScheduleAt(SimTime(0), tick);
  clock.RunUntil(SimTime(100));
  EXPECT_EQ(fired, 3);
  EXPECT_EQ(clock.now(), SimTime(10));
  EXPECT_EQ(clock.executed(), 3u);
}

TEST(SimClockTest, RunUntilStopsAtLimit) {
  SimClock clock;
  int fired = 0;
  clock.ScheduleAt(SimTime(5), [&] { ++fired; });
  clock.ScheduleAt(SimTime(6), [&] { ++fired; });
  clock.RunUntil(SimTime(5));
  EXPECT_EQ(fired, 1);
  EXPECT_EQ(clock.pending(), 1u);
}

TEST(DurationTest, ParsesUnits) {
  EXPECT_EQ(ParseDuration("30s", "f"), Duration(30'000));
  EXPECT_EQ(ParseDuration("7.26s", "f"), Duration(7'260));
  EXPECT_EQ(ParseDuration("250ms", "f"), Duration(250));
}

}  // namespace
}  // namespace flowmigrate

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

#include <string>

#include "flowmigrate/errors.h"
#include "flowmigrate/scenario.h"
#include "test_support.h"

namespace flowmigrate {
namespace {

using testing::Config;
using testing::Vms;

ConfigError ParseError(const std::string& text) {
  try {
    ParseScenario(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a ConfigError";
  return ConfigError(ErrorCode::kInternal, "", "");
}

TEST(ScenarioTest, MinimalDocumentTakesDefaults) {
  ScenarioConfig c = Config({{"dag", "linear"},
                             {"strategy", "CCR"},
                             {"vmsBefore", Vms("d2-", 3, 2)}});
  EXPECT_EQ(c.strategy, StrategyKind::kCcr);
  EXPECT_DOUBLE_EQ(c.source_rate, 8.0);
  EXPECT_EQ(c.ack_timeout, Duration(30'000));
  EXPECT_EQ(c.checkpoint_interval, Duration(30'000));
  EXPECT_EQ(c.init_resend_interval, Duration(1'000));
  EXPECT_EQ(c.rebalance_duration, Duration(7'260));
  EXPECT_EQ(c.AckSweepInterval(), c.ack_timeout);
  EXPECT_EQ(c.schedule_before.placements.size(), 5u);
  EXPECT_EQ(c.schedule_after, c.schedule_before);
}

TEST(ScenarioTest, TriggerAtOrAfterRunIsRejected) {
  auto doc = testing::SmallLinear("DCR");
  doc["migrationTriggerAt"] = "150s";
  ConfigError e = ParseError(doc.dump());
  EXPECT_EQ(e.code(), ErrorCode::kInvariant);
  EXPECT_EQ(e.field(), "migrationTriggerAt");
}

TEST(ScenarioTest, UnknownStrategyNamesField) {
  auto doc = testing::SmallLinear("XYZ");
  ConfigError e = ParseError(doc.dump());
  EXPECT_EQ(e.code(), ErrorCode::kParse);
  EXPECT_EQ(e.field(), "strategy");
}

TEST(ScenarioTest, SyntaxErrorReportsLine) {
  ConfigError e = ParseError("{\n  \"dag\": \"linear\",\n  oops\n}");
  EXPECT_EQ(e.code(), ErrorCode::kParse);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
}

TEST(ScenarioTest, TooFewTargetSlots) {
  auto doc = testing::SmallLinear("CCR");
  doc["vmsAfter"] = Vms("d3-", 1, 4);
  EXPECT_EQ(ParseError(doc.dump()).code(), ErrorCode::kInsufficientSlots);
}

TEST(ScenarioTest, UnderProvisionedTaskIsRejected) {
  auto doc = testing::SmallLinear("CCR");
  doc["sourceRate"] = 20;
  EXPECT_TRUE(ParseError(doc.dump()).field().starts_with("dag"));
}

TEST(ScenarioTest, DurationsAcceptStringsAndMillis) {
  auto doc = testing::SmallLinear("DSM");
  doc["ackTimeout"] = 5000;
  doc["rebalanceDuration"] = "1.5s";
  ScenarioConfig c = Config(doc);
  EXPECT_EQ(c.ack_timeout, Duration(5000));
  EXPECT_EQ(c.rebalance_duration, Duration(1500));
  EXPECT_TRUE(c.DataAckingEnabled());
}

TEST(ScenarioTest, ExpectedOutputRateFollowsPaths) {
  auto doc = testing::SmallLinear("CCR");
  doc["dag"] = "grid";
  doc["vmsBefore"] = Vms("d2-", 11, 2);
  doc["vmsAfter"] = Vms("d3-", 6, 4);
  EXPECT_DOUBLE_EQ(Config(doc).ExpectedOutputRate(), 32.0);
}

TEST(ScenarioTest, StrategyNames) {
  EXPECT_EQ(ParseStrategy("DSM"), StrategyKind::kDsm);
  EXPECT_EQ(ParseStrategy("DCR"), StrategyKind::kDcr);
  EXPECT_EQ(ParseStrategy("CCR"), StrategyKind::kCcr);
  EXPECT_FALSE(ParseStrategy("ccr2").has_value());
  EXPECT_EQ(StrategyName(StrategyKind::kDcr), "DCR");
}

TEST(ScenarioTest, MissingFile) {
  try {
    LoadScenario("/nonexistent/scenario.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

}  // namespace
}  // namespace flowmigrate

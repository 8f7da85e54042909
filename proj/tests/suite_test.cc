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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "flowmigrate/errors.h"
#include "flowmigrate/scenario.h"
#include "flowmigrate/simulation.h"
#include "flowmigrate/suite.h"
#include "json.hpp"
#include "test_support.h"

namespace flowmigrate {
namespace {

namespace fs = std::filesystem;

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("flowmigrate_" + name);
  fs::remove_all(dir);
  return dir;
}

int RunCli(const std::string& args) {
  std::string cmd = std::string(FLOWMIGRATE_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(SuiteTest, RunScenarioWritesArtifactsOnce) {
  fs::path out = FreshDir("run_artifacts");
  ScenarioConfig c = testing::Config(testing::SmallLinear("CCR"));
  RunSummary s = RunScenario(c, out);
  ASSERT_TRUE(fs::exists(out / "timeline.csv"));
  ASSERT_TRUE(fs::exists(out / "report.json"));

  std::ifstream csv(out / "timeline.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "ts_ms,site,event_id,root_seq,epoch,replayed,phase");

  std::ifstream json_in(out / "report.json");
  nlohmann::json report = nlohmann::json::parse(json_in);
  EXPECT_EQ(report["strategy"], "CCR");
  EXPECT_EQ(report["restoreDurationMs"], s.report.restore.count());

  try {
    RunScenario(c, out);
    FAIL() << "expected existing outputs to be refused";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  fs::remove_all(out);
}

TEST(SuiteTest, SameSeedSameTimeline) {
  ScenarioConfig c = testing::Config(testing::SmallLinear("DSM"));
  RunResult a = RunSimulation(c);
  RunResult b = RunSimulation(c);
  EXPECT_EQ(a.timeline.records(), b.timeline.records());
  EXPECT_EQ(TimelineCsv(a.timeline), TimelineCsv(b.timeline));
}

TEST(SuiteTest, SeedChangesStartupDraws) {
  ScenarioConfig c = testing::Config(testing::SmallLinear("CCR"));
  Overrides o;
  o.seed = 7;
  ScenarioConfig other = ApplyOverrides(c, o);
  EXPECT_EQ(other.random_seed, 7u);
  EXPECT_NE(TimelineCsv(RunSimulation(c).timeline),
            TimelineCsv(RunSimulation(other).timeline));
}

TEST(SuiteTest, OverridesAreValidated) {
  ScenarioConfig c = testing::Config(testing::SmallLinear("CCR"));
  Overrides o;
  o.strategy = StrategyKind::kDsm;
  o.ack_timeout = Duration(5'000);
  ScenarioConfig applied = ApplyOverrides(c, o);
  EXPECT_EQ(applied.strategy, StrategyKind::kDsm);
  EXPECT_EQ(applied.ack_timeout, Duration(5'000));
  o.ack_timeout = Duration(0);
  EXPECT_THROW(ApplyOverrides(c, o), ConfigError);
}

TEST(SuiteTest, CompareStrategiesOnSmallLinear) {
  ScenarioConfig c = testing::Config(testing::SmallLinear("CCR"));
  Comparison cmp = CompareStrategies(c);
  ASSERT_EQ(cmp.runs.size(), 3u);
  EXPECT_EQ(cmp.runs.at(StrategyKind::kDcr).report.replayed_count, 0u);
  EXPECT_EQ(cmp.runs.at(StrategyKind::kCcr).report.replayed_count, 0u);
  EXPECT_GT(cmp.runs.at(StrategyKind::kDsm).report.replayed_count, 0u);
  EXPECT_FALSE(FormatComparison(cmp).empty());
  for (const auto& [s, run] : cmp.runs) EXPECT_TRUE(run.audit.pass);
}

TEST(SuiteTest, BundledScenariosParse) {
  for (const std::string& name : SuiteScenarioNames()) {
    ScenarioConfig c = LoadScenario(std::string(FLOWMIGRATE_SCENARIOS) + "/" +
                                    name + ".json");
    EXPECT_EQ(c.name, name);
    EXPECT_EQ(c.schedule_before.placements.size(),
              static_cast<std::size_t>(c.dag.TotalInstances()));
  }
  ScenarioConfig stress = LoadScenario(std::string(FLOWMIGRATE_SCENARIOS) + "/" +
                                       kStressScenario + ".json");
  EXPECT_EQ(stress.dag.TotalInstances(), 50);
}

TEST(CliTest, MissingScenarioExitsTwo) {
  EXPECT_EQ(RunCli("run /nonexistent/scenario.json"), 2);
}

TEST(CliTest, BadStrategyExitsTwo) {
  EXPECT_EQ(RunCli(std::string("run ") + FLOWMIGRATE_SCENARIOS +
                   "/linear_scalein.json --strategy XYZ"),
            2);
}

TEST(CliTest, RunWritesOutputs) {
  fs::path out = FreshDir("cli_run");
  EXPECT_EQ(RunCli(std::string("run ") + FLOWMIGRATE_SCENARIOS +
                   "/linear_scalein.json --strategy DCR --out " + out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_EQ(RunCli(std::string("run ") + FLOWMIGRATE_SCENARIOS +
                   "/linear_scalein.json --strategy DCR --out " + out.string()),
            2);
  fs::remove_all(out);
}

}  // namespace
}  // namespace flowmigrate

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


// Scenario runs, strategy comparisons and the bundled reproduction suite
// with its acceptance checks.

#ifndef FLOWMIGRATE_SUITE_H_
#define FLOWMIGRATE_SUITE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowmigrate/metrics.h"
#include "flowmigrate/runtime.h"
#include "flowmigrate/scenario.h"
#include "flowmigrate/simulation.h"

namespace flowmigrate {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Per-run facts needed by comparisons and acceptance checks. The timeline
// itself is not kept.
struct RunSummary {
  std::string scenario;
  std::string dag;
  StrategyKind strategy = StrategyKind::kCcr;
  MetricsReport report;
  AuditResult audit;
  EngineCounters engine;
  ProtocolCounters protocol;
  bool settled = true;
  std::map<TaskId, std::uint64_t> task_totals;
  std::map<std::string, std::int64_t> rollbacks;
  std::vector<Spike> spikes;
  // Roots emitted before REQUEST that reached the sink after it.
  std::uint64_t in_flight_at_request = 0;
  bool epoch_boundary = true;
};

// True when every epoch-0 sink exit precedes every epoch-1 sink exit.
bool EpochBoundaryHolds(const Timeline& timeline);
std::uint64_t InFlightAtRequest(const Timeline& timeline);
RunSummary Summarize(const RunResult& run);

struct Overrides {
  std::optional<StrategyKind> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<Duration> ack_timeout;
  std::optional<Duration> rebalance_duration;
};

// Applies the overrides and re-validates. Throws ConfigError.
ScenarioConfig ApplyOverrides(ScenarioConfig config, const Overrides& o);

std::string TimelineCsv(const Timeline& timeline);

// Runs the scenario and writes timeline.csv and report.json into `out_dir`,
// which must not already hold results (kParse otherwise).
RunSummary RunScenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir,
                       double realtime_scale = 0.0);

struct Comparison {
  std::string scenario;
  std::map<StrategyKind, RunSummary> runs;
  std::vector<Check> checks;
};

// DSM, DCR and CCR on the same seed, run concurrently. Writes per-strategy
// results under `out_dir` when given.
Comparison CompareStrategies(
    const ScenarioConfig& config,
    const std::optional<std::filesystem::path>& out_dir = std::nullopt);
std::string FormatComparison(const Comparison& comparison);

// XOR acker against set-based bookkeeping over random causal trees.
Check XorOracleCheck(std::uint64_t seed, int trees, int max_nodes);

struct SuiteResult {
  std::vector<Comparison> comparisons;
  std::optional<Comparison> stress;
  std::vector<Check> criteria;
  bool pass() const;
};

// Scenario files of the suite, in run order; the stress scenario is kept
// separate.
std::vector<std::string> SuiteScenarioNames();
inline constexpr char kStressScenario[] = "linear50_stress";

// Runs the ten bundled scenarios (plus the stress scenario and the
// no-migration baselines) and evaluates every acceptance criterion.
SuiteResult ReproduceSuite(const std::filesystem::path& scenario_dir,
                           const Overrides& overrides = {});

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_SUITE_H_

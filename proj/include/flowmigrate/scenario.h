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

#ifndef FLOWMIGRATE_SCENARIO_H_
#define FLOWMIGRATE_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowmigrate/model.h"
#include "flowmigrate/sim_time.h"

namespace flowmigrate {

enum class StrategyKind { kDsm, kDcr, kCcr };

std::string_view StrategyName(StrategyKind s);  // "DSM", "DCR", "CCR"
std::optional<StrategyKind> ParseStrategy(std::string_view text);

// Store cost model: a fixed latency per persisted record plus a per-byte
// cost. The defaults put 2000 captured events (80 KB) at just under 100ms.
struct StoreLatencyModel {
  Duration per_record{3};
  double per_byte_ns = 1200.0;

  Duration Cost(std::size_t bytes) const;
};

struct ScenarioConfig {
  std::string name;
  DagDef dag;
  std::vector<VmDef> vms_before;
  std::vector<VmDef> vms_after;
  Schedule schedule_before;
  Schedule schedule_after;
  StrategyKind strategy = StrategyKind::kCcr;

  double source_rate = 8.0;  // events/sec per source task
  Duration run_duration{720'000};
  SimTime migration_trigger_at{180'000};
  Duration ack_timeout{30'000};
  Duration checkpoint_interval{30'000};  // periodic waves, DSM only
  Duration init_resend_interval{1'000};
  Duration rebalance_duration{7'260};
  Duration network_delay{0};
  std::uint64_t random_seed = 42;

  // When false the run is a no-migration baseline.
  bool migrate = true;
  double rate_per_instance = 8.0;
  // Respawned workers accept events only after a per-instance start-up
  // delay drawn uniformly from [min, min + jitter].
  Duration worker_startup_min{6'000};
  Duration worker_startup_jitter{24'000};
  // Unset: timed-out roots are failed in batches once per ackTimeout.
  std::optional<Duration> ack_sweep_interval;
  // DSM only: stateful tasks withhold acks until the covering checkpoint
  // commits.
  bool ack_on_commit = false;
  // Unset: acking for DATA events follows the strategy (on for DSM only).
  std::optional<bool> data_acking;
  StoreLatencyModel store_latency;
  // Simulated time past run_duration allowed for in-flight work to settle.
  Duration settle_limit{600'000};

  bool DataAckingEnabled() const {
    return data_acking.value_or(strategy == StrategyKind::kDsm);
  }
  double ExpectedOutputRate() const;
  Duration AckSweepInterval() const {
    return ack_sweep_interval.value_or(ack_timeout);
  }
};

// Parses a JSON scenario document. The "dag" field is either the name of a
// bundled DAG or an inline DAG object; schedules are explicit placement
// maps or the string "round-robin". Throws ConfigError on malformed input
// (kParse, with the line for syntax errors) and on invariant violations
// (kInvariant, naming the field).
ScenarioConfig ParseScenario(std::string_view text);

// Reads and parses a scenario file; a missing file is a ConfigError.
ScenarioConfig LoadScenario(const std::string& path);

// Re-checks every ScenarioConfig invariant; used after flag overrides.
void ValidateScenario(const ScenarioConfig& config);

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_SCENARIO_H_

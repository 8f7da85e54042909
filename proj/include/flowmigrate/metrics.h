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


// Migration metrics computed from a finished run's timeline. Durations and
// time points are offsets from the REQUEST marker.

#ifndef FLOWMIGRATE_METRICS_H_
#define FLOWMIGRATE_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowmigrate/scenario.h"
#include "flowmigrate/sim_time.h"
#include "flowmigrate/timeline.h"
#include "json.hpp"

namespace flowmigrate {

struct MetricsReport {
  std::string scenario;
  std::string dag;
  StrategyKind strategy = StrategyKind::kCcr;
  std::uint64_t seed = 0;
  SimTime request_ts{0};

  Duration restore{0};
  std::optional<Duration> drain_capture;  // N/A for DSM
  Duration rebalance{0};
  std::optional<Duration> catchup;        // N/A for DCR
  std::optional<Duration> recovery;       // N/A for DCR and CCR
  std::optional<Duration> stabilization;  // unset: never stabilized
  std::uint64_t replayed_count = 0;
};

// Throws kMissingMarker without REQUEST and kNoSinkOutputAfterRequest when
// no sink exit follows it.
Duration ComputeRestoreDuration(const Timeline& timeline);
// REBALANCE_START - REQUEST; N/A for DSM. Throws kMissingMarker.
std::optional<Duration> ComputeDrainCaptureDuration(const Timeline& timeline,
                                                    StrategyKind strategy);
// REBALANCE_DONE - REBALANCE_START. Throws kMissingMarker.
Duration ComputeRebalanceDuration(const Timeline& timeline);
// Last epoch-0 sink exit, never earlier than REQUEST; N/A for DCR.
std::optional<Duration> ComputeCatchup(const Timeline& timeline,
                                       StrategyKind strategy);
// Last replayed sink exit (zero without replays); N/A for DCR and CCR.
std::optional<Duration> ComputeRecovery(const Timeline& timeline,
                                        StrategyKind strategy);
// Start of the earliest 1s-aligned window at or after REQUEST in which all
// sixty 1s output buckets are within +-20% of `expected_rate`; the window
// must end by `run_end`. Throws kNeverStabilized.
Duration ComputeStabilization(const Timeline& timeline, double expected_rate,
                              SimTime run_end);
std::uint64_t CountReplays(const Timeline& timeline);

MetricsReport ComputeReport(const Timeline& timeline,
                            const ScenarioConfig& config);
nlohmann::json ReportToJson(const MetricsReport& report);

struct AuditMismatch {
  std::uint64_t root_seq = 0;
  std::uint64_t expected = 0;
  std::uint64_t observed = 0;
};

struct AuditResult {
  bool pass = true;
  std::uint64_t roots = 0;
  std::uint64_t sink_exits = 0;
  std::vector<AuditMismatch> mismatches;
};

// Sink exits per root against the DAG path multiplicity: equality, or at
// least the multiplicity when `at_least_once`.
AuditResult ExactlyOnceAudit(const Timeline& timeline, std::uint64_t multiplicity,
                             bool at_least_once);

struct RateSeries {
  Duration window{1000};
  std::vector<std::uint64_t> input;   // SOURCE_EMIT + REPLAY per window
  std::vector<std::uint64_t> output;  // SINK_EXIT per window
  // Mean sink-exit latency over the trailing 10s, measured from the root's
  // first emission; unset where no exit fell in the span.
  std::vector<std::optional<double>> latency_ms;
};

RateSeries ComputeRateSeries(const Timeline& timeline,
                             Duration window = Duration(1000),
                             Duration latency_span = Duration(10'000));

struct Spike {
  SimTime start{0};
  SimTime end{0};  // exclusive
  std::uint64_t peak = 0;
};

// Runs of adjacent windows at or after `from` whose input count exceeds
// `threshold` events per window.
std::vector<Spike> DetectInputSpikes(const RateSeries& series, double threshold,
                                     SimTime from);

// True if some spike starts `spacing` +- `tolerance` after the request or
// after the previous spike.
bool HasSpacedSpike(const std::vector<Spike>& spikes, SimTime request,
                    Duration spacing, Duration tolerance);

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_METRICS_H_

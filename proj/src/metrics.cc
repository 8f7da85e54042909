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


#include "flowmigrate/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "flowmigrate/errors.h"
#include "flowmigrate/model.h"

namespace flowmigrate {

namespace {

SimTime RequireMarker(const Timeline& timeline, PhaseMarker marker) {
  auto ts = timeline.FindPhase(marker);
  if (!ts) {
    throw Error(ErrorCode::kMissingMarker,
                "timeline has no " + std::string(PhaseMarkerName(marker)) +
                    " marker");
  }
  return *ts;
}

nlohmann::json Ms(const std::optional<Duration>& d, const char* absent) {
  if (!d) return absent;
  return d->count();
}

}  // namespace

Duration ComputeRestoreDuration(const Timeline& timeline) {
  SimTime request = RequireMarker(timeline, PhaseMarker::kRequest);
  // Outputs of events drained ahead of the rebalance do not count.
  PhaseMarker from = timeline.FindPhase(PhaseMarker::kRebalanceStart)
                         ? PhaseMarker::kRebalanceStart
                         : PhaseMarker::kRequest;
  bool after = false;
  for (const TimelineRecord& r : timeline.records()) {
    if (r.site == Site::kPhase && r.phase == from) {
      after = true;
    } else if (after && r.site == Site::kSinkExit) {
      return r.ts - request;
    }
  }
  throw Error(ErrorCode::kNoSinkOutputAfterRequest,
              "no sink output after the migration request");
}

std::optional<Duration> ComputeDrainCaptureDuration(const Timeline& timeline,
                                                    StrategyKind strategy) {
  if (strategy == StrategyKind::kDsm) return std::nullopt;
  return RequireMarker(timeline, PhaseMarker::kRebalanceStart) -
         RequireMarker(timeline, PhaseMarker::kRequest);
}

Duration ComputeRebalanceDuration(const Timeline& timeline) {
  return RequireMarker(timeline, PhaseMarker::kRebalanceDone) -
         RequireMarker(timeline, PhaseMarker::kRebalanceStart);
}

std::optional<Duration> ComputeCatchup(const Timeline& timeline,
                                       StrategyKind strategy) {
  if (strategy == StrategyKind::kDcr) return std::nullopt;
  SimTime request = RequireMarker(timeline, PhaseMarker::kRequest);
  SimTime last = request;
  for (const TimelineRecord& r : timeline.records()) {
    if (r.site == Site::kSinkExit && r.epoch == 0) last = std::max(last, r.ts);
  }
  return last - request;
}

std::optional<Duration> ComputeRecovery(const Timeline& timeline,
                                        StrategyKind strategy) {
  if (strategy != StrategyKind::kDsm) return std::nullopt;
  SimTime request = RequireMarker(timeline, PhaseMarker::kRequest);
  SimTime last = request;
  for (const TimelineRecord& r : timeline.records()) {
    if (r.site == Site::kSinkExit && r.replayed) last = std::max(last, r.ts);
  }
  return last - request;
}

Duration ComputeStabilization(const Timeline& timeline, double expected_rate,
                              SimTime run_end) {
  constexpr std::int64_t kBucket = 1000;
  constexpr std::int64_t kWindowBuckets = 60;
  SimTime request = RequireMarker(timeline, PhaseMarker::kRequest);
  std::map<std::int64_t, std::uint64_t> buckets;
  for (const TimelineRecord& r : timeline.records()) {
    if (r.site == Site::kSinkExit) ++buckets[r.ts.count() / kBucket];
  }
  const double lo = expected_rate * 0.8;
  const double hi = expected_rate * 1.2;
  auto in_band = [&](std::int64_t b) {
    auto it = buckets.find(b);
    double v = it == buckets.end() ? 0.0 : static_cast<double>(it->second);
    return v >= lo - 1e-9 && v <= hi + 1e-9;
  };
  const std::int64_t first = (request.count() + kBucket - 1) / kBucket;
  const std::int64_t last_start = run_end.count() / kBucket - kWindowBuckets;
  // Length of the in-band run ending at the current bucket, scanning
  // backwards so each start is decided in O(1).
  std::int64_t run = 0;
  std::int64_t best = -1;
  for (std::int64_t b = last_start + kWindowBuckets - 1; b >= first; --b) {
    run = in_band(b) ? run + 1 : 0;
    if (b <= last_start && run >= kWindowBuckets) best = b;
  }
  if (best < 0) {
    throw Error(ErrorCode::kNeverStabilized,
                "output never stayed within 20% of the expected rate for 60s");
  }
  return SimTime(best * kBucket) - request;
}

std::uint64_t CountReplays(const Timeline& timeline) {
  return static_cast<std::uint64_t>(
      std::count_if(timeline.records().begin(), timeline.records().end(),
                    [](const TimelineRecord& r) { return r.site == Site::kReplay; }));
}

MetricsReport ComputeReport(const Timeline& timeline,
                            const ScenarioConfig& config) {
  MetricsReport m;
  m.scenario = config.name;
  m.dag = config.dag.name;
  m.strategy = config.strategy;
  m.seed = config.random_seed;
  m.request_ts = RequireMarker(timeline, PhaseMarker::kRequest);
  m.restore = ComputeRestoreDuration(timeline);
  m.drain_capture = ComputeDrainCaptureDuration(timeline, config.strategy);
  m.rebalance = ComputeRebalanceDuration(timeline);
  m.catchup = ComputeCatchup(timeline, config.strategy);
  m.recovery = ComputeRecovery(timeline, config.strategy);
  try {
    m.stabilization = ComputeStabilization(
        timeline, config.ExpectedOutputRate(), config.run_duration);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNeverStabilized) throw;
  }
  m.replayed_count = CountReplays(timeline);
  return m;
}

nlohmann::json ReportToJson(const MetricsReport& m) {
  nlohmann::json j;
  j["scenario"] = m.scenario;
  j["dag"] = m.dag;
  j["strategy"] = std::string(StrategyName(m.strategy));
  j["seed"] = m.seed;
  j["requestTsMs"] = m.request_ts.count();
  j["restoreDurationMs"] = m.restore.count();
  j["drainCaptureDurationMs"] = Ms(m.drain_capture, "N/A");
  j["rebalanceDurationMs"] = m.rebalance.count();
  j["catchupTimeMs"] = Ms(m.catchup, "N/A");
  j["recoveryTimeMs"] = Ms(m.recovery, "N/A");
  j["stabilizationTimeMs"] = Ms(m.stabilization, "never-stabilized");
  j["replayedCount"] = m.replayed_count;
  return j;
}

AuditResult ExactlyOnceAudit(const Timeline& timeline,
                             std::uint64_t multiplicity, bool at_least_once) {
  std::map<std::uint64_t, std::uint64_t> seen;  // root_seq -> sink exits
  std::map<std::uint64_t, bool> emitted;
  AuditResult result;
  for (const TimelineRecord& r : timeline.records()) {
    if (r.site == Site::kSourceEmit) {
      emitted[r.root_seq] = true;
      seen.try_emplace(r.root_seq, 0);
    } else if (r.site == Site::kSinkExit) {
      ++seen[r.root_seq];
      ++result.sink_exits;
    }
  }
  result.roots = emitted.size();
  for (const auto& [seq, count] : seen) {
    std::uint64_t expected = emitted.count(seq) ? multiplicity : 0;
    bool ok = at_least_once && expected > 0 ? count >= expected
                                            : count == expected;
    if (!ok) {
      result.pass = false;
      result.mismatches.push_back({seq, expected, count});
    }
  }
  return result;
}

RateSeries ComputeRateSeries(const Timeline& timeline, Duration window,
                             Duration latency_span) {
  RateSeries s;
  s.window = window;
  const std::int64_t w = std::max<std::int64_t>(1, window.count());
  std::int64_t last = 0;
  for (const TimelineRecord& r : timeline.records()) last = std::max(last, r.ts.count());
  const std::size_t n = static_cast<std::size_t>(last / w + 1);
  s.input.assign(n, 0);
  s.output.assign(n, 0);
  std::vector<double> lat_sum(n, 0.0);
  std::vector<std::uint64_t> lat_count(n, 0);
  std::map<std::uint64_t, SimTime> first_emit;
  for (const TimelineRecord& r : timeline.records()) {
    std::size_t b = static_cast<std::size_t>(r.ts.count() / w);
    switch (r.site) {
      case Site::kSourceEmit:
        first_emit.try_emplace(r.root_seq, r.ts);
        ++s.input[b];
        break;
      case Site::kReplay:
        ++s.input[b];
        break;
      case Site::kSinkExit: {
        ++s.output[b];
        auto it = first_emit.find(r.root_seq);
        if (it != first_emit.end()) {
          lat_sum[b] += static_cast<double>((r.ts - it->second).count());
          ++lat_count[b];
        }
        break;
      }
      case Site::kPhase:
        break;
    }
  }
  const std::size_t span = static_cast<std::size_t>(
      std::max<std::int64_t>(1, latency_span.count() / w));
  s.latency_ms.assign(n, std::nullopt);
  double sum = 0.0;
  std::uint64_t count = 0;
  for (std::size_t b = 0; b < n; ++b) {
    sum += lat_sum[b];
    count += lat_count[b];
    if (b >= span) {
      sum -= lat_sum[b - span];
      count -= lat_count[b - span];
    }
    if (count > 0) s.latency_ms[b] = sum / static_cast<double>(count);
  }
  return s;
}

std::vector<Spike> DetectInputSpikes(const RateSeries& series, double threshold,
                                     SimTime from) {
  std::vector<Spike> spikes;
  const std::int64_t w = series.window.count();
  std::optional<Spike> open;
  for (std::size_t b = 0; b < series.input.size(); ++b) {
    SimTime start(static_cast<std::int64_t>(b) * w);
    bool high = start >= from && static_cast<double>(series.input[b]) > threshold;
    if (high) {
      if (!open) open = Spike{start, start + series.window, 0};
      open->end = start + series.window;
      open->peak = std::max(open->peak, series.input[b]);
    } else if (open) {
      spikes.push_back(*open);
      open.reset();
    }
  }
  if (open) spikes.push_back(*open);
  return spikes;
}

bool HasSpacedSpike(const std::vector<Spike>& spikes, SimTime request,
                    Duration spacing, Duration tolerance) {
  SimTime prev = request;
  for (const Spike& s : spikes) {
    Duration gap = s.start - prev;
    if (gap >= spacing - tolerance && gap <= spacing + tolerance) return true;
    prev = s.start;
  }
  return false;
}

}  // namespace flowmigrate

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


#include "flowmigrate/suite.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "flowmigrate/acker.h"
#include "flowmigrate/bundled.h"
#include "flowmigrate/errors.h"

namespace flowmigrate {

namespace fs = std::filesystem;

namespace {

// Keeps the first `keep` "; "-separated items of a detail string.
std::string Abbreviate(std::string detail, std::size_t keep) {
  while (detail.ends_with("; ")) detail.resize(detail.size() - 2);
  std::vector<std::string> items;
  for (std::size_t pos = 0;;) {
    std::size_t next = detail.find("; ", pos);
    items.push_back(detail.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 2;
  }
  if (items.size() <= keep) return detail;
  std::string out;
  for (std::size_t i = 0; i < keep; ++i) out += items[i] + "; ";
  return out + "+" + std::to_string(items.size() - keep) + " more";
}

constexpr StrategyKind kStrategies[] = {StrategyKind::kDsm, StrategyKind::kDcr,
                                        StrategyKind::kCcr};

// Calls fn(i) for i in [0, n) on a small worker pool; rethrows the first
// failure.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double Seconds(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

std::string Fmt(double v, int precision = 1) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string FmtOpt(const std::optional<Duration>& d, const char* none) {
  return d ? Fmt(Seconds(*d)) : std::string(none);
}

// Never-stabilized runs order after every finite value.
double StabilizationOrInf(const RunSummary& run) {
  return run.report.stabilization ? Seconds(*run.report.stabilization)
                                  : std::numeric_limits<double>::infinity();
}

void WriteFileOnce(const fs::path& path, const std::string& content) {
  if (fs::exists(path)) {
    throw ConfigError(ErrorCode::kParse, "out",
                      "refusing to overwrite existing result " + path.string());
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    throw ConfigError(ErrorCode::kParse, "out", "cannot write " + path.string());
  }
}

void PrepareOutDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError(ErrorCode::kParse, "out",
                      "cannot create output directory " + dir.string());
  }
}

}  // namespace

bool EpochBoundaryHolds(const Timeline& timeline) {
  bool seen_new_epoch = false;
  for (const TimelineRecord& r : timeline.records()) {
    if (r.site != Site::kSinkExit) continue;
    if (r.epoch > 0) {
      seen_new_epoch = true;
    } else if (seen_new_epoch) {
      return false;
    }
  }
  return true;
}

std::uint64_t InFlightAtRequest(const Timeline& timeline) {
  auto request = timeline.FindPhase(PhaseMarker::kRequest);
  if (!request) return 0;
  std::set<std::uint64_t> emitted_before;
  std::set<std::uint64_t> late;
  for (const TimelineRecord& r : timeline.records()) {
    if (r.site == Site::kSourceEmit && r.ts <= *request) {
      emitted_before.insert(r.root_seq);
    } else if (r.site == Site::kSinkExit && r.ts > *request &&
               emitted_before.contains(r.root_seq)) {
      late.insert(r.root_seq);
    }
  }
  return late.size();
}

RunSummary Summarize(const RunResult& run) {
  const ScenarioConfig& cfg = run.config;
  RunSummary s;
  s.scenario = cfg.name;
  s.dag = cfg.dag.name;
  s.strategy = cfg.strategy;
  s.report = ComputeReport(run.timeline, cfg);
  s.audit = ExactlyOnceAudit(
      run.timeline,
      static_cast<std::uint64_t>(std::llround(PathMultiplicity(cfg.dag))),
      cfg.strategy == StrategyKind::kDsm);
  s.engine = run.engine;
  s.protocol = run.protocol;
  s.settled = run.settled;
  s.task_totals = run.TaskTotals();
  s.rollbacks = run.rollbacks;
  RateSeries series = ComputeRateSeries(run.timeline);
  s.spikes = DetectInputSpikes(series, 1.5 * cfg.source_rate *
                                           static_cast<double>(cfg.dag.source_tasks.size()),
                               s.report.request_ts);
  s.in_flight_at_request = InFlightAtRequest(run.timeline);
  s.epoch_boundary = EpochBoundaryHolds(run.timeline);
  return s;
}

ScenarioConfig ApplyOverrides(ScenarioConfig config, const Overrides& o) {
  if (o.strategy) config.strategy = *o.strategy;
  if (o.seed) config.random_seed = *o.seed;
  if (o.ack_timeout) config.ack_timeout = *o.ack_timeout;
  if (o.rebalance_duration) config.rebalance_duration = *o.rebalance_duration;
  ValidateScenario(config);
  return config;
}

std::string TimelineCsv(const Timeline& timeline) {
  std::ostringstream out;
  timeline.WriteCsv(out);
  return out.str();
}

RunSummary RunScenario(const ScenarioConfig& config, const fs::path& out_dir,
                       double realtime_scale) {
  PrepareOutDir(out_dir);
  for (const char* name : {"timeline.csv", "report.json"}) {
    if (fs::exists(out_dir / name)) {
      throw ConfigError(ErrorCode::kParse, "out",
                        "output directory " + out_dir.string() +
                            " already holds " + name);
    }
  }
  RunOptions options;
  options.realtime_scale = realtime_scale;
  RunResult run = RunSimulation(config, options);
  RunSummary summary = Summarize(run);
  WriteFileOnce(out_dir / "timeline.csv", TimelineCsv(run.timeline));
  nlohmann::json report = ReportToJson(summary.report);
  report["audit"] = {{"pass", summary.audit.pass},
                     {"roots", summary.audit.roots},
                     {"sinkExits", summary.audit.sink_exits},
                     {"mismatches", summary.audit.mismatches.size()}};
  WriteFileOnce(out_dir / "report.json", report.dump(2) + "\n");
  return summary;
}

Comparison CompareStrategies(const ScenarioConfig& config,
                             const std::optional<fs::path>& out_dir) {
  Comparison cmp;
  cmp.scenario = config.name;
  std::vector<RunSummary> runs(std::size(kStrategies));
  ParallelFor(runs.size(), [&](std::size_t i) {
    ScenarioConfig c = config;
    c.strategy = kStrategies[i];
    if (out_dir) {
      runs[i] = RunScenario(c, *out_dir / std::string(StrategyName(c.strategy)));
    } else {
      runs[i] = Summarize(RunSimulation(c));
    }
  });
  for (RunSummary& r : runs) cmp.runs.emplace(r.strategy, std::move(r));

  const RunSummary& dsm = cmp.runs.at(StrategyKind::kDsm);
  const RunSummary& dcr = cmp.runs.at(StrategyKind::kDcr);
  const RunSummary& ccr = cmp.runs.at(StrategyKind::kCcr);
  cmp.checks.push_back(
      {"restore CCR < DCR < DSM",
       ccr.report.restore < dcr.report.restore &&
           dcr.report.restore < dsm.report.restore,
       Fmt(Seconds(ccr.report.restore)) + "s < " +
           Fmt(Seconds(dcr.report.restore)) + "s < " +
           Fmt(Seconds(dsm.report.restore)) + "s"});
  Duration drain = dcr.report.drain_capture.value_or(Duration(0));
  Duration capture = ccr.report.drain_capture.value_or(Duration(0));
  cmp.checks.push_back({"drain DCR > capture CCR", drain > capture,
                        "gap " + std::to_string((drain - capture).count()) +
                            "ms"});
  cmp.checks.push_back(
      {"stabilization DSM >= DCR, CCR",
       StabilizationOrInf(dsm) >= StabilizationOrInf(dcr) &&
           StabilizationOrInf(dsm) >= StabilizationOrInf(ccr),
       FmtOpt(dsm.report.stabilization, "never") + "s vs " +
           FmtOpt(dcr.report.stabilization, "never") + "s, " +
           FmtOpt(ccr.report.stabilization, "never") + "s"});
  cmp.checks.push_back(
      {"zero replays for DCR and CCR",
       dcr.report.replayed_count == 0 && ccr.report.replayed_count == 0, ""});
  return cmp;
}

std::string FormatComparison(const Comparison& cmp) {
  std::ostringstream out;
  out << "scenario " << cmp.scenario << " (seconds after request)\n";
  out << std::left << std::setw(10) << "strategy" << std::right
      << std::setw(9) << "restore" << std::setw(9) << "drain" << std::setw(11)
      << "rebalance" << std::setw(9) << "catchup" << std::setw(10)
      << "recovery" << std::setw(8) << "stable" << std::setw(9) << "replays"
      << std::setw(7) << "audit" << "\n";
  for (StrategyKind s : kStrategies) {
    auto it = cmp.runs.find(s);
    if (it == cmp.runs.end()) continue;
    const MetricsReport& m = it->second.report;
    out << std::left << std::setw(10) << StrategyName(s) << std::right
        << std::setw(9) << Fmt(Seconds(m.restore)) << std::setw(9)
        << FmtOpt(m.drain_capture, "N/A") << std::setw(11)
        << Fmt(Seconds(m.rebalance)) << std::setw(9)
        << FmtOpt(m.catchup, "N/A") << std::setw(10)
        << FmtOpt(m.recovery, "N/A") << std::setw(8)
        << FmtOpt(m.stabilization, "never") << std::setw(9)
        << m.replayed_count << std::setw(7)
        << (it->second.audit.pass ? "ok" : "FAIL") << "\n";
  }
  for (const Check& c : cmp.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
  }
  return out.str();
}

Check XorOracleCheck(std::uint64_t seed, int trees, int max_nodes) {
  std::mt19937_64 rng(seed);
  std::uint64_t operations = 0;
  for (int t = 0; t < trees; ++t) {
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_nodes));
    std::vector<int> parent(n, -1);
    std::vector<std::uint64_t> id(n);
    std::unordered_set<std::uint64_t> used;
    for (int i = 0; i < n; ++i) {
      do {
        id[i] = rng();
      } while (id[i] == 0 || !used.insert(id[i]).second);
      if (i > 0) parent[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(i));
    }
    std::vector<std::vector<int>> children(n);
    for (int i = 1; i < n; ++i) children[parent[i]].push_back(i);

    Acker acker;
    acker.RegisterRoot(id[0], SimTime(0));
    std::set<std::uint64_t> pending = {id[0]};

    // Ops: anchor(i) for i > 0 happens before ack(parent(i)); ack(i)
    // happens after anchor(i).
    std::vector<bool> anchored(n, false), acked(n, false);
    anchored[0] = true;
    std::vector<int> unanchored_children(n, 0);
    for (int i = 1; i < n; ++i) ++unanchored_children[parent[i]];
    int remaining = 2 * n - 1;
    while (remaining > 0) {
      std::vector<std::pair<bool, int>> enabled;  // (is_ack, node)
      for (int i = 0; i < n; ++i) {
        if (!anchored[i] && anchored[parent[i]] && !acked[parent[i]]) {
          enabled.push_back({false, i});
        }
        if (anchored[i] && !acked[i] && unanchored_children[i] == 0) {
          enabled.push_back({true, i});
        }
      }
      if (enabled.empty()) {
        return {"xor-acker-oracle", false,
                "tree " + std::to_string(t) + " has no enabled operation"};
      }
      auto [is_ack, node] = enabled[rng() % enabled.size()];
      std::uint64_t hash = 0;
      if (is_ack) {
        acked[node] = true;
        pending.erase(id[node]);
        hash = acker.AckEvent(id[0], id[node]);
      } else {
        anchored[node] = true;
        --unanchored_children[parent[node]];
        pending.insert(id[node]);
        hash = acker.AnchorEmit(id[0], id[node]);
      }
      ++operations;
      --remaining;
      std::uint64_t expected = 0;
      for (std::uint64_t p : pending) expected ^= p;
      const AckerEntry* entry = acker.Find(id[0]);
      if (hash != expected || (hash == 0) != pending.empty() ||
          entry == nullptr || entry->completed != pending.empty()) {
        return {"xor-acker-oracle", false,
                "tree " + std::to_string(t) + " diverged after " +
                    std::to_string(operations) + " operations"};
      }
    }
    if (!pending.empty()) {
      return {"xor-acker-oracle", false,
              "tree " + std::to_string(t) + " left pending ids"};
    }
  }
  return {"xor-acker-oracle", true,
          std::to_string(trees) + " trees, " + std::to_string(operations) +
              " operations"};
}

bool SuiteResult::pass() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const Check& c) { return c.pass; });
}

std::vector<std::string> SuiteScenarioNames() {
  std::vector<std::string> names;
  for (const std::string& dag : SuiteDagNames()) {
    names.push_back(dag + "_scalein");
    names.push_back(dag + "_scaleout");
  }
  return names;
}

SuiteResult ReproduceSuite(const fs::path& scenario_dir,
                           const Overrides& overrides) {
  auto load = [&](const std::string& name) {
    Overrides o = overrides;
    o.strategy.reset();
    return ApplyOverrides(LoadScenario((scenario_dir / (name + ".json")).string()),
                          o);
  };
  const std::vector<std::string> names = SuiteScenarioNames();
  std::vector<ScenarioConfig> configs;
  for (const std::string& n : names) configs.push_back(load(n));
  const ScenarioConfig stress_config = load(kStressScenario);

  struct Job {
    ScenarioConfig config;
    bool baseline = false;
  };
  std::vector<Job> jobs;
  for (const ScenarioConfig& base : configs) {
    for (StrategyKind s : kStrategies) {
      Job run{base, false};
      run.config.strategy = s;
      jobs.push_back(run);
      Job baseline = run;
      baseline.baseline = true;
      baseline.config.migrate = false;
      jobs.push_back(baseline);
    }
  }
  for (StrategyKind s : kStrategies) {
    Job run{stress_config, false};
    run.config.strategy = s;
    jobs.push_back(run);
  }

  struct Outcome {
    RunSummary summary;
    bool deterministic = true;
    std::map<TaskId, std::uint64_t> totals;
  };
  std::vector<Outcome> outcomes(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    RunResult first = RunSimulation(job.config);
    outcomes[i].totals = first.TaskTotals();
    if (job.baseline) return;
    outcomes[i].summary = Summarize(first);
    RunResult second = RunSimulation(job.config);
    outcomes[i].deterministic =
        TimelineCsv(first.timeline) == TimelineCsv(second.timeline);
  });

  SuiteResult result;
  std::map<std::pair<std::string, StrategyKind>, const Outcome*> by_run;
  std::map<std::pair<std::string, StrategyKind>, const Outcome*> baselines;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto key = std::make_pair(jobs[i].config.name, jobs[i].config.strategy);
    (jobs[i].baseline ? baselines : by_run)[key] = &outcomes[i];
  }
  auto comparison_for = [&](const ScenarioConfig& c) {
    Comparison cmp;
    cmp.scenario = c.name;
    for (StrategyKind s : kStrategies) {
      cmp.runs.emplace(s, by_run.at({c.name, s})->summary);
    }
    return cmp;
  };
  for (const ScenarioConfig& c : configs) result.comparisons.push_back(comparison_for(c));
  result.stress = comparison_for(stress_config);

  auto run = [&](const Comparison& cmp, StrategyKind s) -> const RunSummary& {
    return cmp.runs.at(s);
  };
  auto add = [&](std::string name, bool pass, std::string detail) {
    result.criteria.push_back({std::move(name), pass, Abbreviate(detail, 4)});
  };

  // Zero loss for the coordinated strategies.
  {
    bool pass = true;
    std::string detail = "10 scenarios, DCR and CCR";
    for (const Comparison& cmp : result.comparisons) {
      for (StrategyKind s : {StrategyKind::kDcr, StrategyKind::kCcr}) {
        const RunSummary& r = run(cmp, s);
        if (r.report.replayed_count != 0 || !r.audit.pass || !r.settled) {
          pass = false;
          detail = cmp.scenario + " " + std::string(StrategyName(s)) +
                   ": replays " + std::to_string(r.report.replayed_count) +
                   ", audit mismatches " +
                   std::to_string(r.audit.mismatches.size());
        }
      }
    }
    add("zero-loss", pass, detail);
  }

  // DSM at-least-once delivery and the replay trend.
  {
    bool pass = true;
    std::string detail;
    std::map<std::string, std::uint64_t> replays;
    for (const Comparison& cmp : result.comparisons) {
      const RunSummary& r = run(cmp, StrategyKind::kDsm);
      replays[cmp.scenario] = r.report.replayed_count;
      if (!r.audit.pass || (r.in_flight_at_request > 0 &&
                            r.report.replayed_count == 0)) {
        pass = false;
        detail = cmp.scenario + ": audit " + (r.audit.pass ? "ok" : "failed") +
                 ", replays " + std::to_string(r.report.replayed_count);
      }
    }
    for (const char* dir : {"scalein", "scaleout"}) {
      std::uint64_t grid = replays[std::string("grid_") + dir];
      std::uint64_t linear = replays[std::string("linear_") + dir];
      if (grid <= linear) pass = false;
      if (!detail.empty()) detail += "; ";
      detail += std::string(dir) + " replays grid " + std::to_string(grid) +
                " vs linear " + std::to_string(linear);
    }
    add("dsm-at-least-once", pass, detail);
  }

  // Restore ordering and the calibrated Grid scale-in values.
  {
    bool pass = true;
    std::string detail;
    for (const Comparison& cmp : result.comparisons) {
      Duration ccr = run(cmp, StrategyKind::kCcr).report.restore;
      Duration dcr = run(cmp, StrategyKind::kDcr).report.restore;
      Duration dsm = run(cmp, StrategyKind::kDsm).report.restore;
      if (!(ccr < dcr && dcr < dsm)) {
        pass = false;
        detail += cmp.scenario + " out of order; ";
      }
      if (cmp.scenario != "grid_scalein") continue;
      // The calibrated values only apply to the default timings.
      if (overrides.ack_timeout || overrides.rebalance_duration) {
        detail += "grid_scalein bands skipped under timing overrides; ";
        continue;
      }
      const std::pair<StrategyKind, double> targets[] = {
          {StrategyKind::kCcr, 15.0},
          {StrategyKind::kDcr, 41.0},
          {StrategyKind::kDsm, 91.0}};
      detail += "grid_scalein";
      for (auto [s, target] : targets) {
        double v = Seconds(run(cmp, s).report.restore);
        bool in_band = v >= 0.5 * target && v <= 1.5 * target;
        pass = pass && in_band;
        detail += " " + std::string(StrategyName(s)) + " " + Fmt(v) + "s" +
                  (in_band ? "" : " (outside " + Fmt(0.5 * target) + ".." +
                                      Fmt(1.5 * target) + ")");
      }
    }
    add("restore-ordering", pass, detail);
  }

  // Total migration time on the application DAGs.
  {
    bool pass = true;
    std::string detail;
    auto total = [](const RunSummary& r) {
      double t = Seconds(r.report.restore);
      if (r.report.catchup) t = std::max(t, Seconds(*r.report.catchup));
      return std::max(t, StabilizationOrInf(r));
    };
    for (const Comparison& cmp : result.comparisons) {
      const RunSummary& ccr = run(cmp, StrategyKind::kCcr);
      if (ccr.dag != "grid" && ccr.dag != "traffic") continue;
      const RunSummary& dsm = run(cmp, StrategyKind::kDsm);
      double ccr_total = total(ccr);
      double dsm_total = total(dsm);
      bool ok = ccr_total <= 50.0 && dsm_total > 100.0;
      pass = pass && ok;
      detail += cmp.scenario + " CCR " +
                (std::isinf(ccr_total) ? "never" : Fmt(ccr_total) + "s") +
                " DSM " +
                (std::isinf(dsm_total) ? "never" : Fmt(dsm_total) + "s") + "; ";
    }
    add("total-migration-bound", pass, detail);
  }

  // Drain versus capture, including the deep linear stress DAG.
  {
    bool pass = true;
    std::string detail;
    auto gap = [&](const Comparison& cmp) {
      return run(cmp, StrategyKind::kDcr).report.drain_capture.value_or(Duration(0)) -
             run(cmp, StrategyKind::kCcr).report.drain_capture.value_or(Duration(0));
    };
    for (const Comparison& cmp : result.comparisons) {
      if (gap(cmp) <= Duration(0)) {
        pass = false;
        detail += cmp.scenario + " gap " + std::to_string(gap(cmp).count()) +
                  "ms; ";
      }
    }
    Duration stress_gap = gap(*result.stress);
    pass = pass && stress_gap >= Duration(2'200);
    detail += std::string(kStressScenario) + " gap " +
              std::to_string(stress_gap.count()) + "ms (need >= 2200ms)";
    add("drain-vs-capture", pass, detail);
  }

  // DCR epoch boundary.
  {
    bool pass = true;
    std::string detail = "11 DCR runs";
    std::vector<const Comparison*> all;
    for (const Comparison& cmp : result.comparisons) all.push_back(&cmp);
    all.push_back(&*result.stress);
    for (const Comparison* cmp : all) {
      if (!run(*cmp, StrategyKind::kDcr).epoch_boundary) {
        pass = false;
        detail = cmp->scenario + " mixes epochs at the sink";
      }
    }
    add("dcr-epoch-boundary", pass, detail);
  }

  result.criteria.push_back(XorOracleCheck(0x5eed, 1000, 64));

  // Stabilization ordering and DSM replay spikes.
  {
    bool pass = true;
    std::string detail;
    for (const Comparison& cmp : result.comparisons) {
      const RunSummary& dsm = run(cmp, StrategyKind::kDsm);
      double d = StabilizationOrInf(dsm);
      bool ordered = d >= StabilizationOrInf(run(cmp, StrategyKind::kDcr)) &&
                     d >= StabilizationOrInf(run(cmp, StrategyKind::kCcr));
      const ScenarioConfig& cfg = configs[&cmp - result.comparisons.data()];
      bool spiked = HasSpacedSpike(dsm.spikes, dsm.report.request_ts,
                                   cfg.ack_timeout, Duration(2'000));
      if (!ordered || !spiked) {
        pass = false;
        detail += cmp.scenario + (ordered ? "" : " unordered") +
                  (spiked ? "" : " no spaced spike") + "; ";
      }
    }
    if (pass) detail = "10 scenarios, spikes spaced by ackTimeout +-2s";
    add("stabilization", pass, detail);
  }

  // Determinism.
  {
    bool pass = true;
    std::string detail = "33 runs repeated";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (!jobs[i].baseline && !outcomes[i].deterministic) {
        pass = false;
        detail = jobs[i].config.name + " " +
                 std::string(StrategyName(jobs[i].config.strategy)) +
                 " produced different timelines";
      }
    }
    add("determinism", pass, detail);
  }

  // Task state against the no-migration baselines.
  {
    bool pass = true;
    std::string detail;
    for (const ScenarioConfig& c : configs) {
      for (StrategyKind s : kStrategies) {
        const Outcome& migrated = *by_run.at({c.name, s});
        const Outcome& baseline = *baselines.at({c.name, s});
        const bool dsm = s == StrategyKind::kDsm;
        for (const auto& [task, expected] : baseline.totals) {
          auto it = migrated.totals.find(task);
          std::uint64_t got = it == migrated.totals.end() ? 0 : it->second;
          bool ok = dsm ? got >= expected : got == expected;
          if (!ok) {
            pass = false;
            detail += c.name + " " + std::string(StrategyName(s)) + " task " +
                      task + " " + std::to_string(got) + " vs " +
                      std::to_string(expected) + "; ";
          }
        }
        if (!dsm) continue;
        const double bound = Seconds(c.checkpoint_interval) * c.source_rate;
        for (const auto& [key, rolled] : migrated.summary.rollbacks) {
          if (static_cast<double>(rolled) > bound) {
            pass = false;
            detail += c.name + " " + key + " rolled back " +
                      std::to_string(rolled) + " > " + Fmt(bound, 0) + "; ";
          }
        }
      }
    }
    if (pass) detail = "30 runs against no-migration baselines";
    add("state-correctness", pass, detail);
  }
  return result;
}

}  // namespace flowmigrate

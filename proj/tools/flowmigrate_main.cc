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


// flowmigrate: run a scenario, compare the three strategies on one
// scenario, or reproduce the bundled suite.
//
// Exit codes: 0 success, 1 failed acceptance check (reproduce), 2 config
// error, 3 engine invariant breach.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "flowmigrate/errors.h"
#include "flowmigrate/scenario.h"
#include "flowmigrate/sim_time.h"
#include "flowmigrate/suite.h"

namespace fm = flowmigrate;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Flags {
  std::string scenario;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  double realtime_scale = 0.0;
  std::optional<std::string> ack_timeout;
  std::optional<std::string> rebalance_duration;
  std::string scenario_dir = "scenarios";
};

void AddOverrideFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--ack-timeout", f.ack_timeout, "Ack timeout, e.g. 30s");
  cmd->add_option("--rebalance-duration", f.rebalance_duration,
                  "Rebalance duration, e.g. 7.26s");
}

fm::Overrides ToOverrides(const Flags& f) {
  fm::Overrides o;
  if (f.strategy) {
    auto s = fm::ParseStrategy(*f.strategy);
    if (!s) {
      throw fm::ConfigError(fm::ErrorCode::kParse, "strategy",
                            "unknown strategy '" + *f.strategy + "'");
    }
    o.strategy = *s;
  }
  o.seed = f.seed;
  if (f.ack_timeout) o.ack_timeout = fm::ParseDuration(*f.ack_timeout, "ackTimeout");
  if (f.rebalance_duration) {
    o.rebalance_duration =
        fm::ParseDuration(*f.rebalance_duration, "rebalanceDuration");
  }
  return o;
}

int RunCommand(const Flags& f) {
  fm::ScenarioConfig config =
      fm::ApplyOverrides(fm::LoadScenario(f.scenario), ToOverrides(f));
  fs::path out = f.out ? fs::path(*f.out)
                       : fs::path("runs") /
                             (config.name + "-" +
                              std::string(fm::StrategyName(config.strategy)) +
                              "-seed" + std::to_string(config.random_seed));
  fm::RunSummary s = fm::RunScenario(config, out, f.realtime_scale);
  std::cout << fm::ReportToJson(s.report).dump(2) << "\n"
            << "audit " << (s.audit.pass ? "pass" : "FAIL") << ", results in "
            << out.string() << "\n";
  return 0;
}

int CompareCommand(const Flags& f) {
  fm::ScenarioConfig config =
      fm::ApplyOverrides(fm::LoadScenario(f.scenario), ToOverrides(f));
  std::optional<fs::path> out;
  if (f.out) out = fs::path(*f.out);
  fm::Comparison cmp = fm::CompareStrategies(config, out);
  std::cout << fm::FormatComparison(cmp);
  return 0;
}

int ReproduceCommand(const Flags& f) {
  fm::SuiteResult suite = fm::ReproduceSuite(f.scenario_dir, ToOverrides(f));
  for (const fm::Comparison& cmp : suite.comparisons) {
    std::cout << fm::FormatComparison(cmp) << "\n";
  }
  if (suite.stress) std::cout << fm::FormatComparison(*suite.stress) << "\n";
  for (const fm::Check& c : suite.criteria) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail
              << "\n";
  }
  return suite.pass() ? 0 : kExitFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic dataflow migration simulator"};
  app.require_subcommand(1);
  Flags flags;

  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", flags.scenario, "Scenario JSON file")->required();
  run->add_option("--strategy", flags.strategy, "DSM, DCR or CCR");
  run->add_option("--out", flags.out, "Fresh output directory");
  run->add_option("--realtime-scale", flags.realtime_scale,
                  "Pace the simulation against wall time (0 = as fast as possible)");
  AddOverrideFlags(run, flags);

  CLI::App* compare = app.add_subcommand("compare", "Compare DSM, DCR and CCR");
  compare->add_option("scenario", flags.scenario, "Scenario JSON file")->required();
  compare->add_option("--out", flags.out, "Fresh output directory");
  AddOverrideFlags(compare, flags);

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "Run the bundled suite and check it");
  reproduce->add_option("--scenarios", flags.scenario_dir,
                        "Directory holding the bundled scenario files");
  AddOverrideFlags(reproduce, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return RunCommand(flags);
    if (*compare) return CompareCommand(flags);
    return ReproduceCommand(flags);
  } catch (const fm::ConfigError& e) {
    std::cerr << "config error";
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const fm::Error& e) {
    std::cerr << "error " << fm::ErrorCodeName(e.code()) << ": " << e.what()
              << "\n";
    return e.code() == fm::ErrorCode::kParse ? kExitConfig : kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

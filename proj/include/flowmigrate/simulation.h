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


#ifndef FLOWMIGRATE_SIMULATION_H_
#define FLOWMIGRATE_SIMULATION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "flowmigrate/protocol.h"
#include "flowmigrate/runtime.h"
#include "flowmigrate/scenario.h"
#include "flowmigrate/timeline.h"

namespace flowmigrate {

struct RunOptions {
  // FILE_BACKED checkpoint store rooted here; in-memory when unset.
  std::optional<std::filesystem::path> store_dir;
  double realtime_scale = 0.0;
  // Called after wiring and before the first event; used by tests to
  // inject faults.
  std::function<void(Engine&, Coordinator&)> setup;
};

struct RunResult {
  ScenarioConfig config;
  Timeline timeline;
  EngineCounters engine;
  ProtocolCounters protocol;
  MigrationState migration = MigrationState::kIdle;
  std::map<std::string, DemoUserTask> final_states;  // by instance key
  std::map<std::string, std::int64_t> rollbacks;     // by instance key
  SimTime end_ts{0};
  // False when the settle limit cut the run short.
  bool settled = true;

  // processed_count summed over the instances of each task.
  std::map<TaskId, std::uint64_t> TaskTotals() const;
};

// Runs one scenario to quiescence (or the settle limit) on a private
// engine. Throws Error on engine invariant breaches.
RunResult RunSimulation(const ScenarioConfig& config,
                        const RunOptions& options = {});

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_SIMULATION_H_

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


#include "flowmigrate/simulation.h"

#include "flowmigrate/sim_clock.h"
#include "flowmigrate/state_store.h"

namespace flowmigrate {

std::map<TaskId, std::uint64_t> RunResult::TaskTotals() const {
  std::map<TaskId, std::uint64_t> totals;
  for (const auto& [key, state] : final_states) {
    auto id = InstanceId::Parse(key);
    totals[id ? id->task : key] += state.processed_count;
  }
  return totals;
}

RunResult RunSimulation(const ScenarioConfig& config,
                        const RunOptions& options) {
  RunResult result;
  result.config = config;
  const ScenarioConfig& cfg = result.config;

  SimClock clock;
  if (options.realtime_scale > 0.0) clock.SetRealtimeScale(options.realtime_scale);
  StateStore store = options.store_dir ? StateStore::FileBacked(*options.store_dir)
                                       : StateStore::InMemory();
  Engine engine(cfg, clock, result.timeline);
  Coordinator coordinator(engine, store);
  engine.Start();
  coordinator.Start();
  if (options.setup) options.setup(engine, coordinator);

  const SimTime limit = cfg.run_duration + cfg.settle_limit;
  while (!clock.empty()) {
    if (clock.now() > limit) {
      result.settled = false;
      break;
    }
    clock.Step();
  }
  if (result.settled && !engine.Quiescent()) result.settled = false;

  result.end_ts = clock.now();
  result.engine = engine.counters();
  result.protocol = coordinator.counters();
  result.migration = coordinator.migration_state();
  result.rollbacks = engine.rollbacks();
  for (const InstanceId& id : engine.instance_ids()) {
    const TaskInstanceRuntime& inst = engine.instance(id);
    result.final_states[inst.key] = inst.user_state;
  }
  return result;
}

}  // namespace flowmigrate

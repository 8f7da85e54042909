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

#ifndef FLOWMIGRATE_TESTS_TEST_SUPPORT_H_
#define FLOWMIGRATE_TESTS_TEST_SUPPORT_H_

#include <string>

#include "flowmigrate/scenario.h"
#include "json.hpp"

namespace flowmigrate::testing {

inline nlohmann::json Vms(const std::string& prefix, int count, int slots) {
  nlohmann::json vms = nlohmann::json::array();
  for (int i = 1; i <= count; ++i) {
    vms.push_back({{"vmId", prefix + std::to_string(i)}, {"slotCount", slots}});
  }
  return vms;
}

// Linear-5 scaling in from three 2-slot VMs to two 4-slot VMs, with short
// timings so a full migration runs in well under a second.
inline nlohmann::json SmallLinear(std::string_view strategy) {
  return {
      {"name", "small_linear"},
      {"dag", "linear"},
      {"strategy", std::string(strategy)},
      {"runDuration", "150s"},
      {"migrationTriggerAt", "40s"},
      {"rebalanceDuration", "2s"},
      {"workerStartupMin", "1s"},
      {"workerStartupJitter", "3s"},
      {"vmsBefore", Vms("d2-", 3, 2)},
      {"vmsAfter", Vms("d3-", 2, 4)},
  };
}

inline ScenarioConfig Config(const nlohmann::json& doc) {
  return ParseScenario(doc.dump());
}

}  // namespace flowmigrate::testing

#endif  // FLOWMIGRATE_TESTS_TEST_SUPPORT_H_

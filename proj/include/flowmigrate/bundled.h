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

#ifndef FLOWMIGRATE_BUNDLED_H_
#define FLOWMIGRATE_BUNDLED_H_

#include <optional>
#include <string>
#include <vector>

#include "flowmigrate/model.h"

namespace flowmigrate {

// Canonical benchmark topologies: the three micro DAGs (linear, diamond,
// star), the two application DAGs (grid, traffic) and the 50-task linear
// stress chain ("linear50"). Every user task sleeps 100ms per event with
// selectivity 1 and is sized at one instance per 8 events/sec of input.
std::optional<DagDef> BundledDag(const std::string& name);

// The five DAGs used by the scale-in/scale-out suite, in table order.
const std::vector<std::string>& SuiteDagNames();

// Number of 2-slot VMs each suite DAG is deployed on before migration.
int DefaultVmCount(const std::string& dag_name);

// A chain source -> T1 -> ... -> Tn -> sink.
DagDef LinearChain(int length);

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_BUNDLED_H_

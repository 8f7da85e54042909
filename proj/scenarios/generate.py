#!/usr/bin/env python3
# Copyright 2026 The flowmigrate Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the bundled scenario files.

Every DAG starts on n 2-slot VMs. Scale-in packs it onto ceil(n/2) 4-slot
VMs; scale-out spreads it over one 1-slot VM per instance.
"""

import json
import math
import pathlib

# name -> (default 2-slot VM count, total task instances)
DAGS = {
    "linear": (3, 5),
    "diamond": (4, 8),
    "star": (4, 8),
    "grid": (11, 21),
    "traffic": (7, 13),
}


def vms(prefix, count, slots):
    return [{"vmId": f"{prefix}-{i + 1}", "slotCount": slots} for i in range(count)]


def scenario(name, dag, before, after):
    return {
        "name": name,
        "dag": dag,
        "strategy": "CCR",
        "sourceRate": 8,
        "runDuration": "720s",
        "migrationTriggerAt": "180s",
        "ackTimeout": "30s",
        "checkpointInterval": "30s",
        "initResendInterval": "1s",
        "rebalanceDuration": "7.26s",
        "networkDelayMs": 0,
        "randomSeed": 42,
        "vmsBefore": before,
        "vmsAfter": after,
        "scheduleBefore": "round-robin",
        "scheduleAfter": "round-robin",
    }


def main():
    out = pathlib.Path(__file__).resolve().parent
    docs = {}
    for dag, (n, instances) in DAGS.items():
        docs[f"{dag}_scalein"] = scenario(
            f"{dag}_scalein", dag, vms("d2", n, 2), vms("d3", math.ceil(n / 2), 4))
        docs[f"{dag}_scaleout"] = scenario(
            f"{dag}_scaleout", dag, vms("d2", n, 2), vms("d1", instances, 1))
    docs["linear50_stress"] = scenario(
        "linear50_stress", "linear50", vms("d2", 25, 2), vms("d3", 13, 4))
    for name, doc in docs.items():
        (out / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()

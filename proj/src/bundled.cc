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

#include "flowmigrate/bundled.h"

#include <map>
#include <utility>

namespace flowmigrate {
namespace {

constexpr char kSource[] = "src";
constexpr char kSink[] = "sink";

struct Builder {
  DagDef dag;

  explicit Builder(std::string name) {
    dag.name = std::move(name);
    dag.source_tasks = {kSource};
    dag.sink_tasks = {kSink};
  }

  Builder& Task(const std::string& id, const std::string& name,
                int instances = 1) {
    TaskDef t;
    t.task_id = id;
    t.name = name;
    t.instance_count = instances;
    dag.tasks.push_back(std::move(t));
    return *this;
  }

  Builder& Edge(const std::string& from, const std::string& to) {
    dag.edges.push_back({from, to, Grouping::kDuplicate});
    return *this;
  }
};

DagDef Diamond() {
  // A fans out to B, C, D which join at E (24 ev/s). E carries one spare
  // instance so the slot total matches the published deployment (8).
  Builder b("diamond");
  b.Task("A", "split").Task("B", "branch-b").Task("C", "branch-c")
      .Task("D", "branch-d").Task("E", "join", 4);
  b.Edge(kSource, "A").Edge("A", "B").Edge("A", "C").Edge("A", "D");
  b.Edge("B", "E").Edge("C", "E").Edge("D", "E").Edge("E", kSink);
  return b.dag;
}

DagDef Star() {
  // Hub-and-spoke: two ingress spokes feed hub D (16 ev/s), which fans out
  // to two egress spokes (16 ev/s each). Sink sees 32 ev/s.
  Builder b("star");
  b.Task("B", "ingress-1").Task("C", "ingress-2").Task("D", "hub", 2)
      .Task("E", "egress-1", 2).Task("F", "egress-2", 2);
  b.Edge(kSource, "B").Edge(kSource, "C").Edge("B", "D").Edge("C", "D");
  b.Edge("D", "E").Edge("D", "F").Edge("E", kSink).Edge("F", kSink);
  return b.dag;
}

DagDef Grid() {
  // Smart-grid predictive analytics. Two levels of fan-out give four
  // meter/weather paths (end-to-end selectivity 1:4) that are joined back
  // at L (16), M (24) and N (32 ev/s).
  Builder b("grid");
  b.Task("A", "parse").Task("B", "range-filter").Task("C", "meter-branch")
      .Task("D", "weather-branch").Task("E", "bloom-filter")
      .Task("F", "interpolate").Task("G", "annotate").Task("H", "kalman")
      .Task("I", "sliding-avg").Task("J", "linear-regression")
      .Task("K", "decision-tree").Task("L", "join-meter", 2)
      .Task("M", "join-weather", 3).Task("N", "aggregate", 4)
      .Task("O", "error-estimate");
  b.Edge(kSource, "A").Edge("A", "B").Edge("B", "C").Edge("B", "D");
  b.Edge("C", "E").Edge("C", "F").Edge("D", "G").Edge("D", "H");
  b.Edge("E", "I").Edge("F", "J").Edge("G", "K").Edge("H", "O");
  b.Edge("I", "L").Edge("J", "L").Edge("L", "M").Edge("K", "M");
  b.Edge("M", "N").Edge("O", "N").Edge("N", kSink);
  return b.dag;
}

DagDef Traffic() {
  // GPS traffic analytics: two 8 ev/s branches (map-match, speed) rejoin
  // at I and J (16 ev/s each).
  Builder b("traffic");
  b.Task("A", "parse-gps").Task("B", "dedup").Task("C", "map-match")
      .Task("D", "speed").Task("E", "segment").Task("F", "road-stats")
      .Task("G", "congestion").Task("H", "smooth").Task("K", "anomaly")
      .Task("I", "join", 2).Task("J", "publish", 2);
  b.Edge(kSource, "A").Edge("A", "B").Edge("B", "C").Edge("B", "D");
  b.Edge("C", "E").Edge("E", "F").Edge("D", "G").Edge("G", "H");
  b.Edge("H", "K").Edge("F", "I").Edge("K", "I").Edge("I", "J");
  b.Edge("J", kSink);
  return b.dag;
}

}  // namespace

DagDef LinearChain(int length) {
  Builder b(length == 5 ? "linear" : "linear" + std::to_string(length));
  std::string prev = kSource;
  for (int i = 1; i <= length; ++i) {
    std::string id = "T" + std::to_string(i);
    b.Task(id, "stage-" + std::to_string(i)).Edge(prev, id);
    prev = id;
  }
  b.Edge(prev, kSink);
  return b.dag;
}

std::optional<DagDef> BundledDag(const std::string& name) {
  if (name == "linear") return LinearChain(5);
  if (name == "linear50") return LinearChain(50);
  if (name == "diamond") return Diamond();
  if (name == "star") return Star();
  if (name == "grid") return Grid();
  if (name == "traffic") return Traffic();
  return std::nullopt;
}

const std::vector<std::string>& SuiteDagNames() {
  static const std::vector<std::string> names = {"linear", "diamond", "star",
                                                 "grid", "traffic"};
  return names;
}

int DefaultVmCount(const std::string& dag_name) {
  static const std::map<std::string, int> counts = {
      {"linear", 3}, {"diamond", 4}, {"star", 4}, {"grid", 11},
      {"traffic", 7}, {"linear50", 25}};
  auto it = counts.find(dag_name);
  return it == counts.end() ? 0 : it->second;
}

}  // namespace flowmigrate

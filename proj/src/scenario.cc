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

#include "flowmigrate/scenario.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flowmigrate/bundled.h"
#include "flowmigrate/errors.h"

namespace flowmigrate {

using nlohmann::json;

std::string_view StrategyName(StrategyKind s) {
  switch (s) {
    case StrategyKind::kDsm: return "DSM";
    case StrategyKind::kDcr: return "DCR";
    case StrategyKind::kCcr: return "CCR";
  }
  return "?";
}

std::optional<StrategyKind> ParseStrategy(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "DSM") return StrategyKind::kDsm;
  if (upper == "DCR") return StrategyKind::kDcr;
  if (upper == "CCR") return StrategyKind::kCcr;
  return std::nullopt;
}

Duration StoreLatencyModel::Cost(std::size_t bytes) const {
  double ns = per_byte_ns * static_cast<double>(bytes);
  auto ms = static_cast<std::int64_t>(std::ceil(ns / 1e6));
  return per_record + Duration(ms);
}

double ScenarioConfig::ExpectedOutputRate() const {
  return source_rate * PathMultiplicity(dag);
}

namespace {

[[noreturn]] void FieldError(const std::string& field, const std::string& why,
                             ErrorCode code = ErrorCode::kParse) {
  throw ConfigError(code, field, "field '" + field + "': " + why);
}

Duration ReadDuration(const json& doc, const std::string& field,
                      Duration fallback) {
  auto it = doc.find(field);
  if (it == doc.end()) return fallback;
  if (it->is_number()) {
    return Duration(static_cast<std::int64_t>(std::llround(it->get<double>())));
  }
  if (it->is_string()) return ParseDuration(it->get<std::string>(), field);
  FieldError(field, "expected a duration");
}

double ReadNumber(const json& doc, const std::string& field, double fallback) {
  auto it = doc.find(field);
  if (it == doc.end()) return fallback;
  if (!it->is_number()) FieldError(field, "expected a number");
  return it->get<double>();
}

std::string ReadString(const json& doc, const std::string& field) {
  auto it = doc.find(field);
  if (it == doc.end() || !it->is_string()) {
    FieldError(field, "expected a string");
  }
  return it->get<std::string>();
}

DagDef ParseDag(const json& node) {
  if (node.is_string()) {
    auto dag = BundledDag(node.get<std::string>());
    if (!dag) FieldError("dag", "unknown bundled dag '" + node.get<std::string>() + "'");
    return *dag;
  }
  if (!node.is_object()) FieldError("dag", "expected a name or an object");

  DagDef dag;
  dag.name = node.value("name", std::string("inline"));
  if (!node.contains("tasks") || !node["tasks"].is_array()) {
    FieldError("dag.tasks", "expected an array");
  }
  for (const json& t : node["tasks"]) {
    TaskDef def;
    def.task_id = ReadString(t, "taskId");
    def.name = t.value("name", def.task_id);
    def.service_time = ReadDuration(t, "serviceTimeMs", def.service_time);
    def.selectivity = ReadNumber(t, "selectivity", def.selectivity);
    def.stateful = t.value("stateful", true);
    def.instance_count =
        static_cast<int>(ReadNumber(t, "instanceCount", def.instance_count));
    dag.tasks.push_back(std::move(def));
  }
  for (const json& e : node.value("edges", json::array())) {
    EdgeDef edge;
    edge.from = ReadString(e, "from");
    edge.to = ReadString(e, "to");
    std::string grouping = e.value("grouping", std::string("DUPLICATE"));
    if (grouping == "DUPLICATE") {
      edge.grouping = Grouping::kDuplicate;
    } else if (grouping == "SHUFFLE") {
      edge.grouping = Grouping::kShuffle;
    } else {
      FieldError("dag.edges.grouping", "unknown grouping '" + grouping + "'");
    }
    dag.edges.push_back(std::move(edge));
  }
  dag.source_tasks = node.value("sourceTasks", std::vector<TaskId>{});
  dag.sink_tasks = node.value("sinkTasks", std::vector<TaskId>{});
  return dag;
}

std::vector<VmDef> ParseVms(const json& doc, const std::string& field) {
  auto it = doc.find(field);
  if (it == doc.end() || !it->is_array()) FieldError(field, "expected an array");
  std::vector<VmDef> vms;
  for (const json& v : *it) {
    VmDef vm;
    vm.vm_id = ReadString(v, "vmId");
    vm.slot_count = static_cast<int>(ReadNumber(v, "slotCount", 1));
    vms.push_back(std::move(vm));
  }
  return vms;
}

Schedule ParseSchedule(const json& doc, const std::string& field,
                       const DagDef& dag, const std::vector<VmDef>& vms) {
  auto it = doc.find(field);
  if (it == doc.end() || (it->is_string() && *it == "round-robin")) {
    auto instances = EnumerateInstances(dag);
    try {
      return RoundRobinPlacement(instances, vms);
    } catch (const Error& e) {
      FieldError(field, e.what(), e.code());
    }
  }
  if (!it->is_object() || !it->contains("placements")) {
    FieldError(field, "expected \"round-robin\" or {\"placements\": {...}}");
  }
  Schedule schedule;
  for (const auto& [key, value] : (*it)["placements"].items()) {
    auto inst = InstanceId::Parse(key);
    if (!inst) FieldError(field, "bad instance id '" + key + "'");
    schedule.placements[*inst] = {
        ReadString(value, "vmId"),
        static_cast<int>(ReadNumber(value, "slotIndex", 0))};
  }
  return schedule;
}

void Require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) FieldError(field, why, ErrorCode::kInvariant);
}

std::string Describe(const ValidationResult& r) {
  std::string out;
  for (const Violation& v : r.violations) {
    if (!out.empty()) out += "; ";
    out += v.kind + " (" + v.subject + ")";
  }
  return out;
}

}  // namespace

void ValidateScenario(const ScenarioConfig& c) {
  ValidationResult dag_check = ValidateDag(c.dag);
  Require(dag_check.ok(), "dag", Describe(dag_check));

  auto rates = ComputeCumulativeRates(c.dag, c.source_rate);
  for (const TaskDef& t : c.dag.tasks) {
    Require(t.instance_count >= MinInstances(rates[t.task_id],
                                             c.rate_per_instance),
            "dag.tasks." + t.task_id + ".instanceCount",
            "too few instances for input rate " +
                std::to_string(rates[t.task_id]));
  }
  Require(c.source_rate > 0, "sourceRate", "must be positive");
  Require(c.run_duration.count() > 0, "runDuration", "must be positive");
  Require(c.migration_trigger_at.count() > 0, "migrationTriggerAt",
          "must be positive");
  Require(c.migration_trigger_at < c.run_duration, "migrationTriggerAt",
          "must be before runDuration");
  Require(c.ack_timeout.count() > 0, "ackTimeout", "must be positive");
  Require(c.checkpoint_interval.count() > 0, "checkpointInterval",
          "must be positive");
  Require(c.init_resend_interval.count() > 0, "initResendInterval",
          "must be positive");
  // A zero rebalance is allowed for parameter sweeps.
  Require(c.rebalance_duration.count() >= 0, "rebalanceDuration",
          "must not be negative");
  Require(c.network_delay.count() >= 0, "networkDelayMs",
          "must not be negative");
  Require(c.AckSweepInterval().count() > 0, "ackSweepInterval",
          "must be positive");
  Require(c.worker_startup_min.count() >= 0 &&
              c.worker_startup_jitter.count() >= 0,
          "workerStartupMin", "must not be negative");

  ValidationResult before =
      ValidateSchedule(c.schedule_before, c.dag, c.vms_before);
  Require(before.ok(), "scheduleBefore", Describe(before));
  ValidationResult after = ValidateSchedule(c.schedule_after, c.dag, c.vms_after);
  if (!after.ok() && static_cast<int>(EnumerateInstances(c.dag).size()) >
                         TotalSlots(c.vms_after)) {
    FieldError("scheduleAfter", "insufficient-slots: " + Describe(after),
               ErrorCode::kInsufficientSlots);
  }
  Require(after.ok(), "scheduleAfter", Describe(after));
}

ScenarioConfig ParseScenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a 1-based line number.
    std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    auto line = 1 + std::count(text.begin(), text.begin() + limit, '\n');
    throw ConfigError(ErrorCode::kParse, "",
                      "line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) FieldError("", "scenario must be a JSON object");

  ScenarioConfig c;
  try {
    c.name = doc.value("name", std::string("scenario"));
    if (!doc.contains("dag")) FieldError("dag", "missing");
    c.dag = ParseDag(doc["dag"]);

    if (doc.contains("strategy")) {
      if (!doc["strategy"].is_string()) FieldError("strategy", "expected a string");
      auto s = ParseStrategy(doc["strategy"].get<std::string>());
      if (!s) {
        FieldError("strategy", "unknown strategy '" +
                                   doc["strategy"].get<std::string>() + "'");
      }
      c.strategy = *s;
    }

    c.source_rate = ReadNumber(doc, "sourceRate", c.source_rate);
    c.run_duration = ReadDuration(doc, "runDuration", c.run_duration);
    c.migration_trigger_at =
        ReadDuration(doc, "migrationTriggerAt", c.migration_trigger_at);
    c.ack_timeout = ReadDuration(doc, "ackTimeout", c.ack_timeout);
    c.checkpoint_interval =
        ReadDuration(doc, "checkpointInterval", c.checkpoint_interval);
    c.init_resend_interval =
        ReadDuration(doc, "initResendInterval", c.init_resend_interval);
    c.rebalance_duration =
        ReadDuration(doc, "rebalanceDuration", c.rebalance_duration);
    c.network_delay = ReadDuration(doc, "networkDelayMs", c.network_delay);
    if (doc.contains("randomSeed")) {
      if (!doc["randomSeed"].is_number_integer()) {
        FieldError("randomSeed", "expected an integer");
      }
      c.random_seed = doc["randomSeed"].get<std::uint64_t>();
    }
    c.migrate = doc.value("migrate", c.migrate);
    c.rate_per_instance = ReadNumber(doc, "ratePerInstance", c.rate_per_instance);
    c.worker_startup_min =
        ReadDuration(doc, "workerStartupMin", c.worker_startup_min);
    c.worker_startup_jitter =
        ReadDuration(doc, "workerStartupJitter", c.worker_startup_jitter);
    if (doc.contains("ackSweepInterval")) {
      c.ack_sweep_interval =
          ReadDuration(doc, "ackSweepInterval", c.ack_timeout);
    }
    if (doc.contains("dataAcking")) c.data_acking = doc["dataAcking"].get<bool>();
    c.ack_on_commit = doc.value("ackOnCommit", c.ack_on_commit);
    c.store_latency.per_record =
        ReadDuration(doc, "storeRecordLatency", c.store_latency.per_record);
    c.store_latency.per_byte_ns =
        ReadNumber(doc, "storeByteCostNs", c.store_latency.per_byte_ns);

    c.vms_before = ParseVms(doc, "vmsBefore");
    c.vms_after = doc.contains("vmsAfter") ? ParseVms(doc, "vmsAfter")
                                           : c.vms_before;
    c.schedule_before = ParseSchedule(doc, "scheduleBefore", c.dag, c.vms_before);
    c.schedule_after = ParseSchedule(doc, "scheduleAfter", c.dag, c.vms_after);
  } catch (const json::exception& e) {
    throw ConfigError(ErrorCode::kParse, "", e.what());
  }

  ValidateScenario(c);
  return c;
}

ScenarioConfig LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(ErrorCode::kParse, "",
                      "cannot open scenario file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

}  // namespace flowmigrate

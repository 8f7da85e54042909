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


// Append-only record of source emissions, sink exits, replays and phase
// markers. Metrics are computed from this stream after a run.

#ifndef FLOWMIGRATE_TIMELINE_H_
#define FLOWMIGRATE_TIMELINE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "flowmigrate/event.h"
#include "flowmigrate/sim_time.h"

namespace flowmigrate {

enum class Site : std::uint8_t { kSourceEmit, kSinkExit, kPhase, kReplay };

std::string_view SiteName(Site site);

enum class PhaseMarker : std::uint8_t {
  kRequest,
  kDrainDone,
  kCaptureDone,
  kRebalanceStart,
  kRebalanceDone,
  kFirstInitAcked,
  kAllInitAcked,
  kSourceUnpaused,
};

std::string_view PhaseMarkerName(PhaseMarker marker);

struct TimelineRecord {
  SimTime ts{0};
  Site site = Site::kSourceEmit;
  EventId event_id = 0;
  std::uint64_t root_seq = 0;
  std::int32_t epoch = 0;
  bool replayed = false;
  std::optional<PhaseMarker> phase;

  bool operator==(const TimelineRecord&) const = default;
};

class Timeline {
 public:
  void Append(const TimelineRecord& record) { records_.push_back(record); }
  void AppendPhase(SimTime ts, PhaseMarker marker);

  const std::vector<TimelineRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // Time of the first marker with this name.
  std::optional<SimTime> FindPhase(PhaseMarker marker) const;

  // Header: ts_ms,site,event_id,root_seq,epoch,replayed,phase
  void WriteCsv(std::ostream& out) const;

 private:
  std::vector<TimelineRecord> records_;
};

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_TIMELINE_H_

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


#include "flowmigrate/timeline.h"

namespace flowmigrate {

std::string_view SiteName(Site site) {
  switch (site) {
    case Site::kSourceEmit: return "SOURCE_EMIT";
    case Site::kSinkExit: return "SINK_EXIT";
    case Site::kPhase: return "PHASE";
    case Site::kReplay: return "REPLAY";
  }
  return "?";
}

std::string_view PhaseMarkerName(PhaseMarker marker) {
  switch (marker) {
    case PhaseMarker::kRequest: return "REQUEST";
    case PhaseMarker::kDrainDone: return "DRAIN_DONE";
    case PhaseMarker::kCaptureDone: return "CAPTURE_DONE";
    case PhaseMarker::kRebalanceStart: return "REBALANCE_START";
    case PhaseMarker::kRebalanceDone: return "REBALANCE_DONE";
    case PhaseMarker::kFirstInitAcked: return "FIRST_INIT_ACKED";
    case PhaseMarker::kAllInitAcked: return "ALL_INIT_ACKED";
    case PhaseMarker::kSourceUnpaused: return "SOURCE_UNPAUSED";
  }
  return "?";
}

void Timeline::AppendPhase(SimTime ts, PhaseMarker marker) {
  TimelineRecord r;
  r.ts = ts;
  r.site = Site::kPhase;
  r.phase = marker;
  records_.push_back(r);
}

std::optional<SimTime> Timeline::FindPhase(PhaseMarker marker) const {
  for (const TimelineRecord& r : records_) {
    if (r.site == Site::kPhase && r.phase == marker) return r.ts;
  }
  return std::nullopt;
}

void Timeline::WriteCsv(std::ostream& out) const {
  out << "ts_ms,site,event_id,root_seq,epoch,replayed,phase\n";
  for (const TimelineRecord& r : records_) {
    out << r.ts.count() << ',' << SiteName(r.site) << ',' << r.event_id << ','
        << r.root_seq << ',' << r.epoch << ',' << (r.replayed ? 1 : 0) << ',';
    if (r.phase) out << PhaseMarkerName(*r.phase);
    out << '\n';
  }
}

}  // namespace flowmigrate

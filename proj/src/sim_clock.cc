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


#include "flowmigrate/sim_clock.h"

#include <thread>

namespace flowmigrate {

void SimClock::ScheduleAt(SimTime at, Action action) {
  if (at < now_) at = now_;
  queue_.push(Entry{at, next_seq_++, std::move(action)});
}

bool SimClock::Step() {
  if (queue_.empty()) return false;
  // priority_queue::top is const; the action is moved out via a copy of the
  // handle before pop.
  Entry entry = std::move(const_cast<Entry&>(queue_.top()));
  queue_.pop();
  Pace(entry.at);
  now_ = entry.at;
  ++executed_;
  entry.action();
  return true;
}

void SimClock::RunUntil(SimTime limit) {
  while (!queue_.empty() && queue_.top().at <= limit) Step();
}

void SimClock::SetRealtimeScale(double scale) {
  realtime_scale_ = scale;
  wall_start_ = std::chrono::steady_clock::now() -
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double, std::milli>(
                        static_cast<double>(now_.count()) * scale));
}

void SimClock::Pace(SimTime at) {
  if (realtime_scale_ <= 0.0) return;
  auto due = wall_start_ +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double, std::milli>(
                     static_cast<double>(at.count()) * realtime_scale_));
  std::this_thread::sleep_until(due);
}

}  // namespace flowmigrate

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


#ifndef FLOWMIGRATE_SIM_CLOCK_H_
#define FLOWMIGRATE_SIM_CLOCK_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "flowmigrate/sim_time.h"

namespace flowmigrate {

// Discrete-event clock. Actions with the same fire time run in the order
// they were scheduled.
class SimClock {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  // Scheduling in the past is clamped to now.
  void ScheduleAt(SimTime at, Action action);
  void ScheduleAfter(Duration delay, Action action) {
    ScheduleAt(now_ + delay, std::move(action));
  }

  // Runs the earliest pending action. Returns false when none is left.
  bool Step();
  // Runs every action with fire time <= limit; leaves now at the last
  // executed action.
  void RunUntil(SimTime limit);

  bool empty() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t executed() const { return executed_; }

  // Paces execution against the wall clock: one simulated millisecond takes
  // `scale` real milliseconds. Zero runs as fast as possible.
  void SetRealtimeScale(double scale);

 private:
  struct Entry {
    SimTime at;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  void Pace(SimTime at);

  SimTime now_{0};
  std::uint64_t next_seq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  double realtime_scale_ = 0.0;
  std::chrono::steady_clock::time_point wall_start_;
};

}  // namespace flowmigrate

#endif  // FLOWMIGRATE_SIM_CLOCK_H_

// Copyright 2026 The Authsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUTHSIM_COMMON_SIM_TIME_H_
#define AUTHSIM_COMMON_SIM_TIME_H_

#include <chrono>
#include <cstdint>

namespace authsim {

// Simulated clock. Time points only ever come from the runtime driving the
// simulation, never from the host, so traces are reproducible.
struct SimClock {
  using rep = std::int64_t;
  using period = std::milli;
  using duration = std::chrono::duration<rep, period>;
  using time_point = std::chrono::time_point<SimClock>;
  static constexpr bool is_steady = true;
};

using SimDuration = SimClock::duration;
using SimTime = SimClock::time_point;

constexpr SimTime SimEpoch() { return SimTime{}; }

constexpr SimTime FromMillis(std::int64_t ms) {
  return SimTime{SimDuration{ms}};
}

constexpr std::int64_t ToMillis(SimTime t) {
  return t.time_since_epoch().count();
}

}  // namespace authsim

#endif  // AUTHSIM_COMMON_SIM_TIME_H_

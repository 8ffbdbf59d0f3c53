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

#ifndef AUTHSIM_DEVICE_GATE_H_
#define AUTHSIM_DEVICE_GATE_H_

#include <chrono>
#include <optional>

#include "absl/status/statusor.h"
#include "authsim/common/sim_time.h"

namespace authsim::device {

struct GateConfig {
  SimDuration unlock_window = std::chrono::seconds(60);
  int lockout_threshold = 5;
};

struct GateStatus {
  bool unlocked = false;
  // Set when unlocked.
  std::optional<SimTime> until;
  int consecutive_failures = 0;
};

// Biometric gate in front of every key operation. Matching itself is an
// oracle supplied by the caller.
class BiometricGate {
 public:
  explicit BiometricGate(GateConfig config = {}) : config_(config) {}

  // A match opens the gate for the unlock window; a no-match leaves it as is
  // and counts a failure. Reaching the threshold returns GateLockout, and the
  // gate then refuses every sample until ClearLockout().
  absl::StatusOr<GateStatus> Present(bool match, SimTime now);

  bool IsUnlocked(SimTime now) const;
  bool locked_out() const { return locked_out_; }
  int consecutive_failures() const { return failures_; }
  GateStatus Status(SimTime now) const;

  void Relock() { until_.reset(); }
  // Recovery path only.
  void ClearLockout();

 private:
  GateConfig config_;
  std::optional<SimTime> until_;
  int failures_ = 0;
  bool locked_out_ = false;
};

}  // namespace authsim::device

#endif  // AUTHSIM_DEVICE_GATE_H_

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

#include "authsim/device/gate.h"

#include "authsim/common/status.h"

namespace authsim::device {

absl::StatusOr<GateStatus> BiometricGate::Present(bool match, SimTime now) {
  if (locked_out_) {
    return MakeError(ErrorCode::kGateLockout,
                     "biometric lockout; recovery required");
  }
  if (match) {
    failures_ = 0;
    until_ = now + config_.unlock_window;
    return Status(now);
  }
  ++failures_;
  if (failures_ >= config_.lockout_threshold) {
    locked_out_ = true;
    until_.reset();
    return MakeError(ErrorCode::kGateLockout,
                     std::to_string(failures_) + " consecutive failures");
  }
  return Status(now);
}

bool BiometricGate::IsUnlocked(SimTime now) const {
  return !locked_out_ && until_.has_value() && now < *until_;
}

GateStatus BiometricGate::Status(SimTime now) const {
  GateStatus s;
  s.unlocked = IsUnlocked(now);
  if (s.unlocked) s.until = until_;
  s.consecutive_failures = failures_;
  return s;
}

void BiometricGate::ClearLockout() {
  locked_out_ = false;
  failures_ = 0;
  until_.reset();
}

}  // namespace authsim::device

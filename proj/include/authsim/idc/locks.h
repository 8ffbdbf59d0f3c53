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

#ifndef AUTHSIM_IDC_LOCKS_H_
#define AUTHSIM_IDC_LOCKS_H_

#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/identity/aal.h"

namespace authsim::idc {

enum class LockReason { kUserInitiated, kRiskAutoLock };
std::string_view LockReasonName(LockReason reason);

// Either every entity of the user or the listed ones.
struct LockScope {
  bool all = false;
  std::set<PrincipalId> entities;

  static LockScope All() { return {.all = true}; }
  static LockScope Of(PrincipalId entity) { return {.entities = {std::move(entity)}}; }
  bool Covers(const PrincipalId& entity) const {
    return all || entities.contains(entity);
  }
  bool empty() const { return !all && entities.empty(); }
  friend bool operator==(const LockScope&, const LockScope&) = default;
};

struct LockState {
  PrincipalId user;
  LockScope scope;
  LockReason reason = LockReason::kUserInitiated;
  SimTime set_at;

  friend bool operator==(const LockState&, const LockState&) = default;
};
Json LockStateToJson(const LockState& state);
absl::StatusOr<LockState> LockStateFromJson(const Json& json);

struct LockConfig {
  // Failed authentication events for one user that trigger an auto-lock.
  std::size_t auto_lock_failures = 10;
  SimDuration auto_lock_window = std::chrono::minutes(5);
};

// Per-user account locks. Locking is allowed from any session, including a
// tentative one on the device-loss path; unlocking needs AAL2.
class LockManager {
 public:
  explicit LockManager(LockConfig config = {}) : config_(config) {}

  // Adds `scope` to the user's lock. A later reason overrides the earlier.
  LockState Lock(const PrincipalId& user, const LockScope& scope, LockReason reason,
                 SimTime now);
  // TentativeAccessDenied below AAL2. Unlocking one entity while `all` is
  // locked is InvalidArgument: the caller must unlock all first. Returns the
  // remaining state, nullopt once nothing is locked.
  absl::StatusOr<std::optional<LockState>> Unlock(const PrincipalId& user,
                                                  const LockScope& scope,
                                                  identity::Aal session_aal);

  // Counts a failed authentication; returns the auto-lock once the count in
  // the window reaches the threshold.
  std::optional<LockState> ReportFailure(const PrincipalId& user, SimTime now);

  bool IsLocked(const PrincipalId& user, const PrincipalId& entity) const;
  const LockState* State(const PrincipalId& user) const;
  const std::map<PrincipalId, LockState>& states() const { return locks_; }

  // Journal replay: install or drop a state without policy checks.
  void Put(const LockState& state) { locks_[state.user] = state; }
  void Clear(const PrincipalId& user) { locks_.erase(user); }

  Json ToJson() const;
  static absl::StatusOr<LockManager> FromJson(const Json& json, LockConfig config = {});

 private:
  LockConfig config_;
  std::map<PrincipalId, LockState> locks_;
  std::map<PrincipalId, std::deque<SimTime>> failures_;
};

}  // namespace authsim::idc

#endif  // AUTHSIM_IDC_LOCKS_H_

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

#include "authsim/idc/locks.h"

#include "authsim/common/status.h"

namespace authsim::idc {

std::string_view LockReasonName(LockReason reason) {
  return reason == LockReason::kRiskAutoLock ? "RiskAutoLock" : "UserInitiated";
}

Json LockStateToJson(const LockState& state) {
  Json entities = Json::array();
  for (const auto& e : state.scope.entities) entities.push_back(e.value());
  return {{"user", state.user.value()},
          {"all", state.scope.all},
          {"entities", entities},
          {"reason", LockReasonName(state.reason)},
          {"set_at", ToMillis(state.set_at)}};
}

absl::StatusOr<LockState> LockStateFromJson(const Json& json) {
  try {
    LockState s;
    s.user = PrincipalId(json.at("user").get<std::string>());
    s.scope.all = json.at("all").get<bool>();
    for (const Json& e : json.at("entities")) {
      s.scope.entities.insert(PrincipalId(e.get<std::string>()));
    }
    const std::string reason = json.at("reason").get<std::string>();
    if (reason == "RiskAutoLock") {
      s.reason = LockReason::kRiskAutoLock;
    } else if (reason != "UserInitiated") {
      return MakeError(ErrorCode::kSchemaError, "unknown lock reason");
    }
    s.set_at = FromMillis(json.at("set_at").get<std::int64_t>());
    return s;
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kSchemaError, e.what());
  }
}

LockState LockManager::Lock(const PrincipalId& user, const LockScope& scope,
                            LockReason reason, SimTime now) {
  auto [it, fresh] = locks_.try_emplace(user, LockState{user, {}, reason, now});
  LockState& state = it->second;
  state.scope.all = state.scope.all || scope.all;
  state.scope.entities.insert(scope.entities.begin(), scope.entities.end());
  state.reason = reason;
  state.set_at = now;
  return state;
}

absl::StatusOr<std::optional<LockState>> LockManager::Unlock(const PrincipalId& user,
                                                             const LockScope& scope,
                                                             identity::Aal session_aal) {
  if (session_aal < identity::Aal::kAal2) {
    return MakeError(ErrorCode::kTentativeAccessDenied, "unlock needs an AAL2 session");
  }
  auto it = locks_.find(user);
  if (it == locks_.end()) return std::optional<LockState>();
  LockState& state = it->second;
  if (scope.all) {
    locks_.erase(it);
    failures_.erase(user);
    return std::optional<LockState>();
  }
  if (state.scope.all) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "every entity is locked; unlock all before single entities");
  }
  for (const auto& e : scope.entities) state.scope.entities.erase(e);
  if (state.scope.empty()) {
    locks_.erase(it);
    return std::optional<LockState>();
  }
  return std::optional<LockState>(state);
}

std::optional<LockState> LockManager::ReportFailure(const PrincipalId& user, SimTime now) {
  std::deque<SimTime>& window = failures_[user];
  window.push_back(now);
  while (window.front() + config_.auto_lock_window <= now) window.pop_front();
  if (window.size() < config_.auto_lock_failures) return std::nullopt;
  window.clear();
  return Lock(user, LockScope::All(), LockReason::kRiskAutoLock, now);
}

bool LockManager::IsLocked(const PrincipalId& user, const PrincipalId& entity) const {
  auto it = locks_.find(user);
  return it != locks_.end() && it->second.scope.Covers(entity);
}

const LockState* LockManager::State(const PrincipalId& user) const {
  auto it = locks_.find(user);
  return it == locks_.end() ? nullptr : &it->second;
}

Json LockManager::ToJson() const {
  Json out = Json::array();
  for (const auto& [user, state] : locks_) out.push_back(LockStateToJson(state));
  return out;
}

absl::StatusOr<LockManager> LockManager::FromJson(const Json& json, LockConfig config) {
  if (!json.is_array()) return MakeError(ErrorCode::kSchemaError, "locks must be an array");
  LockManager out(config);
  for (const Json& entry : json) {
    AUTHSIM_ASSIGN_OR_RETURN(LockState s, LockStateFromJson(entry));
    out.locks_[s.user] = s;
  }
  return out;
}

}  // namespace authsim::idc

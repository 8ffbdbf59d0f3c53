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

#include "authsim/baa/authority.h"

#include "authsim/common/status.h"

namespace authsim::baa {

std::string_view AccessModeName(AccessMode mode) {
  return mode == AccessMode::kFull ? "Full" : "Tentative";
}

BehavioralAuthority::BehavioralAuthority(PrincipalId id, BaaConfig config,
                                         crypto::SigningKey key, crypto::Drbg rng)
    : id_(id),
      config_(config),
      rng_(rng.Fork("baa")),
      issuer_(id, std::move(key), rng.Fork("issuer"), config.token_lifetime) {}

void BehavioralAuthority::EnrollUser(const PrincipalId& user,
                                     std::string_view backup_password) {
  UserState& state = users_[user];
  state.profile = BehavioralProfile(user, config_.dimension);
  state.password = crypto::HashPassword(backup_password, rng_,
                                        crypto::PasswordHashParams::Minimal());
}

absl::Status BehavioralAuthority::Ingest(const device::BehavioralRecord& record,
                                         AccessMode mode) {
  auto it = users_.find(record.user);
  if (it == users_.end()) return MakeError(ErrorCode::kNotFound, "user not enrolled");
  if (record.features.size() != config_.dimension) {
    return MakeError(ErrorCode::kFeatureDimensionError, "wrong record dimension");
  }
  it->second.records.push_back(record);
  if (mode == AccessMode::kFull) {
    AUTHSIM_RETURN_IF_ERROR(it->second.profile.Update(record.features));
  }
  return absl::OkStatus();
}

absl::StatusOr<Verdict> BehavioralAuthority::ComputeVerdict(
    const VerdictRequest& request) const {
  auto it = users_.find(request.user);
  if (it == users_.end()) return MakeError(ErrorCode::kNotFound, "user not enrolled");
  const UserState& state = it->second;
  if (!state.profile.trained(config_.training_min)) {
    return MakeError(ErrorCode::kProfileNotTrained, "profile not trained");
  }
  std::vector<std::vector<double>> window;
  for (const auto& r : state.records) {
    if (r.captured_at >= request.boundary) window.push_back(r.features);
  }
  return ScoreWindow(state.profile, window, config_);
}

absl::StatusOr<BaaAccess> BehavioralAuthority::Login(const PrincipalId& user,
                                                     std::string_view password,
                                                     SimTime now) {
  auto it = users_.find(user);
  if (it == users_.end()) return MakeError(ErrorCode::kAccessDenied, "unknown user");
  std::deque<SimTime>& attempts = it->second.attempts;
  while (!attempts.empty() && attempts.front() + config_.rate_window <= now) {
    attempts.pop_front();
  }
  if (attempts.size() >= config_.rate_limit) {
    return MakeError(ErrorCode::kRateLimited, "too many login attempts");
  }
  attempts.push_back(now);
  if (!crypto::VerifyPassword(it->second.password, password)) {
    return MakeError(ErrorCode::kAccessDenied, "wrong backup password");
  }
  return BaaAccess{user, AccessMode::kTentative};
}

absl::StatusOr<federation::AccessToken> BehavioralAuthority::FederatedAssertion(
    const VerdictRequest& request, const DeviceId& device, bool recovery_path,
    SimTime now) {
  if (IsLockedOut(device)) {
    return MakeError(ErrorCode::kAccountLocked, "device locked out of the BAA");
  }
  AUTHSIM_ASSIGN_OR_RETURN(Verdict verdict, ComputeVerdict(request));
  if (verdict == Verdict::kInsufficientData) {
    return MakeError(ErrorCode::kVerdictPending, "not enough post-login records");
  }
  if (verdict == Verdict::kNoMatch && recovery_path) lockouts_.insert(device);
  federation::Scope scope{{"behavior", std::string(VerdictName(verdict))}};
  return issuer_.MintFresh(request.requester.value(), request.requester,
                           std::move(scope), identity::Aal::kNone, now);
}

absl::Status BehavioralAuthority::ResetProfile(const BaaAccess& access) {
  if (access.mode != AccessMode::kFull) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     "tentative access cannot manage the profile");
  }
  auto it = users_.find(access.user);
  if (it == users_.end()) return MakeError(ErrorCode::kNotFound, "user not enrolled");
  it->second.profile = BehavioralProfile(access.user, config_.dimension);
  it->second.records.clear();
  return absl::OkStatus();
}

const BehavioralProfile* BehavioralAuthority::Profile(const PrincipalId& user) const {
  auto it = users_.find(user);
  return it == users_.end() ? nullptr : &it->second.profile;
}

std::size_t BehavioralAuthority::WindowSize(const PrincipalId& user) const {
  auto it = users_.find(user);
  return it == users_.end() ? 0 : it->second.records.size();
}

}  // namespace authsim::baa

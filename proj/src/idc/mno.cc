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

#include "authsim/idc/mno.h"

#include <cstdio>

#include "authsim/common/status.h"
#include "authsim/identity/aal.h"

namespace authsim::idc {

MnoIdp::MnoIdp(PrincipalId id, crypto::SigningKey key, crypto::Drbg rng, MnoConfig config)
    : id_(id),
      config_(config),
      rng_(rng.Fork("mno")),
      issuer_(id, std::move(key), rng.Fork("issuer"), config.token_lifetime) {}

void MnoIdp::AddSubscriber(const PrincipalId& user, std::string msisdn,
                           federation::Scope verified) {
  verified["msisdn"] = msisdn;
  subscribers_[user] = Subscriber{std::move(msisdn), std::move(verified), std::nullopt};
}

std::set<std::string> MnoIdp::VerifiableAttributes(const PrincipalId& user) const {
  std::set<std::string> out;
  auto it = subscribers_.find(user);
  if (it == subscribers_.end()) return out;
  for (const auto& [name, value] : it->second.verified) out.insert(name);
  return out;
}

void MnoIdp::ReportLost(const PrincipalId& user, const DeviceId& device, SimTime now) {
  auto it = subscribers_.find(user);
  if (it != subscribers_.end()) it->second.lost = LostReport{device, now, false};
}

void MnoIdp::IssueReplacementSim(const PrincipalId& user) {
  auto it = subscribers_.find(user);
  if (it != subscribers_.end() && it->second.lost) it->second.lost->new_sim_issued = true;
}

bool MnoIdp::ConfirmLost(const PrincipalId& user) const {
  auto report = Report(user);
  return report && report->new_sim_issued;
}

std::optional<LostReport> MnoIdp::Report(const PrincipalId& user) const {
  auto it = subscribers_.find(user);
  return it == subscribers_.end() ? std::nullopt : it->second.lost;
}

absl::StatusOr<SmsDispatch> MnoIdp::StartOtp(const PrincipalId& requester,
                                             const PrincipalId& user,
                                             std::vector<std::string> attributes,
                                             SimTime now) {
  auto it = subscribers_.find(user);
  if (it == subscribers_.end()) return MakeError(ErrorCode::kNotFound, "not a subscriber");
  for (const auto& a : attributes) {
    if (!it->second.verified.contains(a)) {
      return MakeError(ErrorCode::kNoSuchAttribute, "operator does not hold " + a);
    }
  }
  char code[8];
  std::snprintf(code, sizeof code, "%06llu",
                static_cast<unsigned long long>(rng_.UniformInt(1'000'000)));
  std::string challenge_id = rng_.RandomHex(12);
  challenges_[challenge_id] =
      Challenge{requester, user, std::move(attributes), code, now + config_.otp_ttl, 0};
  return SmsDispatch{challenge_id, it->second.msisdn, code};
}

absl::StatusOr<federation::AccessToken> MnoIdp::VerifyOtp(const std::string& challenge_id,
                                                          const std::string& code,
                                                          SimTime now) {
  auto it = challenges_.find(challenge_id);
  if (it == challenges_.end()) return MakeError(ErrorCode::kInvalidGrant, "unknown challenge");
  Challenge& c = it->second;
  if (now >= c.expires_at) {
    challenges_.erase(it);
    return MakeError(ErrorCode::kExpired, "one-time code expired");
  }
  if (!crypto::SecureEqual(crypto::AsBytes(code), crypto::AsBytes(c.code))) {
    if (++c.attempts >= config_.max_attempts) challenges_.erase(it);
    return MakeError(ErrorCode::kAuthenticationFailed, "wrong one-time code");
  }
  const Subscriber& sub = subscribers_.at(c.user);
  federation::Scope scope;
  for (const auto& a : c.attributes) scope[a] = sub.verified.at(a);
  const identity::AuthFactor factor(identity::FactorKind::kMobileConnectSms, false);
  const PrincipalId requester = c.requester;
  challenges_.erase(it);
  return issuer_.MintFresh(challenge_id, requester, std::move(scope),
                           identity::AalForFactors({&factor, 1}), now);
}

}  // namespace authsim::idc

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

#ifndef AUTHSIM_IDC_MNO_H_
#define AUTHSIM_IDC_MNO_H_

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/sim_time.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/federation/token.h"

namespace authsim::idc {

struct MnoConfig {
  SimDuration otp_ttl = std::chrono::seconds(120);
  int max_attempts = 3;
  SimDuration token_lifetime = std::chrono::seconds(600);
};

// What the MNO sends over the simulated SMS channel. Only the subscriber's
// handset sees `code`; the requester gets `challenge_id`.
struct SmsDispatch {
  std::string challenge_id;
  std::string msisdn;
  std::string code;
};

struct LostReport {
  DeviceId device;
  SimTime reported_at;
  bool new_sim_issued = false;
};

// Simulated Mobile Connect IdP: SMS one-time codes plus the attributes the
// operator itself verified (msisdn and friends). A FIDO-to-MNO login would
// slot in beside StartOtp; only OTP is modeled.
class MnoIdp {
 public:
  MnoIdp(PrincipalId id, crypto::SigningKey key, crypto::Drbg rng, MnoConfig config = {});

  const PrincipalId& id() const { return id_; }
  const crypto::VerifyKey& verify_key() const { return issuer_.verify_key(); }

  void AddSubscriber(const PrincipalId& user, std::string msisdn,
                     federation::Scope verified);
  // Attribute names this operator can attest for `user`.
  std::set<std::string> VerifiableAttributes(const PrincipalId& user) const;

  void ReportLost(const PrincipalId& user, const DeviceId& device, SimTime now);
  void IssueReplacementSim(const PrincipalId& user);
  // True only when the device was reported lost and a new SIM was issued.
  bool ConfirmLost(const PrincipalId& user) const;
  std::optional<LostReport> Report(const PrincipalId& user) const;

  // NotFound for non-subscribers; NoSuchAttribute when `attributes` asks for
  // something the operator does not hold.
  absl::StatusOr<SmsDispatch> StartOtp(const PrincipalId& requester,
                                       const PrincipalId& user,
                                       std::vector<std::string> attributes, SimTime now);
  // AuthenticationFailed on a wrong code (the challenge dies after
  // max_attempts), Expired past the TTL, InvalidGrant for an unknown or used
  // challenge. On success a token for the requester.
  absl::StatusOr<federation::AccessToken> VerifyOtp(const std::string& challenge_id,
                                                    const std::string& code, SimTime now);

 private:
  struct Subscriber {
    std::string msisdn;
    federation::Scope verified;
    std::optional<LostReport> lost;
  };
  struct Challenge {
    PrincipalId requester;
    PrincipalId user;
    std::vector<std::string> attributes;
    std::string code;
    SimTime expires_at;
    int attempts = 0;
  };

  PrincipalId id_;
  MnoConfig config_;
  crypto::Drbg rng_;
  federation::TokenIssuer issuer_;
  std::map<PrincipalId, Subscriber> subscribers_;
  std::map<std::string, Challenge> challenges_;
};

}  // namespace authsim::idc

#endif  // AUTHSIM_IDC_MNO_H_

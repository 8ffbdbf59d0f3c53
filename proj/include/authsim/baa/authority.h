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

#ifndef AUTHSIM_BAA_AUTHORITY_H_
#define AUTHSIM_BAA_AUTHORITY_H_

#include <deque>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/baa/profile.h"
#include "authsim/common/ids.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/device/behavior.h"
#include "authsim/federation/token.h"

namespace authsim::baa {

enum class AccessMode { kTentative, kFull };
std::string_view AccessModeName(AccessMode mode);

struct BaaAccess {
  PrincipalId user;
  AccessMode mode = AccessMode::kTentative;
};

struct VerdictRequest {
  PrincipalId requester;
  PrincipalId user;
  // Records captured before this instant are ignored.
  SimTime boundary;
};

// Behavioral Authentication Authority. One actor; not thread-safe.
class BehavioralAuthority {
 public:
  BehavioralAuthority(PrincipalId id, BaaConfig config, crypto::SigningKey key,
                      crypto::Drbg rng);

  const PrincipalId& id() const { return id_; }
  const BaaConfig& config() const { return config_; }
  const crypto::VerifyKey& verify_key() const { return issuer_.verify_key(); }

  // The BAA-specific backup password may be weak; the gate only rate-limits.
  void EnrollUser(const PrincipalId& user, std::string_view backup_password);
  bool IsEnrolled(const PrincipalId& user) const { return users_.contains(user); }

  // Appends the record to the user's window. Only Full-mode records train
  // the profile. FeatureDimensionError on a size mismatch; NotFound for
  // unenrolled users.
  absl::Status Ingest(const device::BehavioralRecord& record, AccessMode mode);

  // ProfileNotTrained below the training minimum.
  absl::StatusOr<Verdict> ComputeVerdict(const VerdictRequest& request) const;

  // Tentative access on the right password. AccessDenied on a wrong one,
  // RateLimited once `rate_limit` attempts fall inside the window.
  absl::StatusOr<BaaAccess> Login(const PrincipalId& user, std::string_view password,
                                  SimTime now);

  // Verdict released as a token {behavior: match|no-match} for the
  // requester. On the recovery path a no-match also locks `device` out.
  // VerdictPending while data is insufficient; AccountLocked for a device
  // already locked out.
  absl::StatusOr<federation::AccessToken> FederatedAssertion(
      const VerdictRequest& request, const DeviceId& device, bool recovery_path,
      SimTime now);

  bool IsLockedOut(const DeviceId& device) const { return lockouts_.contains(device); }
  const std::set<DeviceId>& lockouts() const { return lockouts_; }

  // Profile management, refused in Tentative mode.
  absl::Status ResetProfile(const BaaAccess& access);

  const BehavioralProfile* Profile(const PrincipalId& user) const;
  std::size_t WindowSize(const PrincipalId& user) const;

 private:
  struct UserState {
    BehavioralProfile profile;
    crypto::PasswordRecord password;
    std::vector<device::BehavioralRecord> records;
    std::deque<SimTime> attempts;
  };

  PrincipalId id_;
  BaaConfig config_;
  crypto::Drbg rng_;
  federation::TokenIssuer issuer_;
  std::map<PrincipalId, UserState> users_;
  std::set<DeviceId> lockouts_;
};

}  // namespace authsim::baa

#endif  // AUTHSIM_BAA_AUTHORITY_H_

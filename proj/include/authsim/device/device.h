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

#ifndef AUTHSIM_DEVICE_DEVICE_H_
#define AUTHSIM_DEVICE_DEVICE_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/device/behavior.h"
#include "authsim/device/gate.h"
#include "authsim/device/sealed_store.h"

namespace authsim::device {

enum class TeeGrade { kSoftware, kTee };

std::string_view TeeGradeName(TeeGrade grade);
std::optional<TeeGrade> ParseTeeGrade(std::string_view name);

// FIDO-style registration message sent to the relying party's IdP.
struct Registration {
  std::string rp_id;
  std::string account;
  std::string credential_id;
  DeviceId device_id;
  crypto::VerifyKey public_key;
  TeeGrade tee_grade = TeeGrade::kSoftware;
  std::string challenge;
  crypto::Signature signature{};
};

std::string RegistrationSignedBytes(const Registration& r);
bool VerifyRegistration(const Registration& r);
Json RegistrationToJson(const Registration& r);
absl::StatusOr<Registration> RegistrationFromJson(const Json& json);

struct Assertion {
  std::string rp_id;
  std::string credential_id;
  std::string challenge;
  // Origin of the session the device believes it is talking to.
  std::string channel_binding;
  std::uint64_t counter = 0;
  crypto::Signature signature{};
};

std::string AssertionSignedBytes(const Assertion& a);
bool VerifyAssertionSignature(const Assertion& a, const crypto::VerifyKey& key);
Json AssertionToJson(const Assertion& a);
absl::StatusOr<Assertion> AssertionFromJson(const Json& json);

struct DeviceConfig {
  GateConfig gate;
  TeeGrade tee_grade = TeeGrade::kTee;
};

// Secret material a HardwareAttack adversary extracts from a device.
struct ExtractedKey {
  std::string rp_id;
  std::string account;
  std::string credential_id;
  std::uint64_t counter = 0;
  crypto::SigningKey key;
};

// The simulated user device. Private keys live only inside the sealed store;
// nothing this class emits or exports carries them.
class Device {
 public:
  Device(DeviceId id, PrincipalId owner, DeviceConfig config,
         crypto::Drbg rng);

  const DeviceId& id() const { return id_; }
  const PrincipalId& owner() const { return owner_; }
  TeeGrade tee_grade() const { return config_.tee_grade; }

  // Biometric oracle result. AccountLocked while an AMM lock is applied.
  absl::StatusOr<GateStatus> UnlockGate(bool biometric_match, SimTime now);
  const BiometricGate& gate() const { return gate_; }

  absl::StatusOr<Registration> EnrollKey(const std::string& rp_id,
                                         const std::string& account,
                                         const std::string& challenge,
                                         SimTime now);
  absl::StatusOr<Assertion> SignAssertion(const std::string& rp_id,
                                          const std::string& account,
                                          const std::string& challenge,
                                          const std::string& channel_binding,
                                          SimTime now);
  bool HasKey(const std::string& rp_id, const std::string& account) const;
  std::optional<std::string> CredentialId(const std::string& rp_id,
                                          const std::string& account) const;
  void RemoveKey(const std::string& rp_id, const std::string& account);

  // Records leave the device immediately; none are kept.
  std::vector<BehavioralRecord> EmitBehavior(const BehaviorGenerator& generator,
                                             std::size_t count, SimTime start,
                                             SimDuration interval);

  // AMM lock notification: relocks the gate and refuses further unlocks.
  void ApplyAmmLock();
  void ReleaseAmmLock();
  bool amm_locked() const { return amm_locked_; }
  // Recovery clears a biometric lockout.
  void ClearGateLockout() { gate_.ClearLockout(); }

  // Harness flag. A theft never carries over the owner's open gate window.
  void set_stolen(bool stolen) {
    stolen_ = stolen;
    if (stolen) gate_.Relock();
  }
  bool stolen() const { return stolen_; }

  // Everything readable from device storage by software: public registry
  // data and the still-sealed blobs.
  Json Export() const;
  // HardwareAttack: unseals every key with the extracted seal key.
  std::vector<ExtractedKey> HardwareExtract() const;

  SealedStore& sealed_store() { return store_; }
  const SealedStore& sealed_store() const { return store_; }

 private:
  struct KeyEntry {
    std::string credential_id;
    crypto::VerifyKey public_key;
    std::uint64_t counter = 0;
  };
  using KeyIndex = std::pair<std::string, std::string>;

  absl::Status RequireUnlocked(SimTime now) const;

  DeviceId id_;
  PrincipalId owner_;
  DeviceConfig config_;
  crypto::Drbg rng_;
  BiometricGate gate_;
  SealedStore store_;
  std::map<KeyIndex, KeyEntry> keys_;
  bool amm_locked_ = false;
  bool stolen_ = false;
};

}  // namespace authsim::device

#endif  // AUTHSIM_DEVICE_DEVICE_H_

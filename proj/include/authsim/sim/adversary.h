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

#ifndef AUTHSIM_SIM_ADVERSARY_H_
#define AUTHSIM_SIM_ADVERSARY_H_

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/crypto/drbg.h"
#include "authsim/device/device.h"
#include "authsim/federation/token.h"
#include "authsim/sim/runtime.h"

namespace authsim::sim {

enum class Capability {
  kStealDevice,
  kSoftwareAttack,
  kHardwareAttack,
  kMitM,
  kReplay,
  kCsrf,
  kSessionHijack,
  kColludeSpIdp,
};

std::string_view CapabilityName(Capability c);
std::optional<Capability> ParseCapability(std::string_view name);

class CapabilitySet {
 public:
  CapabilitySet() = default;
  CapabilitySet(std::initializer_list<Capability> caps);

  // HardwareAttack is the stronger tier and brings SoftwareAttack with it.
  void Add(Capability c);
  bool Has(Capability c) const { return caps_.contains(c); }
  std::vector<std::string> Names() const;
  // InvalidArgument for an unknown name.
  static absl::StatusOr<CapabilitySet> FromNames(const std::vector<std::string>& names);

 private:
  std::set<Capability> caps_;
};

enum class Strategy { kPassive, kReplay, kCsrf, kAudienceSubstitution, kStolenDevice };

std::string_view StrategyName(Strategy s);
std::optional<Strategy> ParseStrategy(std::string_view name);

// Network and device attacker. As a wire tap it sees traffic according to
// its capabilities; as an actor it runs its own login attempts.
class Adversary : public Actor, public Interceptor {
 public:
  // InvalidArgument when the strategy needs a capability the set lacks.
  static absl::StatusOr<std::unique_ptr<Adversary>> Create(PrincipalId id, CapabilitySet caps,
                                                           Strategy strategy,
                                                           crypto::Drbg rng);

  const PrincipalId& address() const override { return id_; }
  const PrincipalId& tap_id() const override { return id_; }
  const CapabilitySet& capabilities() const { return caps_; }
  Strategy strategy() const { return strategy_; }

  bool ReadsSecure() const override { return caps_.Has(Capability::kMitM); }
  bool OnReadable(Envelope& e, Bus& bus) override;
  void OnSealed(const SealedEnvelope& sealed, Bus& bus) override;
  void Handle(const Envelope& e, Bus& bus) override;

  // The device changes hands. SoftwareAttack reads its storage, which
  // leaves the sealed keys sealed; HardwareAttack also unseals them.
  absl::Status TakeDevice(std::unique_ptr<device::Device> d, Bus& bus);

  // The strategy's active move against `sp`. A CSRF request rides the
  // victim's cookies, so it lands on `victim_session`.
  void Attack(Bus& bus, const PrincipalId& sp, const std::optional<std::string>& victim_session,
              const std::vector<std::string>& attributes);

  std::size_t granted() const { return granted_; }
  std::size_t captured() const { return sealed_.size() + readable_.size(); }
  std::size_t extracted_keys() const { return keys_.size(); }

 private:
  Adversary(PrincipalId id, CapabilitySet caps, Strategy strategy, crypto::Drbg rng);

  void OnChallenge(const Envelope& e, Bus& bus);
  Envelope Forge(const PrincipalId& to, std::string_view type, Json payload) const;

  PrincipalId id_;
  CapabilitySet caps_;
  Strategy strategy_;
  crypto::Drbg rng_;
  std::vector<SealedEnvelope> sealed_;
  std::vector<Envelope> readable_;
  std::vector<federation::AccessToken> tokens_;
  std::unique_ptr<device::Device> device_;
  std::vector<device::ExtractedKey> keys_;
  std::uint64_t next_flow_ = 0;
  std::size_t granted_ = 0;
};

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_ADVERSARY_H_

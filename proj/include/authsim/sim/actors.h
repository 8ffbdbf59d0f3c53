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

#ifndef AUTHSIM_SIM_ACTORS_H_
#define AUTHSIM_SIM_ACTORS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/crypto/drbg.h"
#include "authsim/device/device.h"
#include "authsim/federation/idp.h"
#include "authsim/federation/sp.h"
#include "authsim/idc/consolidator.h"
#include "authsim/pabac/wallet.h"
#include "authsim/sim/runtime.h"

namespace authsim::sim {

// How the user proves themselves inside the federated login.
enum class FlowMethod { kFido, kPassword, kCredential, kMobileConnect };
std::string_view FlowMethodName(FlowMethod method);
std::optional<FlowMethod> ParseFlowMethod(std::string_view name);

struct LoginOutcome {
  std::string flow;
  PrincipalId sp;
  bool granted = false;
  std::string error;
  SimTime at;
};

// A user at their browser with their devices, wallet and memorized secrets.
// The account name at every IdP is the user id.
class UserAgentActor : public Actor {
 public:
  UserAgentActor(PrincipalId user, crypto::Drbg rng);

  const PrincipalId& address() const override { return user_; }
  void Handle(const Envelope& e, Bus& bus) override;

  void AddDevice(std::unique_ptr<device::Device> d);
  device::Device* FindDevice(const DeviceId& id);
  std::unique_ptr<device::Device> TakeDevice(const DeviceId& id);
  std::size_t device_count() const { return devices_.size(); }

  void set_password(std::string password) { password_ = std::move(password); }
  pabac::Wallet& wallet() { return wallet_; }
  // Whether the owner is there to satisfy the biometric gate.
  void set_biometric_present(bool present) { biometric_present_ = present; }
  // Attributes the user refuses to release.
  void set_refused(std::set<std::string> refused) { refused_ = std::move(refused); }
  void set_idc_session(std::string session) { idc_session_ = std::move(session); }
  const std::string& idc_session() const { return idc_session_; }

  // Step 1. Returns the flow id carried by every message of this login.
  std::string StartLogin(Bus& bus, const PrincipalId& sp, std::vector<std::string> attributes,
                         FlowMethod method);
  const std::vector<LoginOutcome>& outcomes() const { return outcomes_; }
  std::size_t granted_count() const;

 private:
  struct Pending {
    PrincipalId sp;
    FlowMethod method;
  };

  void OnChallenge(const Envelope& e, Bus& bus);
  void OnSms(const Envelope& e, Bus& bus);
  void Finish(const std::string& flow, bool granted, std::string error, Bus& bus);
  federation::ConsentDecisions Consent(const std::vector<std::string>& attributes) const;

  PrincipalId user_;
  crypto::Drbg rng_;
  std::vector<std::unique_ptr<device::Device>> devices_;
  std::string password_;
  pabac::Wallet wallet_;
  bool biometric_present_ = true;
  std::set<std::string> refused_;
  std::string idc_session_;
  std::uint64_t next_flow_ = 0;
  std::map<std::string, Pending> pending_;
  std::vector<LoginOutcome> outcomes_;
};

// Identity provider endpoint. Failed logins are reported to the IDC risk
// engine when one is configured.
class IdpActor : public Actor {
 public:
  IdpActor(std::unique_ptr<federation::IdentityProvider> idp,
           std::optional<PrincipalId> idc = std::nullopt);

  const PrincipalId& address() const override { return idp_->id(); }
  void Handle(const Envelope& e, Bus& bus) override;
  federation::IdentityProvider& idp() { return *idp_; }

 private:
  void OnAuthnRequest(const Envelope& e, Bus& bus);
  void OnAuthnResponse(const Envelope& e, Bus& bus);
  void OnTokenRequest(const Envelope& e, Bus& bus);
  void OnLockNotice(const Envelope& e, Bus& bus);

  std::unique_ptr<federation::IdentityProvider> idp_;
  std::optional<PrincipalId> idc_;
  // nonce -> agent, so a failure reaches the right browser.
  std::map<std::string, PrincipalId> agents_;
};

// Relying party endpoint.
class SpActor : public Actor {
 public:
  // (flow, agent, validation) on every grant. Called on the SP's thread.
  using GrantHook = std::function<void(const std::string&, const PrincipalId&,
                                       const federation::TokenValidation&)>;

  SpActor(std::unique_ptr<federation::ServiceProvider> sp, PrincipalId idp);

  const PrincipalId& address() const override { return sp_->id(); }
  void Handle(const Envelope& e, Bus& bus) override;
  federation::ServiceProvider& sp() { return *sp_; }
  const PrincipalId& idp() const { return idp_; }
  void set_grant_hook(GrantHook hook) { hook_ = std::move(hook); }

  // SP session opened for `flow`, if any. A cookie-carrying forged request
  // lands on this session.
  std::optional<std::string> SessionForFlow(const std::string& flow) const;
  std::size_t grants() const { return grants_; }

 private:
  struct FlowState {
    std::string flow;
    PrincipalId agent;
    PrincipalId via;
  };

  void OnLoginStart(const Envelope& e, Bus& bus);
  void OnAuthnCode(const Envelope& e, Bus& bus);
  void OnTokenResponse(const Envelope& e, Bus& bus);
  void OnPresentToken(const Envelope& e, Bus& bus);
  void Deny(const PrincipalId& agent, const std::string& flow, const absl::Status& s,
            Bus& bus);

  std::unique_ptr<federation::ServiceProvider> sp_;
  PrincipalId idp_;
  GrantHook hook_;
  std::map<std::string, FlowState> sessions_;
  std::map<std::string, std::string> flow_sessions_;
  std::size_t grants_ = 0;
};

// Consolidator endpoint: lock management, the risk engine's failure feed
// and the Mobile Connect proxy. The MNO's SMS gateway is in-process.
class IdcActor : public Actor {
 public:
  IdcActor(idc::IdentityConsolidator* idc, std::optional<PrincipalId> sms_gateway);

  const PrincipalId& address() const override { return idc_->id(); }
  void Handle(const Envelope& e, Bus& bus) override;
  idc::IdentityConsolidator& idc() { return *idc_; }

  // Journal entries written since the last call. Every op event that
  // mutated persistent state carries them, so the log replays the state.
  Json TakeJournal();
  // Sends the pending lock notices.
  void FlushNotices(Bus& bus);
  // Records an op with the journal delta attached.
  void Record(Bus& bus, std::string_view op, const absl::Status& s, Json detail);

 private:
  struct McFlow {
    std::string flow;
    PrincipalId sp;
    std::string session;
    PrincipalId agent;
  };

  void OnLock(const Envelope& e, Bus& bus, bool lock);
  void OnAuthFailure(const Envelope& e, Bus& bus);
  void OnMcRequest(const Envelope& e, Bus& bus);
  void OnMcResponse(const Envelope& e, Bus& bus);

  idc::IdentityConsolidator* idc_;
  std::optional<PrincipalId> sms_gateway_;
  std::size_t journal_mark_ = 0;
  std::map<std::string, McFlow> mc_flows_;  // proxy id
};

// Parses {"all": true} or a list of entity ids.
absl::StatusOr<idc::LockScope> LockScopeFromJson(const Json& json);
Json LockScopeToJson(const idc::LockScope& scope);

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_ACTORS_H_

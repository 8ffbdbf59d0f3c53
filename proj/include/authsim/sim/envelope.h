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

#ifndef AUTHSIM_SIM_ENVELOPE_H_
#define AUTHSIM_SIM_ENVELOPE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"

namespace authsim::sim {

// One message on the simulated bus.
struct Envelope {
  std::uint64_t msg_id = 0;
  PrincipalId from;
  PrincipalId to;
  std::string type;
  Json payload = Json::object();
  SimTime sent_at;
  // TLS-modeled link. Only MitM-capable adversaries can read or alter it.
  bool secure = true;
  // Set when an adversary put the envelope on the wire.
  std::optional<PrincipalId> injected_by;
  // msg_id of the envelope this one re-sends verbatim.
  std::optional<std::uint64_t> replay_of;
};

Json EnvelopeToJson(const Envelope& e);
absl::StatusOr<Envelope> EnvelopeFromJson(const Json& json);

// Opaque handle on a secure envelope, handed to adversaries that cannot
// read TLS traffic. Only the runtime can open it, so re-sending it verbatim
// is the one thing such an adversary can do with it.
class SealedEnvelope {
 public:
  std::uint64_t msg_id() const { return inner_.msg_id; }
  const PrincipalId& from() const { return inner_.from; }
  const PrincipalId& to() const { return inner_.to; }
  std::size_t size() const { return size_; }

 private:
  friend class Runtime;
  friend class ConcurrentRuntime;
  explicit SealedEnvelope(Envelope inner);
  Envelope inner_;
  std::size_t size_ = 0;
};

// Message kinds. The six federated-login steps in order, then the back
// channel and the management traffic.
namespace msg {
inline constexpr std::string_view kLoginStart = "login.start";          // user -> SP
inline constexpr std::string_view kAuthnRequest = "authn.request";      // SP -> IdP
inline constexpr std::string_view kAuthnChallenge = "authn.challenge";  // IdP -> user
inline constexpr std::string_view kAuthnResponse = "authn.response";    // user -> IdP
inline constexpr std::string_view kAuthnCode = "authn.code";            // IdP -> SP
inline constexpr std::string_view kLoginGranted = "login.granted";      // SP -> user
inline constexpr std::string_view kTokenRequest = "token.request";      // SP -> IdP
inline constexpr std::string_view kTokenResponse = "token.response";    // IdP -> SP
inline constexpr std::string_view kLoginDenied = "login.denied";
inline constexpr std::string_view kPresentToken = "token.present";  // anyone -> SP
inline constexpr std::string_view kSetLock = "amm.set_lock";        // user -> IDC
inline constexpr std::string_view kReleaseLock = "amm.release_lock";
inline constexpr std::string_view kLockNotice = "amm.lock_notice";  // IDC -> entity
inline constexpr std::string_view kAuthFailure = "risk.auth_failure";  // IdP -> IDC
inline constexpr std::string_view kMnoSms = "mno.sms";  // MNO -> handset
inline constexpr std::string_view kMnoPrefix = "mno.";
}  // namespace msg

// Position of `type` in the six-step login, 1 to 6, or 0 for other kinds.
int LoginStep(std::string_view type);

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_ENVELOPE_H_

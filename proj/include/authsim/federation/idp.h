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

#ifndef AUTHSIM_FEDERATION_IDP_H_
#define AUTHSIM_FEDERATION_IDP_H_

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/device/device.h"
#include "authsim/federation/token.h"
#include "authsim/identity/aal.h"
#include "authsim/identity/attributes.h"
#include "authsim/identity/consent.h"

namespace authsim::federation {

struct IdpConfig {
  // Origin the IdP serves from; assertions must be channel-bound to it and
  // the SP checks it on the authentication response.
  std::string origin;
  SimDuration request_ttl = std::chrono::seconds(120);
  SimDuration code_ttl = std::chrono::seconds(120);
  SimDuration qr_ttl = std::chrono::seconds(120);
  SimDuration token_lifetime = std::chrono::seconds(600);
  crypto::PasswordHashParams password_params;
};

struct AuthorizationRequest {
  std::string request_id;
  PrincipalId sp;
  std::vector<std::string> attributes;
  // SP session the response is delivered to.
  std::string redirect_session;
  std::string nonce;
  std::string csrf;
  std::string origin;
  SimTime expires_at;
};

Json RequestToJson(const AuthorizationRequest& r);
absl::StatusOr<AuthorizationRequest> RequestFromJson(const Json& json);

using ConsentDecisions = std::map<std::string, identity::ConsentDecision>;
Json ConsentDecisionsToJson(const ConsentDecisions& d);
absl::StatusOr<ConsentDecisions> ConsentDecisionsFromJson(const Json& json);

// What the user agent carries back to the SP.
struct IssuedCode {
  std::string code;
  PrincipalId sp;
  std::string redirect_session;
  std::string csrf;
};

enum class QrState { kPending, kClaimed, kCompleted, kExpired };
std::string_view QrStateName(QrState state);

struct QrSession {
  std::string qr_id;
  std::string desktop_session;
  PrincipalId sp;
  // Payload rendered as the QR image: IdP endpoint, session id, challenge.
  Json payload;
  QrState state = QrState::kPending;
  SimTime expires_at;
};

// Verifies a credential-based presentation inside the IdP (the custom
// authentication module). Returns the disclosed attributes on acceptance.
class CredentialAuthModule {
 public:
  virtual ~CredentialAuthModule() = default;
  virtual absl::StatusOr<Scope> VerifyPresentation(const Json& presentation,
                                                   const std::string& nonce,
                                                   SimTime now) = 0;
};

struct StoredAuthenticator {
  std::string account;
  std::string credential_id;
  DeviceId device_id;
  crypto::VerifyKey public_key;
  device::TeeGrade tee_grade = device::TeeGrade::kSoftware;
  std::uint64_t counter = 0;
};

// OIDC-style identity provider with FIDO-enhanced authentication, the
// password baseline, credential-module logins and the QR desktop bridge.
// Not thread-safe: one actor owns it.
class IdentityProvider {
 public:
  IdentityProvider(PrincipalId id, IdpConfig config, crypto::SigningKey key,
                   crypto::Drbg rng);

  const PrincipalId& id() const { return id_; }
  const IdpConfig& config() const { return config_; }
  const crypto::VerifyKey& verify_key() const { return issuer_.verify_key(); }
  TokenIssuer& issuer() { return issuer_; }

  // Client (SP) registry.
  void RegisterClient(const PrincipalId& sp) { clients_.insert(sp); }
  bool IsClient(const PrincipalId& sp) const { return clients_.contains(sp); }

  // Accounts and their verified attributes.
  void UpsertAccount(const std::string& account,
                     std::vector<identity::IdentityAttribute> attributes);
  bool HasAccount(const std::string& account) const;
  const std::vector<identity::IdentityAttribute>* Attributes(
      const std::string& account) const;
  void SetPassword(const std::string& account, std::string_view password);

  // Lock notices from the consolidator. Locked accounts are refused before
  // any factor is looked at.
  void SetAccountLocked(const std::string& account, bool locked);
  bool IsAccountLocked(const std::string& account) const;

  // FIDO registration ceremony.
  absl::StatusOr<std::string> BeginRegistration(const std::string& account,
                                                SimTime now);
  absl::Status CompleteRegistration(const device::Registration& registration,
                                    SimTime now);
  absl::Status RevokeAuthenticator(const std::string& credential_id);
  std::vector<StoredAuthenticator> Authenticators(const std::string& account) const;

  // Steps 1-2: UnknownClient for unregistered SPs.
  absl::StatusOr<AuthorizationRequest> BeginAuthorization(
      const PrincipalId& sp, const std::string& sp_session,
      std::vector<std::string> attributes, SimTime now);

  // Steps 3-5. Errors, in check order: ReplayDetected (nonce already
  // consumed), AuthenticationFailed (unknown nonce, credential, origin,
  // signature or counter), Expired, AccountLocked, ConsentDenied,
  // AttributeNotVerified. The nonce is consumed only on success.
  absl::StatusOr<IssuedCode> CompleteFidoAuthentication(
      const std::string& account, const device::Assertion& assertion,
      const ConsentDecisions& consent, SimTime now);

  // Password baseline: same flow with a memory-hard password check in place
  // of the assertion.
  absl::StatusOr<IssuedCode> CompletePasswordAuthentication(
      const std::string& account, std::string_view password,
      const std::string& nonce, const ConsentDecisions& consent, SimTime now);

  // Anonymous credential login through the installed module. The disclosed
  // attributes must cover the request.
  void SetCredentialModule(std::unique_ptr<CredentialAuthModule> module);
  CredentialAuthModule* credential_module() { return module_.get(); }
  absl::StatusOr<IssuedCode> CompleteCredentialAuthentication(
      const Json& presentation, const std::string& nonce, SimTime now);

  // Back channel. Errors: InvalidGrant (unknown code), ReplayDetected (code
  // already exchanged), AudienceMismatch (code bound to another SP),
  // CsrfRejected (csrf or redirect session differ), Expired, AccountLocked.
  absl::StatusOr<AccessToken> ExchangeCode(const std::string& code,
                                           const PrincipalId& sp,
                                           const std::string& redirect_session,
                                           const std::string& csrf, SimTime now);

  // Account the code was issued for, if it is an account-bound code.
  std::optional<std::string> CodeAccount(const std::string& code) const;

  // QR bridge.
  absl::StatusOr<QrSession> BeginQr(const PrincipalId& sp,
                                    const std::string& desktop_session,
                                    std::vector<std::string> attributes,
                                    SimTime now);
  absl::StatusOr<IssuedCode> ClaimQr(const std::string& qr_id,
                                     const std::string& account,
                                     const device::Assertion& assertion,
                                     const ConsentDecisions& consent, SimTime now);
  std::optional<QrState> QrStatus(const std::string& qr_id, SimTime now) const;

  std::size_t consumed_nonce_count() const { return consumed_nonces_.size(); }

 private:
  struct PendingRequest {
    AuthorizationRequest request;
  };
  struct CodeGrant {
    PrincipalId sp;
    std::string redirect_session;
    std::string csrf;
    std::optional<std::string> account;
    Scope scope;
    identity::Aal aal = identity::Aal::kNone;
    SimTime expires_at;
    bool consumed = false;
  };
  struct Account {
    std::vector<identity::IdentityAttribute> attributes;
    std::optional<crypto::PasswordRecord> password;
    bool locked = false;
  };

  absl::StatusOr<const PendingRequest*> FindLiveRequest(const std::string& nonce,
                                                        SimTime now) const;
  absl::StatusOr<Scope> ReleaseScope(const Account& account,
                                     const AuthorizationRequest& request,
                                     const ConsentDecisions& consent) const;
  absl::StatusOr<identity::Aal> VerifyAssertion(const std::string& account,
                                                const device::Assertion& assertion,
                                                const std::string& origin,
                                                StoredAuthenticator** matched);
  IssuedCode GrantCode(const AuthorizationRequest& request,
                       std::optional<std::string> account, Scope scope,
                       identity::Aal aal, SimTime now);

  PrincipalId id_;
  IdpConfig config_;
  crypto::Drbg rng_;
  TokenIssuer issuer_;
  std::set<PrincipalId> clients_;
  std::map<std::string, Account> accounts_;
  std::map<std::string, StoredAuthenticator> authenticators_;
  std::map<std::string, std::pair<std::string, SimTime>> registration_challenges_;
  std::map<std::string, PendingRequest> pending_;  // keyed by nonce
  std::set<std::string> consumed_nonces_;
  std::map<std::string, CodeGrant> codes_;
  std::map<std::string, QrSession> qr_sessions_;
  std::map<std::string, std::string> qr_nonce_;  // qr id -> nonce
  std::unique_ptr<CredentialAuthModule> module_;
};

}  // namespace authsim::federation

#endif  // AUTHSIM_FEDERATION_IDP_H_

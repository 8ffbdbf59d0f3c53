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

#include "authsim/federation/idp.h"

#include <algorithm>

namespace authsim::federation {

Json RequestToJson(const AuthorizationRequest& r) {
  return {{"request_id", r.request_id},
          {"sp", r.sp.value()},
          {"attributes", r.attributes},
          {"redirect_session", r.redirect_session},
          {"nonce", r.nonce},
          {"csrf", r.csrf},
          {"origin", r.origin},
          {"expires_at", ToMillis(r.expires_at)}};
}

absl::StatusOr<AuthorizationRequest> RequestFromJson(const Json& json) {
  AuthorizationRequest r;
  try {
    r.request_id = json.at("request_id").get<std::string>();
    r.sp = PrincipalId(json.at("sp").get<std::string>());
    r.attributes = json.at("attributes").get<std::vector<std::string>>();
    r.redirect_session = json.at("redirect_session").get<std::string>();
    r.nonce = json.at("nonce").get<std::string>();
    r.csrf = json.at("csrf").get<std::string>();
    r.origin = json.at("origin").get<std::string>();
    r.expires_at = FromMillis(json.at("expires_at").get<std::int64_t>());
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return r;
}

Json ConsentDecisionsToJson(const ConsentDecisions& d) {
  Json out = Json::object();
  for (const auto& [name, decision] : d) {
    out[name] = decision == identity::ConsentDecision::kAllow ? "allow" : "deny";
  }
  return out;
}

absl::StatusOr<ConsentDecisions> ConsentDecisionsFromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorCode::kInvalidArgument, "consent must be an object");
  }
  ConsentDecisions out;
  for (const auto& [name, value] : json.items()) {
    if (!value.is_string()) {
      return MakeError(ErrorCode::kInvalidArgument, "consent value must be a string");
    }
    const std::string v = value.get<std::string>();
    if (v == "allow") {
      out[name] = identity::ConsentDecision::kAllow;
    } else if (v == "deny") {
      out[name] = identity::ConsentDecision::kDeny;
    } else {
      return MakeError(ErrorCode::kInvalidArgument, "consent must be allow or deny");
    }
  }
  return out;
}

std::string_view QrStateName(QrState state) {
  switch (state) {
    case QrState::kPending: return "Pending";
    case QrState::kClaimed: return "Claimed";
    case QrState::kCompleted: return "Completed";
    case QrState::kExpired: return "Expired";
  }
  return "?";
}

IdentityProvider::IdentityProvider(PrincipalId id, IdpConfig config,
                                   crypto::SigningKey key, crypto::Drbg rng)
    : id_(id),
      config_(std::move(config)),
      rng_(rng.Fork("idp")),
      issuer_(id, std::move(key), rng.Fork("issuer"), config_.token_lifetime) {}

void IdentityProvider::UpsertAccount(
    const std::string& account,
    std::vector<identity::IdentityAttribute> attributes) {
  accounts_[account].attributes = std::move(attributes);
}

bool IdentityProvider::HasAccount(const std::string& account) const {
  return accounts_.contains(account);
}

const std::vector<identity::IdentityAttribute>* IdentityProvider::Attributes(
    const std::string& account) const {
  auto it = accounts_.find(account);
  return it == accounts_.end() ? nullptr : &it->second.attributes;
}

void IdentityProvider::SetPassword(const std::string& account,
                                   std::string_view password) {
  accounts_[account].password =
      crypto::HashPassword(password, rng_, config_.password_params);
}

void IdentityProvider::SetAccountLocked(const std::string& account, bool locked) {
  accounts_[account].locked = locked;
}

bool IdentityProvider::IsAccountLocked(const std::string& account) const {
  auto it = accounts_.find(account);
  return it != accounts_.end() && it->second.locked;
}

absl::StatusOr<std::string> IdentityProvider::BeginRegistration(
    const std::string& account, SimTime now) {
  if (!HasAccount(account)) {
    return MakeError(ErrorCode::kNotFound, "no such account");
  }
  std::string challenge = rng_.RandomHex(16);
  registration_challenges_[challenge] = {account, now + config_.request_ttl};
  return challenge;
}

absl::Status IdentityProvider::CompleteRegistration(
    const device::Registration& registration, SimTime now) {
  auto it = registration_challenges_.find(registration.challenge);
  if (it == registration_challenges_.end() ||
      it->second.first != registration.account) {
    return MakeError(ErrorCode::kAuthenticationFailed, "unknown registration challenge");
  }
  if (!(now < it->second.second)) {
    registration_challenges_.erase(it);
    return MakeError(ErrorCode::kExpired, "registration challenge expired");
  }
  if (registration.rp_id != id_.value() || !device::VerifyRegistration(registration)) {
    return MakeError(ErrorCode::kAuthenticationFailed, "registration not self-signed");
  }
  if (authenticators_.contains(registration.credential_id)) {
    return MakeError(ErrorCode::kAlreadyExists, "credential id already registered");
  }
  registration_challenges_.erase(it);
  authenticators_.emplace(
      registration.credential_id,
      StoredAuthenticator{registration.account, registration.credential_id,
                          registration.device_id, registration.public_key,
                          registration.tee_grade, 0});
  return absl::OkStatus();
}

absl::Status IdentityProvider::RevokeAuthenticator(const std::string& credential_id) {
  if (authenticators_.erase(credential_id) == 0) {
    return MakeError(ErrorCode::kNotFound, "no such authenticator");
  }
  return absl::OkStatus();
}

std::vector<StoredAuthenticator> IdentityProvider::Authenticators(
    const std::string& account) const {
  std::vector<StoredAuthenticator> out;
  for (const auto& [_, a] : authenticators_) {
    if (a.account == account) out.push_back(a);
  }
  return out;
}

absl::StatusOr<AuthorizationRequest> IdentityProvider::BeginAuthorization(
    const PrincipalId& sp, const std::string& sp_session,
    std::vector<std::string> attributes, SimTime now) {
  if (!IsClient(sp)) {
    return MakeError(ErrorCode::kUnknownClient, "SP is not a registered client");
  }
  AuthorizationRequest r;
  r.request_id = rng_.RandomHex(8);
  r.sp = sp;
  r.attributes = std::move(attributes);
  r.redirect_session = sp_session;
  r.nonce = rng_.RandomHex(16);
  r.csrf = rng_.RandomHex(16);
  r.origin = config_.origin;
  r.expires_at = now + config_.request_ttl;
  pending_[r.nonce] = PendingRequest{r};
  return r;
}

absl::StatusOr<const IdentityProvider::PendingRequest*>
IdentityProvider::FindLiveRequest(const std::string& nonce, SimTime now) const {
  if (consumed_nonces_.contains(nonce)) {
    return MakeError(ErrorCode::kReplayDetected, "nonce already consumed");
  }
  auto it = pending_.find(nonce);
  if (it == pending_.end()) {
    return MakeError(ErrorCode::kAuthenticationFailed, "unknown nonce");
  }
  if (!(now < it->second.request.expires_at)) {
    return MakeError(ErrorCode::kExpired, "authorization request expired");
  }
  return &it->second;
}

absl::StatusOr<Scope> IdentityProvider::ReleaseScope(
    const Account& account, const AuthorizationRequest& request,
    const ConsentDecisions& consent) const {
  for (const std::string& name : request.attributes) {
    auto c = consent.find(name);
    if (c == consent.end() || c->second != identity::ConsentDecision::kAllow) {
      return MakeError(ErrorCode::kConsentDenied, "consent denied for " + name);
    }
  }
  Scope scope;
  for (const std::string& name : request.attributes) {
    auto held = std::find_if(account.attributes.begin(), account.attributes.end(),
                             [&](const auto& a) { return a.name == name; });
    if (held == account.attributes.end()) {
      return MakeError(ErrorCode::kAttributeNotVerified, "attribute not held: " + name);
    }
    scope[name] = held->value;
  }
  return scope;
}

absl::StatusOr<identity::Aal> IdentityProvider::VerifyAssertion(
    const std::string& account, const device::Assertion& assertion,
    const std::string& origin, StoredAuthenticator** matched) {
  auto it = authenticators_.find(assertion.credential_id);
  if (it == authenticators_.end() || it->second.account != account ||
      assertion.rp_id != id_.value()) {
    return MakeError(ErrorCode::kAuthenticationFailed, "unknown credential");
  }
  if (assertion.channel_binding != origin) {
    return MakeError(ErrorCode::kAuthenticationFailed, "channel binding mismatch");
  }
  if (!device::VerifyAssertionSignature(assertion, it->second.public_key)) {
    return MakeError(ErrorCode::kAuthenticationFailed, "bad assertion signature");
  }
  if (assertion.counter <= it->second.counter) {
    return MakeError(ErrorCode::kAuthenticationFailed, "signature counter did not advance");
  }
  *matched = &it->second;
  const identity::AuthFactor factor(it->second.tee_grade == device::TeeGrade::kTee
                                        ? identity::FactorKind::kFidoTee
                                        : identity::FactorKind::kFidoSoftware);
  return identity::AalForFactors(std::span(&factor, 1));
}

IssuedCode IdentityProvider::GrantCode(const AuthorizationRequest& request,
                                       std::optional<std::string> account,
                                       Scope scope, identity::Aal aal, SimTime now) {
  consumed_nonces_.insert(request.nonce);
  std::string code = rng_.RandomHex(16);
  codes_[code] = CodeGrant{request.sp,       request.redirect_session,
                           request.csrf,     std::move(account),
                           std::move(scope), aal,
                           now + config_.code_ttl};
  IssuedCode out{code, request.sp, request.redirect_session, request.csrf};
  pending_.erase(request.nonce);
  return out;
}

absl::StatusOr<IssuedCode> IdentityProvider::CompleteFidoAuthentication(
    const std::string& account, const device::Assertion& assertion,
    const ConsentDecisions& consent, SimTime now) {
  AUTHSIM_ASSIGN_OR_RETURN(const PendingRequest* pending,
                           FindLiveRequest(assertion.challenge, now));
  auto acct = accounts_.find(account);
  if (acct == accounts_.end()) {
    return MakeError(ErrorCode::kAuthenticationFailed, "unknown account");
  }
  if (acct->second.locked) {
    return MakeError(ErrorCode::kAccountLocked, "account is locked");
  }
  StoredAuthenticator* matched = nullptr;
  AUTHSIM_ASSIGN_OR_RETURN(identity::Aal aal,
                           VerifyAssertion(account, assertion,
                                           pending->request.origin, &matched));
  AUTHSIM_ASSIGN_OR_RETURN(Scope scope,
                           ReleaseScope(acct->second, pending->request, consent));
  // The counter advances only once the whole step succeeded, so a consent
  // refusal does not burn the assertion.
  matched->counter = assertion.counter;
  return GrantCode(pending->request, account, std::move(scope), aal, now);
}

absl::StatusOr<IssuedCode> IdentityProvider::CompletePasswordAuthentication(
    const std::string& account, std::string_view password, const std::string& nonce,
    const ConsentDecisions& consent, SimTime now) {
  AUTHSIM_ASSIGN_OR_RETURN(const PendingRequest* pending, FindLiveRequest(nonce, now));
  auto acct = accounts_.find(account);
  if (acct == accounts_.end() || !acct->second.password) {
    return MakeError(ErrorCode::kAuthenticationFailed, "unknown account");
  }
  if (acct->second.locked) {
    return MakeError(ErrorCode::kAccountLocked, "account is locked");
  }
  if (!crypto::VerifyPassword(*acct->second.password, password)) {
    return MakeError(ErrorCode::kAuthenticationFailed, "wrong password");
  }
  AUTHSIM_ASSIGN_OR_RETURN(Scope scope,
                           ReleaseScope(acct->second, pending->request, consent));
  const identity::AuthFactor factor(identity::FactorKind::kBackupPassword);
  return GrantCode(pending->request, account, std::move(scope),
                   identity::AalForFactors(std::span(&factor, 1)), now);
}

void IdentityProvider::SetCredentialModule(
    std::unique_ptr<CredentialAuthModule> module) {
  module_ = std::move(module);
}

absl::StatusOr<IssuedCode> IdentityProvider::CompleteCredentialAuthentication(
    const Json& presentation, const std::string& nonce, SimTime now) {
  if (module_ == nullptr) {
    return MakeError(ErrorCode::kNoVerifier, "no credential module installed");
  }
  AUTHSIM_ASSIGN_OR_RETURN(const PendingRequest* pending, FindLiveRequest(nonce, now));
  AUTHSIM_ASSIGN_OR_RETURN(Scope disclosed,
                           module_->VerifyPresentation(presentation, nonce, now));
  Scope scope;
  for (const std::string& name : pending->request.attributes) {
    auto it = disclosed.find(name);
    if (it == disclosed.end()) {
      return MakeError(ErrorCode::kAttributeNotVerified,
                       "presentation does not disclose " + name);
    }
    scope[name] = it->second;
  }
  // No account: the IdP learns nothing but the disclosed values.
  return GrantCode(pending->request, std::nullopt, std::move(scope),
                   identity::Aal::kNone, now);
}

absl::StatusOr<AccessToken> IdentityProvider::ExchangeCode(
    const std::string& code, const PrincipalId& sp,
    const std::string& redirect_session, const std::string& csrf, SimTime now) {
  auto it = codes_.find(code);
  if (it == codes_.end()) {
    return MakeError(ErrorCode::kInvalidGrant, "unknown authorization code");
  }
  CodeGrant& grant = it->second;
  if (grant.consumed) {
    return MakeError(ErrorCode::kReplayDetected, "authorization code already used");
  }
  if (grant.sp != sp) {
    return MakeError(ErrorCode::kAudienceMismatch, "code bound to another SP");
  }
  if (csrf.empty() || !crypto::SecureEqual(crypto::AsBytes(csrf),
                                           crypto::AsBytes(grant.csrf)) ||
      redirect_session != grant.redirect_session) {
    return MakeError(ErrorCode::kCsrfRejected, "csrf token mismatch");
  }
  if (!(now < grant.expires_at)) {
    return MakeError(ErrorCode::kExpired, "authorization code expired");
  }
  if (grant.account && IsAccountLocked(*grant.account)) {
    return MakeError(ErrorCode::kAccountLocked, "account is locked");
  }
  AUTHSIM_ASSIGN_OR_RETURN(
      AccessToken token,
      issuer_.MintFresh(redirect_session, sp, grant.scope, grant.aal, now));
  grant.consumed = true;
  return token;
}

std::optional<std::string> IdentityProvider::CodeAccount(const std::string& code) const {
  auto it = codes_.find(code);
  if (it == codes_.end()) return std::nullopt;
  return it->second.account;
}

absl::StatusOr<QrSession> IdentityProvider::BeginQr(
    const PrincipalId& sp, const std::string& desktop_session,
    std::vector<std::string> attributes, SimTime now) {
  AUTHSIM_ASSIGN_OR_RETURN(
      AuthorizationRequest request,
      BeginAuthorization(sp, desktop_session, std::move(attributes), now));
  QrSession qr;
  qr.qr_id = rng_.RandomHex(12);
  qr.desktop_session = desktop_session;
  qr.sp = sp;
  qr.payload = {{"endpoint", config_.origin + "/qr"},
                {"session", qr.qr_id},
                {"challenge", request.nonce}};
  qr.expires_at = now + config_.qr_ttl;
  qr_sessions_[qr.qr_id] = qr;
  qr_nonce_[qr.qr_id] = request.nonce;
  return qr;
}

absl::StatusOr<IssuedCode> IdentityProvider::ClaimQr(
    const std::string& qr_id, const std::string& account,
    const device::Assertion& assertion, const ConsentDecisions& consent,
    SimTime now) {
  auto it = qr_sessions_.find(qr_id);
  if (it == qr_sessions_.end()) {
    return MakeError(ErrorCode::kNotFound, "unknown QR session");
  }
  QrSession& qr = it->second;
  if (qr.state != QrState::kPending) {
    return MakeError(ErrorCode::kAlreadyClaimed, "QR session already claimed");
  }
  if (!(now < qr.expires_at)) {
    qr.state = QrState::kExpired;
    return MakeError(ErrorCode::kExpired, "QR session expired");
  }
  if (assertion.challenge != qr_nonce_[qr_id]) {
    return MakeError(ErrorCode::kAuthenticationFailed, "assertion not over QR challenge");
  }
  qr.state = QrState::kClaimed;
  absl::StatusOr<IssuedCode> code =
      CompleteFidoAuthentication(account, assertion, consent, now);
  // A failed assertion does not burn the QR; the user may rescan.
  qr.state = code.ok() ? QrState::kCompleted : QrState::kPending;
  return code;
}

std::optional<QrState> IdentityProvider::QrStatus(const std::string& qr_id,
                                                  SimTime now) const {
  auto it = qr_sessions_.find(qr_id);
  if (it == qr_sessions_.end()) return std::nullopt;
  if (it->second.state == QrState::kPending && !(now < it->second.expires_at)) {
    return QrState::kExpired;
  }
  return it->second.state;
}

}  // namespace authsim::federation

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

#include "authsim/pabac/verifier.h"

#include "authsim/common/status.h"
#include "authsim/crypto/primitives.h"

namespace authsim::pabac {

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kMalformed: return "Malformed";
    case RejectReason::kUntrustedIssuer: return "UntrustedIssuer";
    case RejectReason::kNonceMismatch: return "NonceMismatch";
    case RejectReason::kBadSignature: return "BadSignature";
    case RejectReason::kOpeningMismatch: return "OpeningMismatch";
    case RejectReason::kHolderSignature: return "HolderSignature";
    case RejectReason::kDoubleSpend: return "DoubleSpend";
  }
  return "?";
}

void CredentialVerifier::TrustIssuer(const PrincipalId& issuer, RsaPublicKey key) {
  trusted_[issuer] = std::move(key);
}

VerificationResult CredentialVerifier::Verify(const Presentation& p,
                                              const std::string& expected_nonce) {
  VerificationResult out;
  auto reject = [&](RejectReason r) {
    out.reason = r;
    return out;
  };
  auto issuer = trusted_.find(p.body.issuer);
  if (issuer == trusted_.end()) return reject(RejectReason::kUntrustedIssuer);
  if (p.nonce != expected_nonce) return reject(RejectReason::kNonceMismatch);

  absl::StatusOr<mpz_class> sig = DecodeInt(p.signature);
  if (!sig.ok()) return reject(RejectReason::kMalformed);
  if (!RsaVerify(issuer->second, crypto::AsBytes(CredentialMessage(p.body)), *sig)) {
    return reject(RejectReason::kBadSignature);
  }
  for (const auto& [name, opening] : p.disclosed) {
    auto c = p.body.commitments.find(name);
    if (c == p.body.commitments.end() ||
        CommitAttribute(name, opening.value, opening.salt) != c->second) {
      return reject(RejectReason::kOpeningMismatch);
    }
  }
  std::optional<crypto::Bytes> holder_sig = crypto::Base64Decode(p.holder_signature);
  if (!holder_sig || holder_sig->size() != crypto::Signature{}.size() ||
      !p.body.holder_key.Verify(crypto::AsBytes(PresentationSignedBytes(p)), *holder_sig)) {
    return reject(RejectReason::kHolderSignature);
  }
  if (!spent_.insert(p.body.serial).second) return reject(RejectReason::kDoubleSpend);

  out.accepted = true;
  for (const auto& [name, opening] : p.disclosed) out.disclosed[name] = opening.value;
  return out;
}

absl::StatusOr<Scope> PabacAuthModule::VerifyPresentation(const Json& json,
                                                          const std::string& nonce,
                                                          SimTime) {
  absl::StatusOr<Presentation> p = PresentationFromJson(json);
  if (!p.ok()) {
    return MakeError(ErrorCode::kAuthenticationFailed, "Malformed presentation");
  }
  VerificationResult r = verifier_->Verify(*p, nonce);
  if (r.accepted) return r.disclosed;
  const std::string name(RejectReasonName(*r.reason));
  return MakeError(*r.reason == RejectReason::kDoubleSpend ? ErrorCode::kReplayDetected
                                                           : ErrorCode::kAuthenticationFailed,
                   "presentation rejected: " + name);
}

absl::StatusOr<federation::AccessToken> FederatedPabacLogin(
    federation::ServiceProvider& sp, federation::IdentityProvider& idp,
    Wallet& wallet, const std::set<std::string>& required, SimTime now) {
  std::vector<std::string> wanted(required.begin(), required.end());
  const std::string session = sp.BeginLogin(wanted);
  AUTHSIM_ASSIGN_OR_RETURN(federation::AuthorizationRequest request,
                           idp.BeginAuthorization(sp.id(), session, wanted, now));
  AUTHSIM_ASSIGN_OR_RETURN(Presentation presentation,
                           wallet.PresentCovering(required, request.nonce));
  AUTHSIM_ASSIGN_OR_RETURN(
      federation::IssuedCode code,
      idp.CompleteCredentialAuthentication(PresentationToJson(presentation),
                                           request.nonce, now));
  AUTHSIM_RETURN_IF_ERROR(sp.OnAuthnResponse(code, idp.config().origin));
  AUTHSIM_ASSIGN_OR_RETURN(
      federation::AccessToken token,
      idp.ExchangeCode(code.code, sp.id(), code.redirect_session, code.csrf, now));
  AUTHSIM_ASSIGN_OR_RETURN(federation::TokenValidation v, sp.OnToken(session, token, now));
  if (!v.valid) {
    return MakeError(*v.reason, "SP rejected the token");
  }
  return token;
}

}  // namespace authsim::pabac

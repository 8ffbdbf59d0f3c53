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

#include "authsim/federation/token.h"

namespace authsim::federation {

Json ScopeToJson(const Scope& scope) {
  Json out = Json::object();
  for (const auto& [name, value] : scope) out[name] = identity::ValueToJson(value);
  return out;
}

absl::StatusOr<Scope> ScopeFromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorCode::kInvalidArgument, "scope must be an object");
  }
  Scope scope;
  for (const auto& [name, value] : json.items()) {
    AUTHSIM_ASSIGN_OR_RETURN(scope[name], identity::ValueFromJson(value));
  }
  return scope;
}

namespace {

Json UnsignedFields(const AccessToken& t) {
  return {{"subject", t.subject},
          {"issuer", t.issuer.value()},
          {"audience", t.audience.value()},
          {"scope", ScopeToJson(t.scope)},
          {"issued_at", ToMillis(t.issued_at)},
          {"expires_at", ToMillis(t.expires_at)},
          {"aal", identity::AalName(t.aal)}};
}

}  // namespace

std::string TokenSignedBytes(const AccessToken& token) {
  Json fields = UnsignedFields(token);
  fields["ctx"] = "authsim.token.v1";
  return CanonicalJson(fields);
}

Json TokenToJson(const AccessToken& token) {
  Json out = UnsignedFields(token);
  out["signature"] = crypto::Base64Encode(token.signature);
  return out;
}

absl::StatusOr<AccessToken> TokenFromJson(const Json& json) {
  AccessToken t;
  try {
    t.subject = json.at("subject").get<std::string>();
    t.issuer = PrincipalId(json.at("issuer").get<std::string>());
    t.audience = PrincipalId(json.at("audience").get<std::string>());
    AUTHSIM_ASSIGN_OR_RETURN(t.scope, ScopeFromJson(json.at("scope")));
    t.issued_at = FromMillis(json.at("issued_at").get<std::int64_t>());
    t.expires_at = FromMillis(json.at("expires_at").get<std::int64_t>());
    std::optional<identity::Aal> aal =
        identity::ParseAal(json.at("aal").get<std::string>());
    if (!aal) return MakeError(ErrorCode::kInvalidArgument, "bad aal");
    t.aal = *aal;
    std::optional<crypto::Bytes> sig =
        crypto::Base64Decode(json.at("signature").get<std::string>());
    if (!sig || sig->size() != t.signature.size()) {
      return MakeError(ErrorCode::kInvalidArgument, "bad token signature");
    }
    std::copy(sig->begin(), sig->end(), t.signature.begin());
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return t;
}

TokenIssuer::TokenIssuer(PrincipalId issuer, crypto::SigningKey key,
                         crypto::Drbg rng, SimDuration lifetime)
    : issuer_(std::move(issuer)),
      key_(std::move(key)),
      rng_(std::move(rng)),
      lifetime_(lifetime) {}

Pseudonym TokenIssuer::IssuePseudonym(const std::string& session_id) {
  std::string value;
  do {
    value = rng_.RandomHex(16);
  } while (!issued_.insert(value).second);
  return {value, session_id};
}

absl::StatusOr<AccessToken> TokenIssuer::Mint(const Pseudonym& subject,
                                              const PrincipalId& audience,
                                              Scope scope, identity::Aal aal,
                                              SimTime now) {
  if (!issued_.contains(subject.value)) {
    return MakeError(ErrorCode::kPseudonymReused,
                     "pseudonym was not minted by this issuer");
  }
  if (!used_.insert(subject.value).second) {
    return MakeError(ErrorCode::kPseudonymReused,
                     "pseudonym already backs a token");
  }
  AccessToken t;
  t.subject = subject.value;
  t.issuer = issuer_;
  t.audience = audience;
  t.scope = std::move(scope);
  t.issued_at = now;
  t.expires_at = now + lifetime_;
  t.aal = aal;
  t.signature = key_.Sign(crypto::AsBytes(TokenSignedBytes(t)));
  return t;
}

absl::StatusOr<AccessToken> TokenIssuer::MintFresh(const std::string& session_id,
                                                   const PrincipalId& audience,
                                                   Scope scope, identity::Aal aal,
                                                   SimTime now) {
  return Mint(IssuePseudonym(session_id), audience, std::move(scope), aal, now);
}

TokenValidation ValidateToken(const AccessToken& token,
                              const crypto::VerifyKey& issuer_key,
                              const PrincipalId& presenting_audience,
                              SimTime now) {
  TokenValidation out;
  if (!issuer_key.Verify(crypto::AsBytes(TokenSignedBytes(token)),
                         token.signature)) {
    out.reason = ErrorCode::kAuthenticationFailed;
    return out;
  }
  if (token.audience != presenting_audience) {
    out.reason = ErrorCode::kAudienceMismatch;
    return out;
  }
  if (!(now < token.expires_at)) {
    out.reason = ErrorCode::kExpired;
    return out;
  }
  out.valid = true;
  out.scope = token.scope;
  out.aal = token.aal;
  out.subject = token.subject;
  return out;
}

}  // namespace authsim::federation

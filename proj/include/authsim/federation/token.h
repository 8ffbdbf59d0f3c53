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

#ifndef AUTHSIM_FEDERATION_TOKEN_H_
#define AUTHSIM_FEDERATION_TOKEN_H_

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/common/status.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/identity/aal.h"
#include "authsim/identity/attributes.h"

namespace authsim::federation {

using Scope = std::map<std::string, identity::AttributeValue>;

// Audience- and scope-restricted bearer token. The signature covers the
// canonical JSON of every other field.
struct AccessToken {
  std::string subject;
  PrincipalId issuer;
  PrincipalId audience;
  Scope scope;
  SimTime issued_at;
  SimTime expires_at;
  identity::Aal aal = identity::Aal::kNone;
  crypto::Signature signature{};
};

std::string TokenSignedBytes(const AccessToken& token);
Json TokenToJson(const AccessToken& token);
absl::StatusOr<AccessToken> TokenFromJson(const Json& json);
Json ScopeToJson(const Scope& scope);
absl::StatusOr<Scope> ScopeFromJson(const Json& json);

struct Pseudonym {
  std::string value;
  std::string session_id;
};

// Mints one-time pseudonyms and signs tokens. Each pseudonym may back at
// most one token.
class TokenIssuer {
 public:
  TokenIssuer(PrincipalId issuer, crypto::SigningKey key, crypto::Drbg rng,
              SimDuration lifetime = std::chrono::seconds(600));

  const PrincipalId& id() const { return issuer_; }
  const crypto::VerifyKey& verify_key() const { return key_.verify_key(); }
  SimDuration lifetime() const { return lifetime_; }

  // 128 fresh random bits, unrelated to any user identifier.
  Pseudonym IssuePseudonym(const std::string& session_id);
  // PseudonymReused if the pseudonym already backs a token or was not minted
  // here.
  absl::StatusOr<AccessToken> Mint(const Pseudonym& subject,
                                   const PrincipalId& audience, Scope scope,
                                   identity::Aal aal, SimTime now);
  // Shorthand for IssuePseudonym + Mint.
  absl::StatusOr<AccessToken> MintFresh(const std::string& session_id,
                                        const PrincipalId& audience, Scope scope,
                                        identity::Aal aal, SimTime now);

  std::size_t pseudonyms_issued() const { return issued_.size(); }

 private:
  PrincipalId issuer_;
  crypto::SigningKey key_;
  crypto::Drbg rng_;
  SimDuration lifetime_;
  std::set<std::string> issued_;
  std::set<std::string> used_;
};

struct TokenValidation {
  bool valid = false;
  // Set when invalid: AuthenticationFailed (signature or issuer),
  // AudienceMismatch or Expired.
  std::optional<ErrorCode> reason;
  Scope scope;
  identity::Aal aal = identity::Aal::kNone;
  std::string subject;
};

// Valid iff the signature verifies under `issuer_key`, the presenting
// audience is the token audience, and now < expires_at.
TokenValidation ValidateToken(const AccessToken& token,
                              const crypto::VerifyKey& issuer_key,
                              const PrincipalId& presenting_audience,
                              SimTime now);

}  // namespace authsim::federation

#endif  // AUTHSIM_FEDERATION_TOKEN_H_

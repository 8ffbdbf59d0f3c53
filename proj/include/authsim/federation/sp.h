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

#ifndef AUTHSIM_FEDERATION_SP_H_
#define AUTHSIM_FEDERATION_SP_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/federation/idp.h"
#include "authsim/federation/token.h"

namespace authsim::federation {

struct SpSession {
  std::string session_id;
  std::vector<std::string> wanted;
  // Set once the IdP's response reaches this session.
  std::optional<std::string> csrf;
  std::optional<std::string> subject;
  Scope scope;
  identity::Aal aal = identity::Aal::kNone;
  bool granted = false;
};

// Relying party. Knows only the IdP origin and token key it trusts; it
// never sees credentials or device keys.
class ServiceProvider {
 public:
  ServiceProvider(PrincipalId id, std::string trusted_origin,
                  crypto::VerifyKey idp_key, crypto::Drbg rng);

  const PrincipalId& id() const { return id_; }

  // Step 1: opens a local session that the IdP will redirect back to.
  std::string BeginLogin(std::vector<std::string> wanted);

  // Step 5 arrives on the front channel. CsrfRejected when the origin
  // header is not the trusted IdP or the session is unknown.
  absl::Status OnAuthnResponse(const IssuedCode& code, std::string_view origin_header);

  // Step 6 result. Validates the token and records the grant (step 7).
  // ReplayDetected once the session has been granted.
  absl::StatusOr<TokenValidation> OnToken(const std::string& session_id,
                                          const AccessToken& token, SimTime now);

  const SpSession* Session(const std::string& session_id) const;
  // Everything this SP has persisted, as serialized bytes, for leak scans.
  std::string StorageBytes() const;
  std::vector<std::string> Subjects() const;

 private:
  PrincipalId id_;
  std::string trusted_origin_;
  crypto::VerifyKey idp_key_;
  crypto::Drbg rng_;
  std::map<std::string, SpSession> sessions_;
};

}  // namespace authsim::federation

#endif  // AUTHSIM_FEDERATION_SP_H_

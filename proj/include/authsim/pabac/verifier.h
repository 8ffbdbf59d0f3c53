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

#ifndef AUTHSIM_PABAC_VERIFIER_H_
#define AUTHSIM_PABAC_VERIFIER_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/federation/idp.h"
#include "authsim/federation/sp.h"
#include "authsim/pabac/blind_rsa.h"
#include "authsim/pabac/credential.h"
#include "authsim/pabac/wallet.h"

namespace authsim::pabac {

enum class RejectReason {
  kMalformed,
  kUntrustedIssuer,
  kNonceMismatch,
  kBadSignature,
  kOpeningMismatch,
  kHolderSignature,
  kDoubleSpend,
};

std::string_view RejectReasonName(RejectReason reason);

struct VerificationResult {
  bool accepted = false;
  std::optional<RejectReason> reason;
  Scope disclosed;
};

// Single-show verifier. The double-spend set is local and never pruned.
class CredentialVerifier {
 public:
  void TrustIssuer(const PrincipalId& issuer, RsaPublicKey key);

  // Accept iff the issuer is trusted, the nonce is the expected one, the
  // issuer signature verifies, every disclosed opening matches its
  // commitment, the holder signed this session, and the serial is unseen.
  // Records the serial on accept.
  VerificationResult Verify(const Presentation& presentation,
                            const std::string& expected_nonce);

  std::size_t spent_count() const { return spent_.size(); }

 private:
  std::map<PrincipalId, RsaPublicKey> trusted_;
  std::set<std::string> spent_;
};

// Plugs a verifier into an IdP as its credential authentication module.
// Rejections surface as AuthenticationFailed (ReplayDetected for a double
// spend) with the reason name in the message.
class PabacAuthModule : public federation::CredentialAuthModule {
 public:
  explicit PabacAuthModule(CredentialVerifier* verifier) : verifier_(verifier) {}
  absl::StatusOr<Scope> VerifyPresentation(const Json& presentation,
                                           const std::string& nonce,
                                           SimTime now) override;

 private:
  CredentialVerifier* verifier_;
};

// The whole SP -> IdP -> wallet round trip. The SP only ever handles the
// authorization code and the resulting token. NoCoveringToken when the
// wallet is out of suitable tokens.
absl::StatusOr<federation::AccessToken> FederatedPabacLogin(
    federation::ServiceProvider& sp, federation::IdentityProvider& idp,
    Wallet& wallet, const std::set<std::string>& required, SimTime now);

}  // namespace authsim::pabac

#endif  // AUTHSIM_PABAC_VERIFIER_H_

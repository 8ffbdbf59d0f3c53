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

#ifndef AUTHSIM_PABAC_ISSUER_H_
#define AUTHSIM_PABAC_ISSUER_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/crypto/drbg.h"
#include "authsim/pabac/blind_rsa.h"
#include "authsim/pabac/credential.h"

namespace authsim::pabac {

// Blind issuance with cut-and-choose: the holder blinds k candidate
// credentials, the issuer opens all but one at random and checks them, then
// signs the remaining blinded value. A holder cheating on the attribute
// values is caught with probability 1 - 1/k per token.
inline constexpr std::size_t kCutAndChoose = 4;

struct IssuanceRequest {
  std::string user;
  Scope attributes;
  std::vector<std::string> blinded;  // base64, one per candidate
};

struct IssuanceChallenge {
  std::string session_id;
  std::size_t keep = 0;  // the candidate that stays unopened
};

struct CandidateOpening {
  std::size_t index = 0;
  std::string serial;
  crypto::VerifyKey holder_key;
  std::map<std::string, std::string> salts;
  std::string r;  // blinding factor, base64
};

struct IssuanceOpening {
  std::string session_id;
  std::vector<CandidateOpening> openings;
};

struct IssuanceResponse {
  std::string session_id;
  std::string blind_signature;  // base64
};

Json IssuanceRequestToJson(const IssuanceRequest& m);
absl::StatusOr<IssuanceRequest> IssuanceRequestFromJson(const Json& json);
Json IssuanceChallengeToJson(const IssuanceChallenge& m);
absl::StatusOr<IssuanceChallenge> IssuanceChallengeFromJson(const Json& json);
Json IssuanceOpeningToJson(const IssuanceOpening& m);
absl::StatusOr<IssuanceOpening> IssuanceOpeningFromJson(const Json& json);
Json IssuanceResponseToJson(const IssuanceResponse& m);
absl::StatusOr<IssuanceResponse> IssuanceResponseFromJson(const Json& json);

// Returns the attributes the issuer verified for a user, or nullptr.
using VerifiedAttributeLookup =
    std::function<const std::vector<identity::IdentityAttribute>*(const std::string&)>;

class CredentialIssuer {
 public:
  CredentialIssuer(PrincipalId id, RsaPrivateKey key, crypto::Drbg rng,
                   VerifiedAttributeLookup lookup);

  const PrincipalId& id() const { return id_; }
  const RsaPublicKey& public_key() const { return key_.pub; }

  // AttributeNotVerified unless every requested (name, value) is held in the
  // issuer's repository for the user.
  absl::StatusOr<IssuanceChallenge> Begin(const IssuanceRequest& request);
  // IssuanceRejected if any opened candidate does not reproduce its blinded
  // value or commits to something other than the requested attributes.
  absl::StatusOr<IssuanceResponse> Finish(const IssuanceOpening& opening);

  // Every message the issuer saw or sent, one document per session.
  const std::vector<Json>& transcripts() const { return transcripts_; }

 private:
  struct Session {
    IssuanceRequest request;
    std::size_t keep;
    std::size_t transcript;
  };

  PrincipalId id_;
  RsaPrivateKey key_;
  crypto::Drbg rng_;
  VerifiedAttributeLookup lookup_;
  std::map<std::string, Session> sessions_;
  std::vector<Json> transcripts_;
};

// Holder side of one issuance run.
class IssuanceClient {
 public:
  IssuanceClient(std::string user, PrincipalId issuer, RsaPublicKey issuer_key,
                 Scope attributes, crypto::Drbg& rng);

  const IssuanceRequest& request() const { return request_; }
  IssuanceOpening Answer(const IssuanceChallenge& challenge);
  // Unblinds and checks the signature. IssuanceRejected on a bad signature.
  absl::StatusOr<AttributeCredential> Complete(const IssuanceResponse& response);

 private:
  RsaPublicKey issuer_key_;
  std::vector<AttributeCredential> candidates_;
  std::vector<mpz_class> blinding_;
  IssuanceRequest request_;
  std::optional<std::size_t> keep_;
};

class Wallet;

// Runs `count` issuance sessions in process and installs the tokens.
absl::Status IssueCredentials(CredentialIssuer& issuer, Wallet& wallet,
                              const std::string& user, const Scope& attributes,
                              std::size_t count, crypto::Drbg& rng);

}  // namespace authsim::pabac

#endif  // AUTHSIM_PABAC_ISSUER_H_

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

#ifndef AUTHSIM_PABAC_CREDENTIAL_H_
#define AUTHSIM_PABAC_CREDENTIAL_H_

#include <array>
#include <map>
#include <string>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/federation/token.h"
#include "authsim/identity/attributes.h"

namespace authsim::pabac {

using federation::Scope;

// Salted SHA-256 binding commitment to one attribute. Base64 digest.
std::string CommitAttribute(const std::string& name,
                            const identity::AttributeValue& value,
                            const std::string& salt);

struct AttributeOpening {
  identity::AttributeValue value;
  std::string salt;  // base64, 32 bytes

  friend bool operator==(const AttributeOpening&, const AttributeOpening&) = default;
};

// The part of a credential the issuer's signature covers.
struct CredentialBody {
  std::string serial;  // base64, 32 random bytes chosen by the holder
  crypto::VerifyKey holder_key;
  PrincipalId issuer;
  std::map<std::string, std::string> commitments;

  friend bool operator==(const CredentialBody&, const CredentialBody&) = default;
};

std::string CredentialMessage(const CredentialBody& body);
Json BodyToJson(const CredentialBody& body);
absl::StatusOr<CredentialBody> BodyFromJson(const Json& json);

enum class ShowState { kFresh, kSpent };

// Holder-side credential: the signed body plus every opening and the
// per-token holder key seed. Never leaves the wallet except sealed in a
// backup.
struct AttributeCredential {
  CredentialBody body;
  std::map<std::string, AttributeOpening> openings;
  std::string signature;  // base64, modulus width
  std::array<std::uint8_t, 32> holder_seed{};
  ShowState state = ShowState::kFresh;
};

Json CredentialToJson(const AttributeCredential& c);
absl::StatusOr<AttributeCredential> CredentialFromJson(const Json& json);

// Fresh serial, holder key and salts for the given attributes. The
// signature is left empty.
AttributeCredential MakeCandidate(const PrincipalId& issuer, const Scope& attributes,
                                  crypto::Drbg& rng);

// What a verifier receives. Holds commitments to every attribute but
// openings only for the disclosed ones.
struct Presentation {
  CredentialBody body;
  std::map<std::string, AttributeOpening> disclosed;
  std::string signature;
  // Verifier-chosen session nonce, signed by the holder key.
  std::string nonce;
  std::string holder_signature;  // base64 Ed25519
};

std::string PresentationSignedBytes(const Presentation& p);
Json PresentationToJson(const Presentation& p);
absl::StatusOr<Presentation> PresentationFromJson(const Json& json);

}  // namespace authsim::pabac

#endif  // AUTHSIM_PABAC_CREDENTIAL_H_

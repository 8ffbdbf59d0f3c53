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

#ifndef AUTHSIM_IDC_DOCUMENTS_H_
#define AUTHSIM_IDC_DOCUMENTS_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/sim_time.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/identity/attributes.h"

namespace authsim::idc {

// Simulated e-passport as read over NFC. Fields hold the raw printed form;
// acquisition normalizes them.
struct IdentityDocument {
  std::string document_id;
  std::string name;
  std::string birthdate;
  std::string country;
  crypto::Signature signature{};
};

std::string DocumentSignedBytes(const IdentityDocument& doc);
std::string DocumentToText(const IdentityDocument& doc);
// DocumentParseError for anything but a complete record.
absl::StatusOr<IdentityDocument> ParseDocument(std::string_view text);

// Fixture issuing authority standing in for a passport office.
class DocumentAuthority {
 public:
  DocumentAuthority(PrincipalId id, crypto::Drbg& rng)
      : id_(std::move(id)), key_(crypto::SigningKey::Generate(rng)) {}

  const PrincipalId& id() const { return id_; }
  const crypto::VerifyKey& verify_key() const { return key_.verify_key(); }

  IdentityDocument Issue(std::string document_id, std::string name,
                         std::string birthdate, std::string country) const;

 private:
  PrincipalId id_;
  crypto::SigningKey key_;
};

// Parses, checks the authority signature and normalizes the three fields
// into attributes with `source`. A bad signature is reported as a
// DocumentParseError too: the reader cannot tell tampering from corruption.
absl::StatusOr<std::vector<identity::IdentityAttribute>> AcquireDocument(
    std::string_view text, const crypto::VerifyKey& authority,
    const identity::AttributeSchema& schema, const PrincipalId& source, SimTime now);

// True when every acquired attribute equals the stored value of the same
// name and all three document fields are present in `stored`.
bool DocumentMatches(const std::vector<identity::IdentityAttribute>& acquired,
                     const std::vector<identity::IdentityAttribute>& stored);

}  // namespace authsim::idc

#endif  // AUTHSIM_IDC_DOCUMENTS_H_

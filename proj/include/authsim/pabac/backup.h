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

#ifndef AUTHSIM_PABAC_BACKUP_H_
#define AUTHSIM_PABAC_BACKUP_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/identity/aal.h"
#include "authsim/pabac/credential.h"
#include "authsim/pabac/wallet.h"

namespace authsim::pabac {

// Fresh tokens sealed under a key derived from the user's backup password.
// The IDC stores the blob but cannot open it.
struct CredentialBackup {
  PrincipalId owner;
  std::uint64_t version = 0;
  std::string salt;  // base64
  crypto::PasswordHashParams kdf;
  std::string blob;  // base64 of nonce || ciphertext || tag
};

Json BackupToJson(const CredentialBackup& b);
absl::StatusOr<CredentialBackup> BackupFromJson(const Json& json);

// Minimum session levels for managing credentials at the IDC.
inline constexpr identity::Aal kBackupMinAal = identity::Aal::kAal2;
inline constexpr identity::Aal kRestoreMinAal = identity::Aal::kAal3;

// TentativeAccessDenied below kBackupMinAal. Spent tokens are left out.
absl::StatusOr<CredentialBackup> CreateBackup(const Wallet& wallet,
                                              std::string_view password,
                                              std::uint64_t version,
                                              const crypto::PasswordHashParams& kdf,
                                              crypto::Drbg& rng,
                                              identity::Aal session_aal);

// TentativeAccessDenied below kRestoreMinAal; IntegrityError for a wrong
// password or a modified blob.
absl::StatusOr<std::vector<AttributeCredential>> RestoreBackup(
    const CredentialBackup& backup, std::string_view password,
    identity::Aal session_aal);

// IDC-side storage, newest version per owner.
class CredentialBackupStore {
 public:
  // TentativeAccessDenied below kBackupMinAal; InvalidArgument if the version
  // does not advance.
  absl::Status Put(CredentialBackup backup, identity::Aal session_aal);
  // TentativeAccessDenied below kRestoreMinAal; NotFound without a backup.
  absl::StatusOr<CredentialBackup> Fetch(const PrincipalId& owner,
                                         identity::Aal session_aal) const;
  // What the operator can read from its own storage.
  std::string OperatorBytes() const;
  std::uint64_t LatestVersion(const PrincipalId& owner) const;

 private:
  std::map<PrincipalId, CredentialBackup> backups_;
};

}  // namespace authsim::pabac

#endif  // AUTHSIM_PABAC_BACKUP_H_

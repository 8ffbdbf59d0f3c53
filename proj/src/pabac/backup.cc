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

#include "authsim/pabac/backup.h"

#include "authsim/common/status.h"

namespace authsim::pabac {
namespace {

std::string AssociatedData(const PrincipalId& owner, std::uint64_t version) {
  return CanonicalJson({{"ctx", "authsim.backup.v1"},
                        {"owner", owner.value()},
                        {"version", version}});
}

}  // namespace

Json BackupToJson(const CredentialBackup& b) {
  return {{"owner", b.owner.value()},
          {"version", b.version},
          {"salt", b.salt},
          {"kdf", {{"opslimit", b.kdf.opslimit}, {"memlimit", b.kdf.memlimit}}},
          {"blob", b.blob}};
}

absl::StatusOr<CredentialBackup> BackupFromJson(const Json& json) {
  CredentialBackup b;
  try {
    b.owner = PrincipalId(json.at("owner").get<std::string>());
    b.version = json.at("version").get<std::uint64_t>();
    b.salt = json.at("salt").get<std::string>();
    b.kdf.opslimit = json.at("kdf").at("opslimit").get<std::uint64_t>();
    b.kdf.memlimit = json.at("kdf").at("memlimit").get<std::size_t>();
    b.blob = json.at("blob").get<std::string>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return b;
}

absl::StatusOr<CredentialBackup> CreateBackup(const Wallet& wallet,
                                              std::string_view password,
                                              std::uint64_t version,
                                              const crypto::PasswordHashParams& kdf,
                                              crypto::Drbg& rng,
                                              identity::Aal session_aal) {
  if (session_aal < kBackupMinAal) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     "credential backup needs a non-tentative session");
  }
  CredentialBackup b;
  b.owner = wallet.owner();
  b.version = version;
  b.kdf = kdf;
  crypto::Bytes salt = rng.RandomBytes(crypto::kPasswordSaltSize);
  b.salt = crypto::Base64Encode(salt);
  Json tokens = Json::array();
  for (const AttributeCredential& t : wallet.FreshTokens()) {
    tokens.push_back(CredentialToJson(t));
  }
  const crypto::AeadKey key = crypto::DeriveKeyFromPassword(password, salt, kdf);
  b.blob = crypto::Base64Encode(
      crypto::AeadSeal(key, crypto::AsBytes(CanonicalJson(tokens)),
                       crypto::AsBytes(AssociatedData(b.owner, b.version)), rng));
  return b;
}

absl::StatusOr<std::vector<AttributeCredential>> RestoreBackup(
    const CredentialBackup& backup, std::string_view password,
    identity::Aal session_aal) {
  if (session_aal < kRestoreMinAal) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     "credential restore needs a completed recovery");
  }
  std::optional<crypto::Bytes> salt = crypto::Base64Decode(backup.salt);
  std::optional<crypto::Bytes> blob = crypto::Base64Decode(backup.blob);
  if (!salt || !blob) {
    return MakeError(ErrorCode::kIntegrityError, "backup encoding damaged");
  }
  const crypto::AeadKey key = crypto::DeriveKeyFromPassword(password, *salt, backup.kdf);
  std::optional<crypto::Bytes> plain = crypto::AeadOpen(
      key, *blob, crypto::AsBytes(AssociatedData(backup.owner, backup.version)));
  if (!plain) {
    return MakeError(ErrorCode::kIntegrityError, "backup does not open");
  }
  Json tokens = Json::parse(plain->begin(), plain->end(), nullptr, false);
  if (!tokens.is_array()) {
    return MakeError(ErrorCode::kIntegrityError, "backup payload is not a token list");
  }
  std::vector<AttributeCredential> out;
  for (const Json& t : tokens) {
    AUTHSIM_ASSIGN_OR_RETURN(AttributeCredential c, CredentialFromJson(t));
    out.push_back(std::move(c));
  }
  return out;
}

absl::Status CredentialBackupStore::Put(CredentialBackup backup,
                                        identity::Aal session_aal) {
  if (session_aal < kBackupMinAal) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     "credential backup needs a non-tentative session");
  }
  if (backup.version <= LatestVersion(backup.owner)) {
    return MakeError(ErrorCode::kInvalidArgument, "backup version must advance");
  }
  backups_[backup.owner] = std::move(backup);
  return absl::OkStatus();
}

absl::StatusOr<CredentialBackup> CredentialBackupStore::Fetch(
    const PrincipalId& owner, identity::Aal session_aal) const {
  if (session_aal < kRestoreMinAal) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     "credential restore needs a completed recovery");
  }
  auto it = backups_.find(owner);
  if (it == backups_.end()) return MakeError(ErrorCode::kNotFound, "no backup");
  return it->second;
}

std::string CredentialBackupStore::OperatorBytes() const {
  Json out = Json::array();
  for (const auto& [_, b] : backups_) out.push_back(BackupToJson(b));
  return CanonicalJson(out);
}

std::uint64_t CredentialBackupStore::LatestVersion(const PrincipalId& owner) const {
  auto it = backups_.find(owner);
  return it == backups_.end() ? 0 : it->second.version;
}

}  // namespace authsim::pabac

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

#include "authsim/baa/password_vault.h"

#include "authsim/common/json.h"
#include "authsim/common/status.h"

namespace authsim::baa {
namespace {

crypto::AeadKey VaultKey(crypto::Drbg& rng) { return crypto::RandomAeadKey(rng); }

}  // namespace

BackupPasswordVault::BackupPasswordVault(crypto::Drbg rng)
    : store_(VaultKey(rng), rng.Fork("vault")) {}

absl::Status BackupPasswordVault::Store(const PrincipalId& user,
                                        std::vector<StoredPassword> entries,
                                        identity::Aal session_aal) {
  if (session_aal < identity::Aal::kAal2) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     "storing backup passwords needs a non-tentative session");
  }
  Json list = Json::array();
  for (const auto& e : entries) {
    list.push_back({{"entity", e.entity.value()}, {"password", e.password}});
  }
  store_.Seal("passwords:" + user.value(), crypto::AsBytes(CanonicalJson(list)));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<StoredPassword>> BackupPasswordVault::List(
    const PrincipalId& user, identity::Aal session_aal) const {
  if (session_aal < identity::Aal::kAal1) {
    return MakeError(ErrorCode::kAccessDenied, "no IDC session");
  }
  const std::string id = "passwords:" + user.value();
  if (!store_.Contains(id)) return std::vector<StoredPassword>{};
  AUTHSIM_ASSIGN_OR_RETURN(crypto::Bytes plain, store_.Unseal(id));
  std::vector<StoredPassword> out;
  for (const Json& e : Json::parse(plain.begin(), plain.end())) {
    out.push_back({PrincipalId(e.at("entity").get<std::string>()),
                   e.at("password").get<std::string>()});
  }
  return out;
}

}  // namespace authsim::baa

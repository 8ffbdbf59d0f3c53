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

#ifndef AUTHSIM_BAA_PASSWORD_VAULT_H_
#define AUTHSIM_BAA_PASSWORD_VAULT_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/crypto/drbg.h"
#include "authsim/device/sealed_store.h"
#include "authsim/identity/aal.h"

namespace authsim::baa {

struct StoredPassword {
  PrincipalId entity;  // the BAA or AAL1 IdP the password opens
  std::string password;

  friend bool operator==(const StoredPassword&, const StoredPassword&) = default;
};

// IDC-held list of BAA and AAL1 IdP backup passwords. Writing needs a
// non-tentative session; a tentative one may read, since recovery depends
// on it.
class BackupPasswordVault {
 public:
  explicit BackupPasswordVault(crypto::Drbg rng);

  // TentativeAccessDenied below AAL2. Replaces the user's list.
  absl::Status Store(const PrincipalId& user, std::vector<StoredPassword> entries,
                     identity::Aal session_aal);
  // AccessDenied below AAL1. Empty when nothing was stored.
  absl::StatusOr<std::vector<StoredPassword>> List(const PrincipalId& user,
                                                   identity::Aal session_aal) const;

 private:
  device::SealedStore store_;
};

}  // namespace authsim::baa

#endif  // AUTHSIM_BAA_PASSWORD_VAULT_H_

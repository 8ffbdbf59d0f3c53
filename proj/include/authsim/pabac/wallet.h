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

#ifndef AUTHSIM_PABAC_WALLET_H_
#define AUTHSIM_PABAC_WALLET_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/pabac/credential.h"

namespace authsim::pabac {

// Device-resident token store. Only the owning device actor mutates it.
class Wallet {
 public:
  explicit Wallet(PrincipalId owner) : owner_(std::move(owner)) {}

  const PrincipalId& owner() const { return owner_; }
  const std::vector<AttributeCredential>& tokens() const { return tokens_; }
  std::size_t FreshCount() const;
  std::vector<AttributeCredential> FreshTokens() const;

  void Install(AttributeCredential credential);
  void Clear() { tokens_.clear(); }

  // First Fresh token whose attributes include every name.
  std::optional<std::size_t> FindCovering(const std::set<std::string>& names) const;

  // Reveals exactly `disclose` and marks the token Spent. TokenSpent if it
  // was already shown; NoSuchAttribute if it does not hold a name.
  absl::StatusOr<Presentation> Present(std::size_t index,
                                       const std::set<std::string>& disclose,
                                       const std::string& nonce);
  // NoCoveringToken when no Fresh token holds the names.
  absl::StatusOr<Presentation> PresentCovering(const std::set<std::string>& disclose,
                                               const std::string& nonce);

 private:
  PrincipalId owner_;
  std::vector<AttributeCredential> tokens_;
};

}  // namespace authsim::pabac

#endif  // AUTHSIM_PABAC_WALLET_H_

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

#include "authsim/pabac/wallet.h"

#include <algorithm>

#include "authsim/common/status.h"
#include "authsim/crypto/primitives.h"

namespace authsim::pabac {

std::size_t Wallet::FreshCount() const {
  return std::count_if(tokens_.begin(), tokens_.end(),
                       [](const auto& t) { return t.state == ShowState::kFresh; });
}

std::vector<AttributeCredential> Wallet::FreshTokens() const {
  std::vector<AttributeCredential> out;
  std::copy_if(tokens_.begin(), tokens_.end(), std::back_inserter(out),
               [](const auto& t) { return t.state == ShowState::kFresh; });
  return out;
}

void Wallet::Install(AttributeCredential credential) {
  tokens_.push_back(std::move(credential));
}

std::optional<std::size_t> Wallet::FindCovering(
    const std::set<std::string>& names) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].state != ShowState::kFresh) continue;
    const auto& openings = tokens_[i].openings;
    if (std::all_of(names.begin(), names.end(),
                    [&](const auto& n) { return openings.contains(n); })) {
      return i;
    }
  }
  return std::nullopt;
}

absl::StatusOr<Presentation> Wallet::Present(std::size_t index,
                                             const std::set<std::string>& disclose,
                                             const std::string& nonce) {
  if (index >= tokens_.size()) {
    return MakeError(ErrorCode::kNotFound, "no such token");
  }
  AttributeCredential& token = tokens_[index];
  if (token.state == ShowState::kSpent) {
    return MakeError(ErrorCode::kTokenSpent, "token already shown");
  }
  Presentation p;
  p.body = token.body;
  for (const std::string& name : disclose) {
    auto it = token.openings.find(name);
    if (it == token.openings.end()) {
      return MakeError(ErrorCode::kNoSuchAttribute, "token does not hold " + name);
    }
    p.disclosed[name] = it->second;
  }
  p.signature = token.signature;
  p.nonce = nonce;
  const crypto::SigningKey holder = crypto::SigningKey::FromSeed(token.holder_seed);
  p.holder_signature =
      crypto::Base64Encode(holder.Sign(crypto::AsBytes(PresentationSignedBytes(p))));
  token.state = ShowState::kSpent;
  return p;
}

absl::StatusOr<Presentation> Wallet::PresentCovering(
    const std::set<std::string>& disclose, const std::string& nonce) {
  std::optional<std::size_t> index = FindCovering(disclose);
  if (!index) {
    return MakeError(ErrorCode::kNoCoveringToken, "no fresh token covers the request");
  }
  return Present(*index, disclose, nonce);
}

}  // namespace authsim::pabac

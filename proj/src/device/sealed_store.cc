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

#include "authsim/device/sealed_store.h"

#include "authsim/common/status.h"

namespace authsim::device {

SealedStore::SealedStore(const crypto::AeadKey& seal_key, crypto::Drbg rng)
    : seal_key_(seal_key), rng_(std::move(rng)) {}

void SealedStore::Seal(const std::string& id,
                       std::span<const std::uint8_t> plaintext) {
  entries_[id] = crypto::AeadSeal(seal_key_, plaintext, crypto::AsBytes(id), rng_);
}

absl::StatusOr<Bytes> SealedStore::Unseal(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    return MakeError(ErrorCode::kNotFound, "no sealed entry " + id);
  }
  std::optional<Bytes> plain =
      crypto::AeadOpen(seal_key_, it->second, crypto::AsBytes(id));
  if (!plain) {
    return MakeError(ErrorCode::kIntegrityError,
                     "sealed entry " + id + " failed authentication");
  }
  return *std::move(plain);
}

}  // namespace authsim::device

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

#ifndef AUTHSIM_DEVICE_SEALED_STORE_H_
#define AUTHSIM_DEVICE_SEALED_STORE_H_

#include <map>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"

namespace authsim::device {

using crypto::Bytes;

// TEE-modeled credential storage. Blobs are sealed with a device-local key
// under AEAD with the entry id as associated data, so blobs cannot be swapped
// between ids either.
class SealedStore {
 public:
  SealedStore(const crypto::AeadKey& seal_key, crypto::Drbg rng);

  void Seal(const std::string& id, std::span<const std::uint8_t> plaintext);
  // NotFound for unknown ids, IntegrityError when authentication fails.
  absl::StatusOr<Bytes> Unseal(const std::string& id) const;
  bool Contains(const std::string& id) const { return entries_.contains(id); }
  void Erase(const std::string& id) { entries_.erase(id); }

  const std::map<std::string, Bytes>& entries() const { return entries_; }

  // Raw write access to the backing storage, as an attacker with physical
  // access to flash would have. Bypasses sealing.
  void OverwriteRaw(const std::string& id, Bytes blob) {
    entries_[id] = std::move(blob);
  }

  // Only reachable through the HardwareAttack capability.
  const crypto::AeadKey& seal_key_for_hardware_attack() const {
    return seal_key_;
  }

 private:
  crypto::AeadKey seal_key_;
  crypto::Drbg rng_;
  std::map<std::string, Bytes> entries_;
};

}  // namespace authsim::device

#endif  // AUTHSIM_DEVICE_SEALED_STORE_H_

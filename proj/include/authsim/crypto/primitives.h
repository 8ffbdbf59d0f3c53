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

#ifndef AUTHSIM_CRYPTO_PRIMITIVES_H_
#define AUTHSIM_CRYPTO_PRIMITIVES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "authsim/crypto/drbg.h"

namespace authsim::crypto {

using Digest = std::array<std::uint8_t, 32>;

Digest Sha256(std::span<const std::uint8_t> data);
Digest Sha256(std::string_view data);

inline std::span<const std::uint8_t> AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string HexEncode(std::span<const std::uint8_t> data);
std::optional<Bytes> HexDecode(std::string_view hex);
std::string Base64Encode(std::span<const std::uint8_t> data);
std::optional<Bytes> Base64Decode(std::string_view text);

// Constant-time equality.
bool SecureEqual(std::span<const std::uint8_t> a,
                 std::span<const std::uint8_t> b);

// Ed25519 (RFC 8032), a Schnorr-family signature.
using Signature = std::array<std::uint8_t, 64>;

class VerifyKey {
 public:
  static constexpr std::size_t kSize = 32;

  VerifyKey() = default;
  explicit VerifyKey(const std::array<std::uint8_t, kSize>& bytes)
      : bytes_(bytes) {}
  static absl::StatusOr<VerifyKey> FromBytes(std::span<const std::uint8_t> b);
  static absl::StatusOr<VerifyKey> FromBase64(std::string_view text);

  bool Verify(std::span<const std::uint8_t> message,
              std::span<const std::uint8_t> signature) const;

  const std::array<std::uint8_t, kSize>& bytes() const { return bytes_; }
  std::string ToBase64() const { return Base64Encode(bytes_); }

  friend bool operator==(const VerifyKey&, const VerifyKey&) = default;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

class SigningKey {
 public:
  static constexpr std::size_t kSeedSize = 32;

  static SigningKey Generate(Drbg& rng);
  static SigningKey FromSeed(std::span<const std::uint8_t, kSeedSize> seed);

  SigningKey(const SigningKey& other);
  SigningKey& operator=(const SigningKey& other);
  SigningKey(SigningKey&&) noexcept;
  SigningKey& operator=(SigningKey&&) noexcept;
  ~SigningKey();

  Signature Sign(std::span<const std::uint8_t> message) const;
  const VerifyKey& verify_key() const { return verify_key_; }

  // Secret material, exposed for sealing into a SealedStore and for the
  // key-isolation byte scans in tests.
  std::span<const std::uint8_t, kSeedSize> seed() const { return seed_; }
  std::span<const std::uint8_t, 64> expanded_secret() const { return secret_; }

 private:
  SigningKey() = default;

  std::array<std::uint8_t, kSeedSize> seed_{};
  std::array<std::uint8_t, 64> secret_{};
  VerifyKey verify_key_;
};

// XChaCha20-Poly1305 (IETF) authenticated encryption.
using AeadKey = std::array<std::uint8_t, 32>;
inline constexpr std::size_t kAeadNonceSize = 24;

AeadKey RandomAeadKey(Drbg& rng);

// Returns nonce || ciphertext || tag with a fresh nonce drawn from `rng`.
Bytes AeadSeal(const AeadKey& key, std::span<const std::uint8_t> plaintext,
               std::span<const std::uint8_t> associated_data, Drbg& rng);
// Inverse of AeadSeal; nullopt on any authentication failure.
std::optional<Bytes> AeadOpen(const AeadKey& key,
                              std::span<const std::uint8_t> sealed,
                              std::span<const std::uint8_t> associated_data);

// Argon2id parameters. The defaults are deliberately light so simulation runs
// stay fast; use Interactive() for anything resembling production settings.
struct PasswordHashParams {
  std::uint64_t opslimit = 1;
  std::size_t memlimit = 64 * 1024;

  static PasswordHashParams Interactive();
  static PasswordHashParams Minimal();
  friend bool operator==(const PasswordHashParams&,
                         const PasswordHashParams&) = default;
};

struct PasswordRecord {
  Bytes salt;
  Bytes hash;
  PasswordHashParams params;
};

PasswordRecord HashPassword(std::string_view password, Drbg& rng,
                            const PasswordHashParams& params);
bool VerifyPassword(const PasswordRecord& record, std::string_view password);

// Password-based key derivation (Argon2id) for sealing user-held blobs.
AeadKey DeriveKeyFromPassword(std::string_view password,
                              std::span<const std::uint8_t> salt,
                              const PasswordHashParams& params);

inline constexpr std::size_t kPasswordSaltSize = 16;

}  // namespace authsim::crypto

#endif  // AUTHSIM_CRYPTO_PRIMITIVES_H_

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

#include "authsim/crypto/primitives.h"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

#include "authsim/common/status.h"
#include "authsim/crypto/sodium_init.h"

namespace authsim::crypto {

void EnsureSodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
    return true;
  }();
  (void)ready;
}

Digest Sha256(std::span<const std::uint8_t> data) {
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest Sha256(std::string_view data) { return Sha256(AsBytes(data)); }

std::string HexEncode(std::span<const std::uint8_t> data) {
  std::string out(2 * data.size() + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.pop_back();
  return out;
}

std::optional<Bytes> HexDecode(std::string_view hex) {
  Bytes out(hex.size() / 2 + 1);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr,
                     &len, &end) != 0 ||
      end != hex.data() + hex.size()) {
    return std::nullopt;
  }
  out.resize(len);
  return out;
}

std::string Base64Encode(std::span<const std::uint8_t> data) {
  const std::size_t size =
      sodium_base64_ENCODED_LEN(data.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(size, '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(size - 1);
  return out;
}

std::optional<Bytes> Base64Decode(std::string_view text) {
  Bytes out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(),
                        nullptr, &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    return std::nullopt;
  }
  out.resize(len);
  return out;
}

bool SecureEqual(std::span<const std::uint8_t> a,
                 std::span<const std::uint8_t> b) {
  return a.size() == b.size() && sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

absl::StatusOr<VerifyKey> VerifyKey::FromBytes(std::span<const std::uint8_t> b) {
  if (b.size() != kSize) {
    return MakeError(ErrorCode::kInvalidArgument, "verify key must be 32 bytes");
  }
  std::array<std::uint8_t, kSize> raw;
  std::memcpy(raw.data(), b.data(), kSize);
  return VerifyKey(raw);
}

absl::StatusOr<VerifyKey> VerifyKey::FromBase64(std::string_view text) {
  std::optional<Bytes> raw = Base64Decode(text);
  if (!raw) return MakeError(ErrorCode::kInvalidArgument, "bad base64 key");
  return FromBytes(*raw);
}

bool VerifyKey::Verify(std::span<const std::uint8_t> message,
                       std::span<const std::uint8_t> signature) const {
  if (signature.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(),
                                     message.size(), bytes_.data()) == 0;
}

SigningKey SigningKey::Generate(Drbg& rng) {
  std::array<std::uint8_t, kSeedSize> seed;
  rng.Fill(seed);
  SigningKey key = FromSeed(seed);
  sodium_memzero(seed.data(), seed.size());
  return key;
}

SigningKey SigningKey::FromSeed(std::span<const std::uint8_t, kSeedSize> seed) {
  EnsureSodium();
  SigningKey key;
  std::memcpy(key.seed_.data(), seed.data(), kSeedSize);
  std::array<std::uint8_t, VerifyKey::kSize> pk;
  crypto_sign_seed_keypair(pk.data(), key.secret_.data(), key.seed_.data());
  key.verify_key_ = VerifyKey(pk);
  return key;
}

SigningKey::SigningKey(const SigningKey& other) = default;
SigningKey& SigningKey::operator=(const SigningKey& other) = default;
SigningKey::SigningKey(SigningKey&&) noexcept = default;
SigningKey& SigningKey::operator=(SigningKey&&) noexcept = default;

SigningKey::~SigningKey() {
  sodium_memzero(seed_.data(), seed_.size());
  sodium_memzero(secret_.data(), secret_.size());
}

Signature SigningKey::Sign(std::span<const std::uint8_t> message) const {
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret_.data());
  return sig;
}

AeadKey RandomAeadKey(Drbg& rng) {
  AeadKey key;
  rng.Fill(key);
  return key;
}

Bytes AeadSeal(const AeadKey& key, std::span<const std::uint8_t> plaintext,
               std::span<const std::uint8_t> associated_data, Drbg& rng) {
  EnsureSodium();
  Bytes out(kAeadNonceSize + plaintext.size() +
            crypto_aead_xchacha20poly1305_ietf_ABYTES);
  rng.Fill(std::span(out.data(), kAeadNonceSize));
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      out.data() + kAeadNonceSize, &clen, plaintext.data(), plaintext.size(),
      associated_data.data(), associated_data.size(), nullptr, out.data(),
      key.data());
  out.resize(kAeadNonceSize + clen);
  return out;
}

std::optional<Bytes> AeadOpen(const AeadKey& key,
                              std::span<const std::uint8_t> sealed,
                              std::span<const std::uint8_t> associated_data) {
  if (sealed.size() <
      kAeadNonceSize + crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    return std::nullopt;
  }
  Bytes plain(sealed.size() - kAeadNonceSize);
  unsigned long long mlen = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          plain.data(), &mlen, nullptr, sealed.data() + kAeadNonceSize,
          sealed.size() - kAeadNonceSize, associated_data.data(),
          associated_data.size(), sealed.data(), key.data()) != 0) {
    return std::nullopt;
  }
  plain.resize(mlen);
  return plain;
}

PasswordHashParams PasswordHashParams::Interactive() {
  return {crypto_pwhash_OPSLIMIT_INTERACTIVE,
          crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

PasswordHashParams PasswordHashParams::Minimal() {
  return {crypto_pwhash_argon2id_OPSLIMIT_MIN,
          crypto_pwhash_argon2id_MEMLIMIT_MIN};
}

namespace {

Bytes Argon2id(std::string_view password, std::span<const std::uint8_t> salt,
               const PasswordHashParams& params, std::size_t out_len) {
  EnsureSodium();
  if (salt.size() != crypto_pwhash_SALTBYTES) {
    throw std::invalid_argument("argon2id salt must be 16 bytes");
  }
  Bytes out(out_len);
  if (crypto_pwhash(out.data(), out.size(), password.data(), password.size(),
                    salt.data(), params.opslimit, params.memlimit,
                    crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw std::runtime_error("argon2id: out of memory");
  }
  return out;
}

}  // namespace

PasswordRecord HashPassword(std::string_view password, Drbg& rng,
                            const PasswordHashParams& params) {
  PasswordRecord record;
  record.salt = rng.RandomBytes(kPasswordSaltSize);
  record.params = params;
  record.hash = Argon2id(password, record.salt, params, 32);
  return record;
}

bool VerifyPassword(const PasswordRecord& record, std::string_view password) {
  Bytes candidate = Argon2id(password, record.salt, record.params, 32);
  return SecureEqual(candidate, record.hash);
}

AeadKey DeriveKeyFromPassword(std::string_view password,
                              std::span<const std::uint8_t> salt,
                              const PasswordHashParams& params) {
  Bytes raw = Argon2id(password, salt, params, 32);
  AeadKey key;
  std::memcpy(key.data(), raw.data(), key.size());
  sodium_memzero(raw.data(), raw.size());
  return key;
}

}  // namespace authsim::crypto

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

#ifndef AUTHSIM_PABAC_BLIND_RSA_H_
#define AUTHSIM_PABAC_BLIND_RSA_H_

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "authsim/common/json.h"
#include "authsim/crypto/drbg.h"

namespace authsim::pabac {

// RSA full-domain-hash blind signatures (Chaum). The issuer signs a blinded
// value and never learns the message or the final signature.
struct RsaPublicKey {
  mpz_class n;
  mpz_class e;

  std::size_t byte_size() const;
  Json ToJson() const;
  static absl::StatusOr<RsaPublicKey> FromJson(const Json& json);
  friend bool operator==(const RsaPublicKey& a, const RsaPublicKey& b) {
    return a.n == b.n && a.e == b.e;
  }
};

struct RsaPrivateKey {
  RsaPublicKey pub;
  mpz_class d, p, q, dp, dq, qinv;
};

// Deterministic given the generator state. `bits` is the modulus size.
RsaPrivateKey GenerateRsaKey(std::size_t bits, crypto::Drbg& rng);

// MGF1-SHA256 expansion of the message reduced mod n.
mpz_class FullDomainHash(std::span<const std::uint8_t> message,
                         const RsaPublicKey& key);

struct Blinded {
  mpz_class blinded;  // H(m) * r^e mod n, sent to the issuer
  mpz_class r;        // kept by the holder
};

Blinded Blind(const RsaPublicKey& key, std::span<const std::uint8_t> message,
              crypto::Drbg& rng);
// Recomputes the blinded value from an opened (message, r) pair.
mpz_class Reblind(const RsaPublicKey& key, std::span<const std::uint8_t> message,
                  const mpz_class& r);
// CRT exponentiation, checked against the public exponent before release.
mpz_class SignBlinded(const RsaPrivateKey& key, const mpz_class& blinded);
mpz_class Unblind(const RsaPublicKey& key, const mpz_class& blind_sig,
                  const mpz_class& r);
bool RsaVerify(const RsaPublicKey& key, std::span<const std::uint8_t> message,
               const mpz_class& signature);

// Fixed-width big-endian base64 for the key's modulus size.
std::string EncodeInt(const mpz_class& value, std::size_t width);
absl::StatusOr<mpz_class> DecodeInt(std::string_view base64);

}  // namespace authsim::pabac

#endif  // AUTHSIM_PABAC_BLIND_RSA_H_

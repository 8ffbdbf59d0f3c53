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

#include "authsim/pabac/blind_rsa.h"

#include <stdexcept>

#include "authsim/common/status.h"
#include "authsim/crypto/primitives.h"

namespace authsim::pabac {
namespace {

mpz_class FromBytes(std::span<const std::uint8_t> bytes) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

crypto::Bytes ToBytes(const mpz_class& value, std::size_t width) {
  crypto::Bytes out(width, 0);
  std::size_t count = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  if (value == 0) count = 0;
  if (count > width) throw std::length_error("integer wider than field");
  mpz_export(out.data() + (width - count), nullptr, 1, 1, 1, 0, value.get_mpz_t());
  return out;
}

mpz_class RandomBelow(const mpz_class& bound, crypto::Drbg& rng) {
  const std::size_t width = (mpz_sizeinbase(bound.get_mpz_t(), 2) + 7) / 8 + 8;
  return FromBytes(rng.RandomBytes(width)) % bound;
}

mpz_class RandomPrime(std::size_t bits, const mpz_class& e, crypto::Drbg& rng) {
  for (;;) {
    crypto::Bytes raw = rng.RandomBytes(bits / 8);
    raw[0] |= 0xC0;  // keeps p*q at the full modulus width
    mpz_class candidate = FromBytes(raw);
    mpz_class p;
    mpz_nextprime(p.get_mpz_t(), candidate.get_mpz_t());
    if (mpz_sizeinbase(p.get_mpz_t(), 2) != bits) continue;
    mpz_class g;
    mpz_class pm1 = p - 1;
    mpz_gcd(g.get_mpz_t(), pm1.get_mpz_t(), e.get_mpz_t());
    if (g == 1) return p;
  }
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

mpz_class Invert(const mpz_class& a, const mpz_class& mod) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw std::domain_error("not invertible");
  }
  return out;
}

}  // namespace

std::size_t RsaPublicKey::byte_size() const {
  return (mpz_sizeinbase(n.get_mpz_t(), 2) + 7) / 8;
}

Json RsaPublicKey::ToJson() const {
  return {{"n", EncodeInt(n, byte_size())}, {"e", e.get_ui()}};
}

absl::StatusOr<RsaPublicKey> RsaPublicKey::FromJson(const Json& json) {
  RsaPublicKey key;
  try {
    AUTHSIM_ASSIGN_OR_RETURN(key.n, DecodeInt(json.at("n").get<std::string>()));
    key.e = json.at("e").get<unsigned long>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  if (key.n < 3 || key.e < 3) {
    return MakeError(ErrorCode::kInvalidArgument, "degenerate RSA key");
  }
  return key;
}

std::string EncodeInt(const mpz_class& value, std::size_t width) {
  return crypto::Base64Encode(ToBytes(value, width));
}

absl::StatusOr<mpz_class> DecodeInt(std::string_view base64) {
  std::optional<crypto::Bytes> raw = crypto::Base64Decode(base64);
  if (!raw) return MakeError(ErrorCode::kInvalidArgument, "bad base64 integer");
  return FromBytes(*raw);
}

RsaPrivateKey GenerateRsaKey(std::size_t bits, crypto::Drbg& rng) {
  RsaPrivateKey k;
  k.pub.e = 65537;
  for (;;) {
    k.p = RandomPrime(bits / 2, k.pub.e, rng);
    k.q = RandomPrime(bits - bits / 2, k.pub.e, rng);
    if (k.p == k.q) continue;
    if (k.p < k.q) std::swap(k.p, k.q);
    k.pub.n = k.p * k.q;
    if (mpz_sizeinbase(k.pub.n.get_mpz_t(), 2) == bits) break;
  }
  mpz_class phi = (k.p - 1) * (k.q - 1);
  k.d = Invert(k.pub.e, phi);
  k.dp = k.d % (k.p - 1);
  k.dq = k.d % (k.q - 1);
  k.qinv = Invert(k.q, k.p);
  return k;
}

mpz_class FullDomainHash(std::span<const std::uint8_t> message,
                         const RsaPublicKey& key) {
  const std::size_t width = key.byte_size();
  crypto::Bytes seed(message.begin(), message.end());
  const std::string label = "authsim.fdh.v1";
  seed.insert(seed.end(), label.begin(), label.end());
  crypto::Bytes expanded;
  for (std::uint32_t counter = 0; expanded.size() < width; ++counter) {
    crypto::Bytes block = seed;
    for (int shift = 24; shift >= 0; shift -= 8) {
      block.push_back(static_cast<std::uint8_t>(counter >> shift));
    }
    auto digest = crypto::Sha256(block);
    expanded.insert(expanded.end(), digest.begin(), digest.end());
  }
  expanded.resize(width);
  return FromBytes(expanded) % key.n;
}

Blinded Blind(const RsaPublicKey& key, std::span<const std::uint8_t> message,
              crypto::Drbg& rng) {
  Blinded out;
  for (;;) {
    out.r = RandomBelow(key.n, rng);
    if (out.r < 2) continue;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), out.r.get_mpz_t(), key.n.get_mpz_t());
    if (g == 1) break;
  }
  out.blinded = Reblind(key, message, out.r);
  return out;
}

mpz_class Reblind(const RsaPublicKey& key, std::span<const std::uint8_t> message,
                  const mpz_class& r) {
  mpz_class h = FullDomainHash(message, key);
  mpz_class out = h * PowMod(r, key.e, key.n);
  return out % key.n;
}

mpz_class SignBlinded(const RsaPrivateKey& key, const mpz_class& blinded) {
  mpz_class c = blinded % key.pub.n;
  mpz_class m1 = PowMod(c, key.dp, key.p);
  mpz_class m2 = PowMod(c, key.dq, key.q);
  mpz_class h = (key.qinv * (m1 - m2)) % key.p;
  if (h < 0) h += key.p;
  mpz_class s = m2 + h * key.q;
  if (PowMod(s, key.pub.e, key.pub.n) != c) {
    throw std::runtime_error("RSA-CRT fault check failed");
  }
  return s;
}

mpz_class Unblind(const RsaPublicKey& key, const mpz_class& blind_sig,
                  const mpz_class& r) {
  mpz_class s = blind_sig * Invert(r, key.n);
  return s % key.n;
}

bool RsaVerify(const RsaPublicKey& key, std::span<const std::uint8_t> message,
               const mpz_class& signature) {
  if (signature <= 0 || signature >= key.n) return false;
  return PowMod(signature, key.e, key.n) == FullDomainHash(message, key);
}

}  // namespace authsim::pabac

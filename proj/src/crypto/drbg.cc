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

#include "authsim/crypto/drbg.h"

#include <sodium.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "authsim/crypto/sodium_init.h"

namespace authsim::crypto {
namespace {

void DeriveKey(std::span<const std::uint8_t> parent, std::string_view label,
               std::uint64_t counter, std::uint8_t* out) {
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, Drbg::kSeedSize);
  crypto_generichash_update(&state, parent.data(), parent.size());
  crypto_generichash_update(
      &state, reinterpret_cast<const unsigned char*>(label.data()),
      label.size());
  std::uint8_t ctr[8];
  for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter >> (8 * i));
  crypto_generichash_update(&state, ctr, sizeof(ctr));
  crypto_generichash_final(&state, out, Drbg::kSeedSize);
}

}  // namespace

Drbg::Drbg(std::uint64_t seed) {
  EnsureSodium();
  std::uint8_t raw[8];
  for (int i = 0; i < 8; ++i) raw[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  DeriveKey(raw, "authsim.drbg.root", 0, key_.data());
}

Drbg::Drbg(std::span<const std::uint8_t, kSeedSize> seed) {
  EnsureSodium();
  std::memcpy(key_.data(), seed.data(), kSeedSize);
}

Drbg Drbg::Fork(std::string_view label) const {
  std::array<std::uint8_t, kSeedSize> child{};
  DeriveKey(key_, label, 0xf0f0f0f0ULL, child.data());
  return Drbg(std::span<const std::uint8_t, kSeedSize>(child));
}

void Drbg::Refill() {
  std::uint8_t block_seed[randombytes_SEEDBYTES];
  DeriveKey(key_, "authsim.drbg.block", block_counter_++, block_seed);
  randombytes_buf_deterministic(buffer_.data(), buffer_.size(), block_seed);
  sodium_memzero(block_seed, sizeof(block_seed));
  buffer_pos_ = 0;
}

void Drbg::Fill(std::span<std::uint8_t> out) {
  std::size_t written = 0;
  while (written < out.size()) {
    if (buffer_pos_ == buffer_.size()) Refill();
    std::size_t take =
        std::min(out.size() - written, buffer_.size() - buffer_pos_);
    std::memcpy(out.data() + written, buffer_.data() + buffer_pos_, take);
    buffer_pos_ += take;
    written += take;
  }
}

Bytes Drbg::RandomBytes(std::size_t n) {
  Bytes out(n);
  Fill(out);
  return out;
}

std::string Drbg::RandomHex(std::size_t n_bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  Bytes raw = RandomBytes(n_bytes);
  std::string out;
  out.reserve(2 * n_bytes);
  for (std::uint8_t b : raw) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::uint64_t Drbg::NextU64() {
  std::uint8_t raw[8];
  Fill(raw);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(raw[i]) << (8 * i);
  return v;
}

std::uint64_t Drbg::UniformInt(std::uint64_t bound) {
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t v;
  do {
    v = NextU64();
  } while (v >= limit);
  return v % bound;
}

double Drbg::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Drbg::Normal(double mean, double stddev) {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return mean + stddev * spare_normal_;
  }
  double u1;
  do {
    u1 = Uniform01();
  } while (u1 <= 0.0);
  const double u2 = Uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return mean + stddev * radius * std::cos(angle);
}

}  // namespace authsim::crypto

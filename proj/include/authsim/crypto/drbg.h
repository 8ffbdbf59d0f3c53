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

#ifndef AUTHSIM_CRYPTO_DRBG_H_
#define AUTHSIM_CRYPTO_DRBG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace authsim::crypto {

using Bytes = std::vector<std::uint8_t>;

// Seeded deterministic random bit generator. All randomness in a simulation
// (keys, nonces, salts, behavioral samples) flows from one of these so that a
// scenario seed fixes the whole trace. Not thread-safe; give each actor its own
// stream via Fork().
class Drbg {
 public:
  static constexpr std::size_t kSeedSize = 32;

  explicit Drbg(std::uint64_t seed);
  explicit Drbg(std::span<const std::uint8_t, kSeedSize> seed);

  // Independent child stream keyed by (this stream's key, label). Forking does
  // not advance the parent.
  Drbg Fork(std::string_view label) const;

  void Fill(std::span<std::uint8_t> out);
  Bytes RandomBytes(std::size_t n);
  std::string RandomHex(std::size_t n_bytes);

  std::uint64_t NextU64();
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t UniformInt(std::uint64_t bound);
  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform01();
  // Box-Muller; portable across standard libraries unlike
  // std::normal_distribution.
  double Normal(double mean, double stddev);

 private:
  void Refill();

  std::array<std::uint8_t, kSeedSize> key_{};
  std::uint64_t block_counter_ = 0;
  std::array<std::uint8_t, 256> buffer_{};
  std::size_t buffer_pos_ = 256;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace authsim::crypto

#endif  // AUTHSIM_CRYPTO_DRBG_H_

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

#include "authsim/crypto/byte_scan.h"

#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "authsim/crypto/primitives.h"

namespace authsim::crypto {
namespace {

std::string EncodeVariant(std::span<const std::uint8_t> data, int variant) {
  const std::size_t size = sodium_base64_ENCODED_LEN(data.size(), variant);
  std::string out(size, '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
  out.resize(size - 1);
  return out;
}

}  // namespace

bool ContainsEncoded(std::string_view haystack,
                     std::span<const std::uint8_t> secret) {
  if (secret.empty()) return false;
  std::string_view raw(reinterpret_cast<const char*>(secret.data()),
                       secret.size());
  if (haystack.find(raw) != std::string_view::npos) return true;

  std::string hex = HexEncode(secret);
  if (haystack.find(hex) != std::string_view::npos) return true;
  std::string upper = hex;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (haystack.find(upper) != std::string_view::npos) return true;

  for (int variant : {sodium_base64_VARIANT_ORIGINAL_NO_PADDING,
                      sodium_base64_VARIANT_URLSAFE_NO_PADDING}) {
    for (std::size_t offset = 0; offset < 3; ++offset) {
      std::vector<std::uint8_t> shifted(offset, 0);
      shifted.insert(shifted.end(), secret.begin(), secret.end());
      std::string enc = EncodeVariant(shifted, variant);
      // Keep only characters whose six bits come entirely from the secret.
      const std::size_t first = (8 * offset + 5) / 6;
      const std::size_t last_bit = 8 * (offset + secret.size());
      const std::size_t end = last_bit / 6;
      if (end <= first) continue;
      std::string_view core(enc.data() + first, end - first);
      if (haystack.find(core) != std::string_view::npos) return true;
    }
  }
  return false;
}

}  // namespace authsim::crypto

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

#ifndef AUTHSIM_CRYPTO_BYTE_SCAN_H_
#define AUTHSIM_CRYPTO_BYTE_SCAN_H_

#include <cstdint>
#include <span>
#include <string_view>

namespace authsim::crypto {

// Searches `haystack` for `secret` in every encoding the simulation ever uses
// on the wire: raw bytes, lower/upper hex, and standard and URL-safe base64 at
// all three byte alignments (so a secret embedded mid-blob is still found).
bool ContainsEncoded(std::string_view haystack,
                     std::span<const std::uint8_t> secret);

}  // namespace authsim::crypto

#endif  // AUTHSIM_CRYPTO_BYTE_SCAN_H_

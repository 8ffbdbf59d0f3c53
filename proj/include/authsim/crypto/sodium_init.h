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

#ifndef AUTHSIM_CRYPTO_SODIUM_INIT_H_
#define AUTHSIM_CRYPTO_SODIUM_INIT_H_

namespace authsim::crypto {

// Initializes libsodium once per process. Safe to call from any thread.
void EnsureSodium();

}  // namespace authsim::crypto

#endif  // AUTHSIM_CRYPTO_SODIUM_INIT_H_

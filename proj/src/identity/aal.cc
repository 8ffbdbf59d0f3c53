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

#include "authsim/identity/aal.h"

#include <algorithm>

namespace authsim::identity {

Aal AalForFactors(std::span<const AuthFactor> factors) {
  auto has = [&](FactorKind kind) {
    return std::any_of(factors.begin(), factors.end(),
                       [kind](const AuthFactor& f) { return f.kind() == kind; });
  };

  if (has(FactorKind::kFidoTee)) {
    const bool second_factor = std::any_of(
        factors.begin(), factors.end(), [](const AuthFactor& f) {
          return f.kind() != FactorKind::kFidoTee &&
                 f.kind() != FactorKind::kBehavioral;
        });
    if (second_factor) return Aal::kAal3;
  }
  if (has(FactorKind::kFidoSoftware) || has(FactorKind::kFidoTee)) {
    return Aal::kAal2;
  }
  if (has(FactorKind::kBackupPassword) || has(FactorKind::kDocumentMatch)) {
    return Aal::kAal1;
  }
  return Aal::kNone;
}

}  // namespace authsim::identity

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

#ifndef AUTHSIM_IDENTITY_AAL_H_
#define AUTHSIM_IDENTITY_AAL_H_

#include <compare>
#include <optional>
#include <span>
#include <string_view>

namespace authsim::identity {

// Authenticator Assurance Level, totally ordered.
enum class Aal { kNone = 0, kAal1 = 1, kAal2 = 2, kAal3 = 3 };

inline auto operator<=>(Aal a, Aal b) {
  return static_cast<int>(a) <=> static_cast<int>(b);
}

std::string_view AalName(Aal aal);
std::optional<Aal> ParseAal(std::string_view name);

enum class FactorKind {
  kBackupPassword,
  kBehavioral,
  kFidoSoftware,
  kFidoTee,
  kMobileConnectSms,
  kDocumentMatch,
};

std::string_view FactorKindName(FactorKind kind);
std::optional<FactorKind> ParseFactorKind(std::string_view name);

class AuthFactor {
 public:
  // FidoTee is always hardware backed regardless of `hardware_backed`.
  explicit AuthFactor(FactorKind kind, bool hardware_backed = false)
      : kind_(kind),
        hardware_backed_(kind == FactorKind::kFidoTee || hardware_backed) {}

  FactorKind kind() const { return kind_; }
  bool hardware_backed() const { return hardware_backed_; }

  friend bool operator==(const AuthFactor&, const AuthFactor&) = default;

 private:
  FactorKind kind_;
  bool hardware_backed_;
};

// Highest level satisfied by the factor set:
//   AAL3: FidoTee plus a second, distinct non-behavioral factor
//   AAL2: any FIDO authenticator
//   AAL1: backup password or document match
// Behavioral evidence never raises the level on its own or as a second factor.
Aal AalForFactors(std::span<const AuthFactor> factors);

}  // namespace authsim::identity

#endif  // AUTHSIM_IDENTITY_AAL_H_

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

#include "authsim/identity/principal.h"

#include <array>
#include <utility>

#include "authsim/identity/aal.h"

namespace authsim::identity {
namespace {

constexpr std::array<std::pair<Role, std::string_view>, 6> kRoles = {{
    {Role::kUser, "User"},
    {Role::kSp, "SP"},
    {Role::kIdp, "IdP"},
    {Role::kIdc, "IDC"},
    {Role::kBaa, "BAA"},
    {Role::kMno, "MNO"},
}};

constexpr std::array<std::pair<Aal, std::string_view>, 4> kAals = {{
    {Aal::kNone, "None"},
    {Aal::kAal1, "AAL1"},
    {Aal::kAal2, "AAL2"},
    {Aal::kAal3, "AAL3"},
}};

constexpr std::array<std::pair<FactorKind, std::string_view>, 6> kFactors = {{
    {FactorKind::kBackupPassword, "BackupPassword"},
    {FactorKind::kBehavioral, "Behavioral"},
    {FactorKind::kFidoSoftware, "FidoSoftware"},
    {FactorKind::kFidoTee, "FidoTee"},
    {FactorKind::kMobileConnectSms, "MobileConnectSms"},
    {FactorKind::kDocumentMatch, "DocumentMatch"},
}};

template <typename E, std::size_t N>
std::string_view NameOf(const std::array<std::pair<E, std::string_view>, N>& t,
                        E value) {
  for (const auto& [v, name] : t) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> Parse(const std::array<std::pair<E, std::string_view>, N>& t,
                       std::string_view name) {
  for (const auto& [v, n] : t) {
    if (n == name) return v;
  }
  return std::nullopt;
}

}  // namespace

std::string_view RoleName(Role role) { return NameOf(kRoles, role); }
std::optional<Role> ParseRole(std::string_view name) {
  return Parse(kRoles, name);
}

std::string_view AalName(Aal aal) { return NameOf(kAals, aal); }
std::optional<Aal> ParseAal(std::string_view name) { return Parse(kAals, name); }

std::string_view FactorKindName(FactorKind kind) {
  return NameOf(kFactors, kind);
}
std::optional<FactorKind> ParseFactorKind(std::string_view name) {
  return Parse(kFactors, name);
}

}  // namespace authsim::identity

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

#ifndef AUTHSIM_IDENTITY_PRINCIPAL_H_
#define AUTHSIM_IDENTITY_PRINCIPAL_H_

#include <optional>
#include <string>
#include <string_view>

#include "authsim/common/ids.h"

namespace authsim::identity {

enum class Role { kUser, kSp, kIdp, kIdc, kBaa, kMno };

std::string_view RoleName(Role role);
std::optional<Role> ParseRole(std::string_view name);

// A participant in the federation. The role is fixed at construction.
class Principal {
 public:
  Principal(PrincipalId id, Role role, std::string display_name = "")
      : id_(std::move(id)), role_(role), display_name_(std::move(display_name)) {}

  const PrincipalId& id() const { return id_; }
  Role role() const { return role_; }
  const std::string& display_name() const { return display_name_; }

 private:
  PrincipalId id_;
  Role role_;
  std::string display_name_;
};

}  // namespace authsim::identity

#endif  // AUTHSIM_IDENTITY_PRINCIPAL_H_

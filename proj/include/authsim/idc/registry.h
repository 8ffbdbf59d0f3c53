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

#ifndef AUTHSIM_IDC_REGISTRY_H_
#define AUTHSIM_IDC_REGISTRY_H_

#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/identity/aal.h"

namespace authsim::idc {

enum class EntityKind { kSp, kIdp, kBaa, kMno };
std::string_view EntityKindName(EntityKind kind);
std::optional<EntityKind> ParseEntityKind(std::string_view name);

struct EntityRecord {
  PrincipalId id;
  EntityKind kind = EntityKind::kSp;
  // Highest AAL the entity can assert. kNone for SPs.
  identity::Aal max_aal = identity::Aal::kNone;
  // Position in registration order; breaks discovery ties.
  std::size_t order = 0;

  friend bool operator==(const EntityRecord&, const EntityRecord&) = default;
};

// Admin-maintained entity catalog plus the entities each user has linked.
// Discovery answers only from these entries.
class EntityRegistry {
 public:
  void AddAdmin(const PrincipalId& admin) { admins_.insert(admin); }

  // Unauthorized for non-admins; AlreadyExists for a repeated id.
  absl::Status RegisterEntity(const PrincipalId& admin, const PrincipalId& entity,
                              EntityKind kind, identity::Aal max_aal);
  // NotFound for entities outside the catalog.
  absl::Status LinkUser(const PrincipalId& user, const PrincipalId& entity);

  const EntityRecord* Find(const PrincipalId& entity) const;
  std::vector<EntityRecord> UserEntities(const PrincipalId& user) const;
  std::vector<EntityRecord> UserEntities(const PrincipalId& user,
                                         EntityKind kind) const;

  // Best BAA for the user by the rule below, if any.
  std::optional<PrincipalId> BestBaa(const PrincipalId& user) const;
  // The user's BAA with the highest max AAL, earliest registration on a tie.
  // UnknownClient when `sp` is not a registered SP; NoBaaRegistered when the
  // user linked no BAA.
  absl::StatusOr<PrincipalId> DiscoverBaa(const PrincipalId& sp,
                                          const PrincipalId& user) const;

  Json ToJson() const;
  static absl::StatusOr<EntityRegistry> FromJson(const Json& json);
  friend bool operator==(const EntityRegistry&, const EntityRegistry&) = default;

 private:
  std::set<PrincipalId> admins_;
  std::map<PrincipalId, EntityRecord> entities_;
  std::map<PrincipalId, std::set<PrincipalId>> links_;
};

}  // namespace authsim::idc

#endif  // AUTHSIM_IDC_REGISTRY_H_

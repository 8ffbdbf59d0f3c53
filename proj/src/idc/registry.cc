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

#include "authsim/idc/registry.h"

#include <algorithm>

#include "authsim/common/status.h"

namespace authsim::idc {

namespace {
constexpr std::pair<EntityKind, std::string_view> kKindNames[] = {
    {EntityKind::kSp, "sp"},
    {EntityKind::kIdp, "idp"},
    {EntityKind::kBaa, "baa"},
    {EntityKind::kMno, "mno"},
};
}  // namespace

std::string_view EntityKindName(EntityKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<EntityKind> ParseEntityKind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

absl::Status EntityRegistry::RegisterEntity(const PrincipalId& admin,
                                            const PrincipalId& entity,
                                            EntityKind kind, identity::Aal max_aal) {
  if (!admins_.contains(admin)) {
    return MakeError(ErrorCode::kUnauthorized, "not a registry admin");
  }
  if (entities_.contains(entity)) {
    return MakeError(ErrorCode::kAlreadyExists, "entity already registered");
  }
  entities_[entity] = EntityRecord{entity, kind, max_aal, entities_.size()};
  return absl::OkStatus();
}

absl::Status EntityRegistry::LinkUser(const PrincipalId& user,
                                      const PrincipalId& entity) {
  if (!entities_.contains(entity)) {
    return MakeError(ErrorCode::kNotFound, "entity not registered");
  }
  links_[user].insert(entity);
  return absl::OkStatus();
}

const EntityRecord* EntityRegistry::Find(const PrincipalId& entity) const {
  auto it = entities_.find(entity);
  return it == entities_.end() ? nullptr : &it->second;
}

std::vector<EntityRecord> EntityRegistry::UserEntities(const PrincipalId& user) const {
  std::vector<EntityRecord> out;
  auto it = links_.find(user);
  if (it == links_.end()) return out;
  for (const auto& id : it->second) out.push_back(entities_.at(id));
  std::sort(out.begin(), out.end(),
            [](const EntityRecord& a, const EntityRecord& b) { return a.order < b.order; });
  return out;
}

std::vector<EntityRecord> EntityRegistry::UserEntities(const PrincipalId& user,
                                                       EntityKind kind) const {
  std::vector<EntityRecord> out = UserEntities(user);
  std::erase_if(out, [kind](const EntityRecord& r) { return r.kind != kind; });
  return out;
}

std::optional<PrincipalId> EntityRegistry::BestBaa(const PrincipalId& user) const {
  std::optional<EntityRecord> best;
  for (const EntityRecord& r : UserEntities(user, EntityKind::kBaa)) {
    // UserEntities is in registration order, so strict > keeps the earliest.
    if (!best || r.max_aal > best->max_aal) best = r;
  }
  if (!best) return std::nullopt;
  return best->id;
}

absl::StatusOr<PrincipalId> EntityRegistry::DiscoverBaa(const PrincipalId& sp,
                                                        const PrincipalId& user) const {
  const EntityRecord* requester = Find(sp);
  if (requester == nullptr || requester->kind != EntityKind::kSp) {
    return MakeError(ErrorCode::kUnknownClient, "discovery from an unregistered SP");
  }
  auto best = BestBaa(user);
  if (!best) return MakeError(ErrorCode::kNoBaaRegistered, "user has no registered BAA");
  return *best;
}

Json EntityRegistry::ToJson() const {
  Json admins = Json::array();
  for (const auto& a : admins_) admins.push_back(a.value());
  Json entities = Json::array();
  for (const auto& [id, r] : entities_) {
    entities.push_back({{"id", id.value()},
                        {"kind", EntityKindName(r.kind)},
                        {"max_aal", AalName(r.max_aal)},
                        {"order", r.order}});
  }
  Json links = Json::object();
  for (const auto& [user, set] : links_) {
    Json ids = Json::array();
    for (const auto& e : set) ids.push_back(e.value());
    links[user.value()] = ids;
  }
  return {{"admins", admins}, {"entities", entities}, {"links", links}};
}

absl::StatusOr<EntityRegistry> EntityRegistry::FromJson(const Json& json) {
  try {
    EntityRegistry out;
    for (const Json& a : json.at("admins")) out.admins_.insert(PrincipalId(a.get<std::string>()));
    for (const Json& e : json.at("entities")) {
      auto kind = ParseEntityKind(e.at("kind").get<std::string>());
      auto aal = identity::ParseAal(e.at("max_aal").get<std::string>());
      if (!kind || !aal) return MakeError(ErrorCode::kSchemaError, "bad entity record");
      PrincipalId id(e.at("id").get<std::string>());
      out.entities_[id] = EntityRecord{id, *kind, *aal, e.at("order").get<std::size_t>()};
    }
    for (const auto& [user, ids] : json.at("links").items()) {
      for (const Json& e : ids) out.links_[PrincipalId(user)].insert(PrincipalId(e.get<std::string>()));
    }
    return out;
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kSchemaError, e.what());
  }
}

}  // namespace authsim::idc

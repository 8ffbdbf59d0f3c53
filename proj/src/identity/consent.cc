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

#include "authsim/identity/consent.h"

#include <algorithm>

#include "authsim/common/status.h"

namespace authsim::identity {

void ConsentPolicy::SetGrant(ConsentGrant grant) {
  Revoke(grant.attribute, grant.audience);
  grants_.push_back(std::move(grant));
}

void ConsentPolicy::Revoke(const std::string& attribute,
                           const PrincipalId& audience) {
  std::erase_if(grants_, [&](const ConsentGrant& g) {
    return g.attribute == attribute && g.audience == audience;
  });
}

Json ConsentPolicy::ToJson() const {
  Json grants = Json::array();
  for (const ConsentGrant& g : grants_) {
    Json item = {{"attribute", g.attribute},
                 {"audience", g.audience.value()},
                 {"decision", g.decision == ConsentDecision::kAllow ? "allow"
                                                                    : "deny"}};
    if (g.expires_at) item["expires_at"] = ToMillis(*g.expires_at);
    grants.push_back(std::move(item));
  }
  return {{"owner", owner_.value()}, {"grants", std::move(grants)}};
}

absl::StatusOr<ConsentPolicy> ConsentPolicy::FromJson(const Json& json) {
  if (!json.is_object() || !json.contains("grants") ||
      !json["grants"].is_array()) {
    return MakeError(ErrorCode::kInvalidArgument, "malformed consent policy");
  }
  ConsentPolicy policy(PrincipalId(json.value("owner", "")));
  for (const Json& item : json["grants"]) {
    if (!item.is_object() || !item.contains("attribute") ||
        !item.contains("audience")) {
      return MakeError(ErrorCode::kInvalidArgument, "malformed consent grant");
    }
    ConsentGrant g;
    g.attribute = item["attribute"].get<std::string>();
    g.audience = PrincipalId(item["audience"].get<std::string>());
    const std::string decision = item.value("decision", "deny");
    if (decision != "allow" && decision != "deny") {
      return MakeError(ErrorCode::kInvalidArgument,
                       "consent decision must be allow or deny");
    }
    g.decision =
        decision == "allow" ? ConsentDecision::kAllow : ConsentDecision::kDeny;
    if (item.contains("expires_at") && !item["expires_at"].is_null()) {
      g.expires_at = FromMillis(item["expires_at"].get<std::int64_t>());
    }
    policy.SetGrant(std::move(g));
  }
  return policy;
}

absl::StatusOr<ConsentDecision> EvaluateConsent(const ConsentPolicy& policy,
                                                const AttributeSchema& schema,
                                                const std::string& attribute,
                                                const PrincipalId& audience,
                                                SimTime now) {
  if (!schema.Contains(attribute)) {
    return MakeError(ErrorCode::kSchemaError,
                     "consent asked for unknown attribute " + attribute);
  }
  for (const ConsentGrant& g : policy.grants()) {
    if (g.attribute != attribute || g.audience != audience) continue;
    if (g.expires_at && now >= *g.expires_at) return ConsentDecision::kDeny;
    return g.decision;
  }
  return ConsentDecision::kDeny;
}

}  // namespace authsim::identity

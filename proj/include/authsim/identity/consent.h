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

#ifndef AUTHSIM_IDENTITY_CONSENT_H_
#define AUTHSIM_IDENTITY_CONSENT_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/identity/attributes.h"

namespace authsim::identity {

enum class ConsentDecision { kDeny, kAllow };

struct ConsentGrant {
  std::string attribute;
  PrincipalId audience;
  ConsentDecision decision = ConsentDecision::kDeny;
  // nullopt means the grant never expires.
  std::optional<SimTime> expires_at;

  friend bool operator==(const ConsentGrant&, const ConsentGrant&) = default;
};

// A user's disclosure rules. Setting a grant replaces any previous grant for
// the same (attribute, audience) pair, so at most one is ever active.
class ConsentPolicy {
 public:
  ConsentPolicy() = default;
  explicit ConsentPolicy(PrincipalId owner) : owner_(std::move(owner)) {}

  const PrincipalId& owner() const { return owner_; }
  const std::vector<ConsentGrant>& grants() const { return grants_; }

  void SetGrant(ConsentGrant grant);
  // Removes the grant for the pair, if any (which then evaluates as deny).
  void Revoke(const std::string& attribute, const PrincipalId& audience);

  Json ToJson() const;
  static absl::StatusOr<ConsentPolicy> FromJson(const Json& json);

  friend bool operator==(const ConsentPolicy&, const ConsentPolicy&) = default;

 private:
  PrincipalId owner_;
  std::vector<ConsentGrant> grants_;
};

// Allow iff an unexpired allow grant exists for (attribute, audience).
// SchemaError if `attribute` is not in the schema.
absl::StatusOr<ConsentDecision> EvaluateConsent(const ConsentPolicy& policy,
                                                const AttributeSchema& schema,
                                                const std::string& attribute,
                                                const PrincipalId& audience,
                                                SimTime now);

}  // namespace authsim::identity

#endif  // AUTHSIM_IDENTITY_CONSENT_H_

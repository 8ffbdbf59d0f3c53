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

#ifndef AUTHSIM_RISK_LEDGER_H_
#define AUTHSIM_RISK_LEDGER_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/risk/population.h"

namespace authsim::risk {

enum class DisclosureProtocol { kFederated, kPabac };

std::string_view ProtocolName(DisclosureProtocol protocol);

struct DisclosureEntry {
  PrincipalId user;
  PrincipalId sp;
  std::string attribute;
  std::string value;
  std::string session_id;
  DisclosureProtocol protocol = DisclosureProtocol::kFederated;
  SimTime at;

  friend bool operator==(const DisclosureEntry&,
                         const DisclosureEntry&) = default;
};

Json EntryToJson(const DisclosureEntry& entry);
absl::StatusOr<DisclosureEntry> EntryFromJson(const Json& json);

// Append-only history of attribute releases to SPs.
class DisclosureLedger {
 public:
  void Record(DisclosureEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<DisclosureEntry>& entries() const { return entries_; }

  // What the SP could accumulate by linking the user's federated sessions.
  // Credential-based entries are never joined. Later disclosures of the same
  // attribute replace earlier ones.
  AttributeAssignment LinkableRevealed(const PrincipalId& user,
                                       const PrincipalId& sp) const;
  // SPs that received anything from `user`, with the attribute names each saw.
  std::map<PrincipalId, std::vector<std::string>> DisclosuresByAudience(
      const PrincipalId& user) const;

  Json ToJson() const;
  static absl::StatusOr<DisclosureLedger> FromJson(const Json& json);

  friend bool operator==(const DisclosureLedger&,
                         const DisclosureLedger&) = default;

 private:
  std::vector<DisclosureEntry> entries_;
};

}  // namespace authsim::risk

#endif  // AUTHSIM_RISK_LEDGER_H_

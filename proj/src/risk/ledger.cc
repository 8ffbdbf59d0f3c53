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

#include "authsim/risk/ledger.h"

#include <algorithm>

#include "authsim/common/status.h"

namespace authsim::risk {

std::string_view ProtocolName(DisclosureProtocol protocol) {
  return protocol == DisclosureProtocol::kPabac ? "Pabac" : "Federated";
}

Json EntryToJson(const DisclosureEntry& e) {
  return {{"user", e.user.value()},
          {"sp", e.sp.value()},
          {"attribute", e.attribute},
          {"value", e.value},
          {"session_id", e.session_id},
          {"protocol", ProtocolName(e.protocol)},
          {"at", ToMillis(e.at)}};
}

absl::StatusOr<DisclosureEntry> EntryFromJson(const Json& json) {
  DisclosureEntry e;
  try {
    e.user = PrincipalId(json.at("user").get<std::string>());
    e.sp = PrincipalId(json.at("sp").get<std::string>());
    e.attribute = json.at("attribute").get<std::string>();
    e.value = json.at("value").get<std::string>();
    e.session_id = json.at("session_id").get<std::string>();
    const std::string protocol = json.at("protocol").get<std::string>();
    if (protocol == "Pabac") {
      e.protocol = DisclosureProtocol::kPabac;
    } else if (protocol == "Federated") {
      e.protocol = DisclosureProtocol::kFederated;
    } else {
      return MakeError(ErrorCode::kInvalidArgument, "unknown protocol " + protocol);
    }
    e.at = FromMillis(json.at("at").get<std::int64_t>());
  } catch (const Json::exception& ex) {
    return MakeError(ErrorCode::kInvalidArgument, ex.what());
  }
  return e;
}

AttributeAssignment DisclosureLedger::LinkableRevealed(const PrincipalId& user,
                                                       const PrincipalId& sp) const {
  AttributeAssignment out;
  for (const DisclosureEntry& e : entries_) {
    if (e.protocol != DisclosureProtocol::kFederated) continue;
    if (e.user != user || e.sp != sp) continue;
    out[e.attribute] = e.value;
  }
  return out;
}

std::map<PrincipalId, std::vector<std::string>> DisclosureLedger::DisclosuresByAudience(
    const PrincipalId& user) const {
  std::map<PrincipalId, std::vector<std::string>> out;
  for (const DisclosureEntry& e : entries_) {
    if (e.user != user) continue;
    auto& names = out[e.sp];
    if (std::find(names.begin(), names.end(), e.attribute) == names.end()) {
      names.push_back(e.attribute);
    }
  }
  for (auto& [sp, names] : out) std::sort(names.begin(), names.end());
  return out;
}

Json DisclosureLedger::ToJson() const {
  Json out = Json::array();
  for (const DisclosureEntry& e : entries_) out.push_back(EntryToJson(e));
  return out;
}

absl::StatusOr<DisclosureLedger> DisclosureLedger::FromJson(const Json& json) {
  if (!json.is_array()) {
    return MakeError(ErrorCode::kInvalidArgument, "ledger must be an array");
  }
  DisclosureLedger ledger;
  for (const Json& item : json) {
    AUTHSIM_ASSIGN_OR_RETURN(DisclosureEntry e, EntryFromJson(item));
    ledger.Record(std::move(e));
  }
  return ledger;
}

}  // namespace authsim::risk

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

#include "authsim/sim/envelope.h"

#include <array>

#include "authsim/common/status.h"

namespace authsim::sim {

Json EnvelopeToJson(const Envelope& e) {
  Json out = {{"msg_id", e.msg_id},
              {"from", e.from.value()},
              {"to", e.to.value()},
              {"type", e.type},
              {"payload", e.payload},
              {"sent_at", ToMillis(e.sent_at)},
              {"secure", e.secure}};
  if (e.injected_by) out["injected_by"] = e.injected_by->value();
  if (e.replay_of) out["replay_of"] = *e.replay_of;
  return out;
}

absl::StatusOr<Envelope> EnvelopeFromJson(const Json& json) {
  try {
    Envelope e;
    e.msg_id = json.at("msg_id").get<std::uint64_t>();
    e.from = PrincipalId(json.at("from").get<std::string>());
    e.to = PrincipalId(json.at("to").get<std::string>());
    e.type = json.at("type").get<std::string>();
    e.payload = json.at("payload");
    e.sent_at = FromMillis(json.at("sent_at").get<std::int64_t>());
    e.secure = json.at("secure").get<bool>();
    if (json.contains("injected_by")) {
      e.injected_by = PrincipalId(json.at("injected_by").get<std::string>());
    }
    if (json.contains("replay_of")) e.replay_of = json.at("replay_of").get<std::uint64_t>();
    return e;
  } catch (const Json::exception& ex) {
    return MakeError(ErrorCode::kSchemaError, ex.what());
  }
}

SealedEnvelope::SealedEnvelope(Envelope inner)
    : inner_(std::move(inner)), size_(CanonicalJson(EnvelopeToJson(inner_)).size()) {}

int LoginStep(std::string_view type) {
  static constexpr std::array<std::string_view, 6> kSteps = {
      msg::kLoginStart, msg::kAuthnRequest, msg::kAuthnChallenge,
      msg::kAuthnResponse, msg::kAuthnCode, msg::kLoginGranted};
  for (std::size_t i = 0; i < kSteps.size(); ++i) {
    if (kSteps[i] == type) return static_cast<int>(i) + 1;
  }
  return 0;
}

}  // namespace authsim::sim

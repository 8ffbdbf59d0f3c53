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

#include "authsim/federation/sp.h"

namespace authsim::federation {

ServiceProvider::ServiceProvider(PrincipalId id, std::string trusted_origin,
                                 crypto::VerifyKey idp_key, crypto::Drbg rng)
    : id_(std::move(id)),
      trusted_origin_(std::move(trusted_origin)),
      idp_key_(idp_key),
      rng_(std::move(rng)) {}

std::string ServiceProvider::BeginLogin(std::vector<std::string> wanted) {
  std::string sid = rng_.RandomHex(12);
  sessions_[sid] = SpSession{.session_id = sid, .wanted = std::move(wanted)};
  return sid;
}

absl::Status ServiceProvider::OnAuthnResponse(const IssuedCode& code,
                                              std::string_view origin_header) {
  if (origin_header != trusted_origin_) {
    return MakeError(ErrorCode::kCsrfRejected, "response origin is not the trusted IdP");
  }
  auto it = sessions_.find(code.redirect_session);
  if (it == sessions_.end() || code.sp != id_) {
    return MakeError(ErrorCode::kCsrfRejected, "response for an unknown session");
  }
  it->second.csrf = code.csrf;
  return absl::OkStatus();
}

absl::StatusOr<TokenValidation> ServiceProvider::OnToken(const std::string& session_id,
                                                         const AccessToken& token,
                                                         SimTime now) {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    return MakeError(ErrorCode::kNotFound, "unknown session");
  }
  if (it->second.granted) {
    return MakeError(ErrorCode::kReplayDetected, "session already granted");
  }
  TokenValidation v = ValidateToken(token, idp_key_, id_, now);
  if (!v.valid) return v;
  SpSession& s = it->second;
  s.subject = v.subject;
  s.scope = v.scope;
  s.aal = v.aal;
  s.granted = true;
  return v;
}

const SpSession* ServiceProvider::Session(const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::string ServiceProvider::StorageBytes() const {
  Json out = Json::array();
  for (const auto& [sid, s] : sessions_) {
    if (!s.granted) continue;
    out.push_back({{"session", sid},
                   {"subject", *s.subject},
                   {"scope", ScopeToJson(s.scope)},
                   {"aal", identity::AalName(s.aal)}});
  }
  return CanonicalJson(out);
}

std::vector<std::string> ServiceProvider::Subjects() const {
  std::vector<std::string> out;
  for (const auto& [_, s] : sessions_) {
    if (s.granted) out.push_back(*s.subject);
  }
  return out;
}

}  // namespace authsim::federation

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

#include "authsim/pabac/credential.h"

#include <algorithm>

#include "authsim/common/status.h"

namespace authsim::pabac {
namespace {

Json OpeningsToJson(const std::map<std::string, AttributeOpening>& openings) {
  Json out = Json::object();
  for (const auto& [name, o] : openings) {
    out[name] = {{"value", identity::ValueToJson(o.value)}, {"salt", o.salt}};
  }
  return out;
}

absl::StatusOr<std::map<std::string, AttributeOpening>> OpeningsFromJson(
    const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorCode::kInvalidArgument, "openings must be an object");
  }
  std::map<std::string, AttributeOpening> out;
  for (const auto& [name, o] : json.items()) {
    AttributeOpening opening;
    AUTHSIM_ASSIGN_OR_RETURN(opening.value, identity::ValueFromJson(o.at("value")));
    opening.salt = o.at("salt").get<std::string>();
    out[name] = std::move(opening);
  }
  return out;
}

}  // namespace

std::string CommitAttribute(const std::string& name,
                            const identity::AttributeValue& value,
                            const std::string& salt) {
  const Json input = {{"ctx", "authsim.commit.v1"},
                      {"name", name},
                      {"value", identity::ValueToJson(value)},
                      {"salt", salt}};
  return crypto::Base64Encode(crypto::Sha256(CanonicalJson(input)));
}

Json BodyToJson(const CredentialBody& body) {
  return {{"serial", body.serial},
          {"holder_key", body.holder_key.ToBase64()},
          {"issuer", body.issuer.value()},
          {"commitments", body.commitments}};
}

absl::StatusOr<CredentialBody> BodyFromJson(const Json& json) {
  CredentialBody body;
  try {
    body.serial = json.at("serial").get<std::string>();
    AUTHSIM_ASSIGN_OR_RETURN(
        body.holder_key,
        crypto::VerifyKey::FromBase64(json.at("holder_key").get<std::string>()));
    body.issuer = PrincipalId(json.at("issuer").get<std::string>());
    body.commitments =
        json.at("commitments").get<std::map<std::string, std::string>>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return body;
}

std::string CredentialMessage(const CredentialBody& body) {
  Json fields = BodyToJson(body);
  fields["ctx"] = "authsim.credential.v1";
  return CanonicalJson(fields);
}

Json CredentialToJson(const AttributeCredential& c) {
  return {{"body", BodyToJson(c.body)},
          {"openings", OpeningsToJson(c.openings)},
          {"signature", c.signature},
          {"holder_seed", crypto::Base64Encode(c.holder_seed)},
          {"state", c.state == ShowState::kFresh ? "Fresh" : "Spent"}};
}

absl::StatusOr<AttributeCredential> CredentialFromJson(const Json& json) {
  AttributeCredential c;
  try {
    AUTHSIM_ASSIGN_OR_RETURN(c.body, BodyFromJson(json.at("body")));
    AUTHSIM_ASSIGN_OR_RETURN(c.openings, OpeningsFromJson(json.at("openings")));
    c.signature = json.at("signature").get<std::string>();
    std::optional<crypto::Bytes> seed =
        crypto::Base64Decode(json.at("holder_seed").get<std::string>());
    if (!seed || seed->size() != c.holder_seed.size()) {
      return MakeError(ErrorCode::kInvalidArgument, "bad holder seed");
    }
    std::copy(seed->begin(), seed->end(), c.holder_seed.begin());
    const std::string state = json.at("state").get<std::string>();
    if (state != "Fresh" && state != "Spent") {
      return MakeError(ErrorCode::kInvalidArgument, "bad show state");
    }
    c.state = state == "Fresh" ? ShowState::kFresh : ShowState::kSpent;
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return c;
}

AttributeCredential MakeCandidate(const PrincipalId& issuer, const Scope& attributes,
                                  crypto::Drbg& rng) {
  AttributeCredential c;
  c.body.serial = crypto::Base64Encode(rng.RandomBytes(32));
  rng.Fill(c.holder_seed);
  c.body.holder_key = crypto::SigningKey::FromSeed(c.holder_seed).verify_key();
  c.body.issuer = issuer;
  for (const auto& [name, value] : attributes) {
    AttributeOpening o{value, crypto::Base64Encode(rng.RandomBytes(32))};
    c.body.commitments[name] = CommitAttribute(name, value, o.salt);
    c.openings[name] = std::move(o);
  }
  return c;
}

std::string PresentationSignedBytes(const Presentation& p) {
  return CanonicalJson({{"ctx", "authsim.presentation.v1"},
                        {"body", BodyToJson(p.body)},
                        {"disclosed", OpeningsToJson(p.disclosed)},
                        {"nonce", p.nonce}});
}

Json PresentationToJson(const Presentation& p) {
  return {{"body", BodyToJson(p.body)},
          {"disclosed", OpeningsToJson(p.disclosed)},
          {"signature", p.signature},
          {"nonce", p.nonce},
          {"holder_signature", p.holder_signature}};
}

absl::StatusOr<Presentation> PresentationFromJson(const Json& json) {
  Presentation p;
  try {
    AUTHSIM_ASSIGN_OR_RETURN(p.body, BodyFromJson(json.at("body")));
    AUTHSIM_ASSIGN_OR_RETURN(p.disclosed, OpeningsFromJson(json.at("disclosed")));
    p.signature = json.at("signature").get<std::string>();
    p.nonce = json.at("nonce").get<std::string>();
    p.holder_signature = json.at("holder_signature").get<std::string>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return p;
}

}  // namespace authsim::pabac

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

#include "authsim/pabac/issuer.h"

#include <algorithm>

#include "authsim/common/status.h"
#include "authsim/pabac/wallet.h"

namespace authsim::pabac {

Json IssuanceRequestToJson(const IssuanceRequest& m) {
  return {{"user", m.user},
          {"attributes", federation::ScopeToJson(m.attributes)},
          {"blinded", m.blinded}};
}

absl::StatusOr<IssuanceRequest> IssuanceRequestFromJson(const Json& json) {
  IssuanceRequest m;
  try {
    m.user = json.at("user").get<std::string>();
    AUTHSIM_ASSIGN_OR_RETURN(m.attributes, federation::ScopeFromJson(json.at("attributes")));
    m.blinded = json.at("blinded").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return m;
}

Json IssuanceChallengeToJson(const IssuanceChallenge& m) {
  return {{"session_id", m.session_id}, {"keep", m.keep}};
}

absl::StatusOr<IssuanceChallenge> IssuanceChallengeFromJson(const Json& json) {
  IssuanceChallenge m;
  try {
    m.session_id = json.at("session_id").get<std::string>();
    m.keep = json.at("keep").get<std::size_t>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return m;
}

Json IssuanceOpeningToJson(const IssuanceOpening& m) {
  Json openings = Json::array();
  for (const CandidateOpening& o : m.openings) {
    openings.push_back({{"index", o.index},
                        {"serial", o.serial},
                        {"holder_key", o.holder_key.ToBase64()},
                        {"salts", o.salts},
                        {"r", o.r}});
  }
  return {{"session_id", m.session_id}, {"openings", openings}};
}

absl::StatusOr<IssuanceOpening> IssuanceOpeningFromJson(const Json& json) {
  IssuanceOpening m;
  try {
    m.session_id = json.at("session_id").get<std::string>();
    for (const Json& o : json.at("openings")) {
      CandidateOpening c;
      c.index = o.at("index").get<std::size_t>();
      c.serial = o.at("serial").get<std::string>();
      AUTHSIM_ASSIGN_OR_RETURN(
          c.holder_key, crypto::VerifyKey::FromBase64(o.at("holder_key").get<std::string>()));
      c.salts = o.at("salts").get<std::map<std::string, std::string>>();
      c.r = o.at("r").get<std::string>();
      m.openings.push_back(std::move(c));
    }
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return m;
}

Json IssuanceResponseToJson(const IssuanceResponse& m) {
  return {{"session_id", m.session_id}, {"blind_signature", m.blind_signature}};
}

absl::StatusOr<IssuanceResponse> IssuanceResponseFromJson(const Json& json) {
  IssuanceResponse m;
  try {
    m.session_id = json.at("session_id").get<std::string>();
    m.blind_signature = json.at("blind_signature").get<std::string>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return m;
}

CredentialIssuer::CredentialIssuer(PrincipalId id, RsaPrivateKey key,
                                   crypto::Drbg rng, VerifiedAttributeLookup lookup)
    : id_(std::move(id)),
      key_(std::move(key)),
      rng_(std::move(rng)),
      lookup_(std::move(lookup)) {}

absl::StatusOr<IssuanceChallenge> CredentialIssuer::Begin(const IssuanceRequest& request) {
  if (request.blinded.size() != kCutAndChoose) {
    return MakeError(ErrorCode::kIssuanceRejected, "wrong number of candidates");
  }
  const std::vector<identity::IdentityAttribute>* held = lookup_(request.user);
  for (const auto& [name, value] : request.attributes) {
    const bool verified =
        held != nullptr &&
        std::any_of(held->begin(), held->end(), [&](const auto& a) {
          return a.name == name && a.value == value;
        });
    if (!verified) {
      return MakeError(ErrorCode::kAttributeNotVerified,
                       "issuer has not verified " + name);
    }
  }
  IssuanceChallenge challenge{rng_.RandomHex(16), rng_.UniformInt(kCutAndChoose)};
  transcripts_.push_back({{"request", IssuanceRequestToJson(request)},
                          {"challenge", IssuanceChallengeToJson(challenge)}});
  sessions_[challenge.session_id] = {request, challenge.keep, transcripts_.size() - 1};
  return challenge;
}

absl::StatusOr<IssuanceResponse> CredentialIssuer::Finish(const IssuanceOpening& opening) {
  auto it = sessions_.find(opening.session_id);
  if (it == sessions_.end()) {
    return MakeError(ErrorCode::kIssuanceRejected, "unknown issuance session");
  }
  Session session = std::move(it->second);
  sessions_.erase(it);
  Json& transcript = transcripts_[session.transcript];
  transcript["opening"] = IssuanceOpeningToJson(opening);

  std::vector<bool> opened(kCutAndChoose, false);
  for (const CandidateOpening& o : opening.openings) {
    if (o.index >= kCutAndChoose || o.index == session.keep || opened[o.index]) {
      return MakeError(ErrorCode::kIssuanceRejected, "bad candidate index");
    }
    opened[o.index] = true;
    CredentialBody body{o.serial, o.holder_key, id_, {}};
    if (o.salts.size() != session.request.attributes.size()) {
      return MakeError(ErrorCode::kIssuanceRejected, "candidate attribute set differs");
    }
    for (const auto& [name, value] : session.request.attributes) {
      auto salt = o.salts.find(name);
      if (salt == o.salts.end()) {
        return MakeError(ErrorCode::kIssuanceRejected, "candidate attribute set differs");
      }
      body.commitments[name] = CommitAttribute(name, value, salt->second);
    }
    AUTHSIM_ASSIGN_OR_RETURN(mpz_class r, DecodeInt(o.r));
    AUTHSIM_ASSIGN_OR_RETURN(mpz_class claimed, DecodeInt(session.request.blinded[o.index]));
    if (Reblind(key_.pub, crypto::AsBytes(CredentialMessage(body)), r) != claimed) {
      return MakeError(ErrorCode::kIssuanceRejected, "opened candidate does not match");
    }
  }
  if (std::count(opened.begin(), opened.end(), true) !=
      static_cast<std::ptrdiff_t>(kCutAndChoose - 1)) {
    return MakeError(ErrorCode::kIssuanceRejected, "not every candidate was opened");
  }
  AUTHSIM_ASSIGN_OR_RETURN(mpz_class kept, DecodeInt(session.request.blinded[session.keep]));
  if (kept <= 0 || kept >= key_.pub.n) {
    return MakeError(ErrorCode::kIssuanceRejected, "blinded value out of range");
  }
  IssuanceResponse response{opening.session_id,
                            EncodeInt(SignBlinded(key_, kept), key_.pub.byte_size())};
  transcript["response"] = IssuanceResponseToJson(response);
  return response;
}

IssuanceClient::IssuanceClient(std::string user, PrincipalId issuer,
                               RsaPublicKey issuer_key, Scope attributes,
                               crypto::Drbg& rng)
    : issuer_key_(std::move(issuer_key)) {
  request_.user = std::move(user);
  request_.attributes = attributes;
  for (std::size_t i = 0; i < kCutAndChoose; ++i) {
    candidates_.push_back(MakeCandidate(issuer, attributes, rng));
    Blinded b = Blind(issuer_key_, crypto::AsBytes(CredentialMessage(candidates_.back().body)),
                      rng);
    blinding_.push_back(b.r);
    request_.blinded.push_back(EncodeInt(b.blinded, issuer_key_.byte_size()));
  }
}

IssuanceOpening IssuanceClient::Answer(const IssuanceChallenge& challenge) {
  keep_ = challenge.keep;
  IssuanceOpening out{challenge.session_id, {}};
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (i == challenge.keep) continue;
    CandidateOpening o;
    o.index = i;
    o.serial = candidates_[i].body.serial;
    o.holder_key = candidates_[i].body.holder_key;
    for (const auto& [name, opening] : candidates_[i].openings) o.salts[name] = opening.salt;
    o.r = EncodeInt(blinding_[i], issuer_key_.byte_size());
    out.openings.push_back(std::move(o));
  }
  return out;
}

absl::StatusOr<AttributeCredential> IssuanceClient::Complete(
    const IssuanceResponse& response) {
  if (!keep_ || *keep_ >= candidates_.size()) {
    return MakeError(ErrorCode::kIssuanceRejected, "no challenge answered");
  }
  AUTHSIM_ASSIGN_OR_RETURN(mpz_class blind_sig, DecodeInt(response.blind_signature));
  AttributeCredential cred = candidates_[*keep_];
  mpz_class sig = Unblind(issuer_key_, blind_sig, blinding_[*keep_]);
  if (!RsaVerify(issuer_key_, crypto::AsBytes(CredentialMessage(cred.body)), sig)) {
    return MakeError(ErrorCode::kIssuanceRejected, "issuer signature does not verify");
  }
  cred.signature = EncodeInt(sig, issuer_key_.byte_size());
  return cred;
}

absl::Status IssueCredentials(CredentialIssuer& issuer, Wallet& wallet,
                              const std::string& user, const Scope& attributes,
                              std::size_t count, crypto::Drbg& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    IssuanceClient client(user, issuer.id(), issuer.public_key(), attributes, rng);
    AUTHSIM_ASSIGN_OR_RETURN(IssuanceChallenge challenge, issuer.Begin(client.request()));
    AUTHSIM_ASSIGN_OR_RETURN(IssuanceResponse response,
                             issuer.Finish(client.Answer(challenge)));
    AUTHSIM_ASSIGN_OR_RETURN(AttributeCredential cred, client.Complete(response));
    wallet.Install(std::move(cred));
  }
  return absl::OkStatus();
}

}  // namespace authsim::pabac

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

#include "authsim/idc/documents.h"

#include <algorithm>

#include "authsim/common/json.h"
#include "authsim/common/status.h"

namespace authsim::idc {

namespace {
constexpr std::string_view kDocumentFields[] = {"name", "birthdate", "country"};
}  // namespace

std::string DocumentSignedBytes(const IdentityDocument& doc) {
  return CanonicalJson({{"ctx", "authsim.document.v1"},
                        {"document_id", doc.document_id},
                        {"name", doc.name},
                        {"birthdate", doc.birthdate},
                        {"country", doc.country}});
}

std::string DocumentToText(const IdentityDocument& doc) {
  return CanonicalJson({{"document_id", doc.document_id},
                        {"name", doc.name},
                        {"birthdate", doc.birthdate},
                        {"country", doc.country},
                        {"signature", crypto::Base64Encode(doc.signature)}});
}

absl::StatusOr<IdentityDocument> ParseDocument(std::string_view text) {
  Json json = Json::parse(text, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    return MakeError(ErrorCode::kDocumentParseError, "document is not a JSON object");
  }
  IdentityDocument doc;
  for (auto [key, field] : {std::pair{"document_id", &doc.document_id},
                            std::pair{"name", &doc.name},
                            std::pair{"birthdate", &doc.birthdate},
                            std::pair{"country", &doc.country}}) {
    auto it = json.find(key);
    if (it == json.end() || !it->is_string() || it->get<std::string>().empty()) {
      return MakeError(ErrorCode::kDocumentParseError,
                       std::string("missing document field ") + key);
    }
    *field = it->get<std::string>();
  }
  auto sig = json.find("signature");
  std::optional<crypto::Bytes> raw;
  if (sig != json.end() && sig->is_string()) raw = crypto::Base64Decode(sig->get<std::string>());
  if (!raw || raw->size() != doc.signature.size()) {
    return MakeError(ErrorCode::kDocumentParseError, "bad document signature field");
  }
  std::copy(raw->begin(), raw->end(), doc.signature.begin());
  return doc;
}

IdentityDocument DocumentAuthority::Issue(std::string document_id, std::string name,
                                          std::string birthdate,
                                          std::string country) const {
  IdentityDocument doc{std::move(document_id), std::move(name), std::move(birthdate),
                       std::move(country), {}};
  doc.signature = key_.Sign(crypto::AsBytes(DocumentSignedBytes(doc)));
  return doc;
}

absl::StatusOr<std::vector<identity::IdentityAttribute>> AcquireDocument(
    std::string_view text, const crypto::VerifyKey& authority,
    const identity::AttributeSchema& schema, const PrincipalId& source, SimTime now) {
  AUTHSIM_ASSIGN_OR_RETURN(IdentityDocument doc, ParseDocument(text));
  if (!authority.Verify(crypto::AsBytes(DocumentSignedBytes(doc)), doc.signature)) {
    return MakeError(ErrorCode::kDocumentParseError, "document signature does not verify");
  }
  std::vector<identity::IdentityAttribute> out;
  for (auto [name, raw] : {std::pair{"name", &doc.name},
                           std::pair{"birthdate", &doc.birthdate},
                           std::pair{"country", &doc.country}}) {
    auto attr = identity::NormalizeAttribute(schema, name, *raw, source, now);
    if (!attr.ok()) {
      return MakeError(ErrorCode::kDocumentParseError,
                       std::string("unreadable document field ") + name);
    }
    out.push_back(*std::move(attr));
  }
  return out;
}

bool DocumentMatches(const std::vector<identity::IdentityAttribute>& acquired,
                     const std::vector<identity::IdentityAttribute>& stored) {
  for (std::string_view field : kDocumentFields) {
    auto find = [field](const std::vector<identity::IdentityAttribute>& list) {
      return std::find_if(list.begin(), list.end(),
                          [field](const auto& a) { return a.name == field; });
    };
    auto a = find(acquired);
    auto s = find(stored);
    if (a == acquired.end() || s == stored.end() || a->value != s->value) return false;
  }
  return true;
}

}  // namespace authsim::idc

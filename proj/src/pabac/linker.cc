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

#include "authsim/pabac/linker.h"

#include <algorithm>
#include <iterator>

namespace authsim::pabac {
namespace {

void Collect(const Json& json, std::set<std::string>& out) {
  if (json.is_object() || json.is_array()) {
    for (const Json& child : json) Collect(child, out);
  } else {
    out.insert(json.dump());
  }
}

std::set<std::string> DisclosedValues(const Presentation& p) {
  std::set<std::string> out;
  for (const auto& [_, opening] : p.disclosed) {
    out.insert(identity::ValueToJson(opening.value).dump());
  }
  return out;
}

std::set<std::string> LinkableValues(const Presentation& p) {
  std::set<std::string> leaves = LeafValues(PresentationToJson(p));
  for (const std::string& v : DisclosedValues(p)) leaves.erase(v);
  return leaves;
}

}  // namespace

std::set<std::string> LeafValues(const Json& json) {
  std::set<std::string> out;
  Collect(json, out);
  return out;
}

std::vector<std::size_t> LinkPresentation(const Presentation& presentation,
                                          const std::vector<Json>& transcripts) {
  const std::set<std::string> mine = LinkableValues(presentation);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    const std::set<std::string> theirs = LeafValues(transcripts[i]);
    const bool linked = std::any_of(mine.begin(), mine.end(), [&](const auto& v) {
      return theirs.contains(v);
    });
    if (linked) out.push_back(i);
  }
  return out;
}

TranscriptIndex::TranscriptIndex(const std::vector<Json>& transcripts)
    : size_(transcripts.size()) {
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    for (const std::string& leaf : LeafValues(transcripts[i])) leaves_[leaf].push_back(i);
  }
}

std::vector<std::size_t> TranscriptIndex::Link(const Presentation& presentation) const {
  std::set<std::size_t> hits;
  for (const std::string& v : LinkableValues(presentation)) {
    auto it = leaves_.find(v);
    if (it != leaves_.end()) hits.insert(it->second.begin(), it->second.end());
  }
  return {hits.begin(), hits.end()};
}

std::set<std::string> SharedFields(const Presentation& a, const Presentation& b) {
  std::set<std::string> la = LeafValues(PresentationToJson(a));
  std::set<std::string> lb = LeafValues(PresentationToJson(b));
  std::set<std::string> shared;
  std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                        std::inserter(shared, shared.end()));
  // The issuer is common to every holder of its tokens, so it names the
  // anonymity set rather than the user.
  if (a.body.issuer == b.body.issuer) shared.erase(Json(a.body.issuer.value()).dump());
  for (const auto& [name, opening] : a.disclosed) {
    auto other = b.disclosed.find(name);
    if (other != b.disclosed.end() && other->second.value == opening.value) {
      shared.erase(identity::ValueToJson(opening.value).dump());
    }
  }
  return shared;
}

}  // namespace authsim::pabac

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

#ifndef AUTHSIM_PABAC_LINKER_H_
#define AUTHSIM_PABAC_LINKER_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "authsim/common/json.h"
#include "authsim/pabac/credential.h"

namespace authsim::pabac {

// Canonical encodings of every scalar leaf in a JSON document.
std::set<std::string> LeafValues(const Json& json);

// The colluding issuer+verifier linker: a presentation links to an issuance
// transcript when any leaf value of the serialized presentation, other than
// the disclosed attribute values, appears verbatim in the transcript.
// Returns the indices of the transcripts the presentation links to.
std::vector<std::size_t> LinkPresentation(const Presentation& presentation,
                                          const std::vector<Json>& transcripts);

// The same linker over a fixed transcript set with every leaf indexed once,
// for experiments with many presentations. Agrees with LinkPresentation.
class TranscriptIndex {
 public:
  explicit TranscriptIndex(const std::vector<Json>& transcripts);
  std::vector<std::size_t> Link(const Presentation& presentation) const;
  std::size_t size() const { return size_; }

 private:
  std::map<std::string, std::vector<std::size_t>> leaves_;
  std::size_t size_ = 0;
};

// Leaf values shared by two presentations, excepting disclosed values that
// are equal in both and a common issuer id.
std::set<std::string> SharedFields(const Presentation& a, const Presentation& b);

}  // namespace authsim::pabac

#endif  // AUTHSIM_PABAC_LINKER_H_

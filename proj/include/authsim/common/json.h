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

#ifndef AUTHSIM_COMMON_JSON_H_
#define AUTHSIM_COMMON_JSON_H_

#include <string>

#include "json.hpp"

namespace authsim {

using Json = nlohmann::json;

// Compact serialization with object keys in lexicographic order (the default
// object type is std::map-backed). Used wherever bytes are signed, compared,
// or written to the event log.
inline std::string CanonicalJson(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::strict);
}

}  // namespace authsim

#endif  // AUTHSIM_COMMON_JSON_H_

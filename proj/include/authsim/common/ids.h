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

#ifndef AUTHSIM_COMMON_IDS_H_
#define AUTHSIM_COMMON_IDS_H_

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace authsim {

// Opaque string identifier distinguished at compile time by `Tag`.
template <typename Tag>
class StrongId {
 public:
  StrongId() = default;
  explicit StrongId(std::string value) : value_(std::move(value)) {}
  explicit StrongId(std::string_view value) : value_(value) {}
  explicit StrongId(const char* value) : value_(value) {}

  const std::string& value() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const StrongId&, const StrongId&) = default;
  friend bool operator==(const StrongId&, const StrongId&) = default;

  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) {
    return os << id.value_;
  }

 private:
  std::string value_;
};

struct PrincipalIdTag {};
struct DeviceIdTag {};

using PrincipalId = StrongId<PrincipalIdTag>;
using DeviceId = StrongId<DeviceIdTag>;

}  // namespace authsim

template <typename Tag>
struct std::hash<authsim::StrongId<Tag>> {
  size_t operator()(const authsim::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value());
  }
};

#endif  // AUTHSIM_COMMON_IDS_H_

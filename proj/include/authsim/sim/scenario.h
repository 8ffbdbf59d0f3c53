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

#ifndef AUTHSIM_SIM_SCENARIO_H_
#define AUTHSIM_SIM_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/device/device.h"
#include "authsim/identity/principal.h"
#include "authsim/sim/adversary.h"

namespace authsim::sim {

struct DeviceSpec {
  DeviceId id;
  device::TeeGrade tee = device::TeeGrade::kTee;
};

struct PrincipalSpec {
  PrincipalId id;
  identity::Role role = identity::Role::kUser;
  std::size_t line = 0;
  // IdP: the origin it serves from; whether it issues attribute credentials.
  std::string origin;
  bool credentials = false;
  // SP: the IdP (or IDC) it federates with.
  PrincipalId idp;
  // User.
  Json attributes = Json::object();
  std::vector<DeviceSpec> devices;
  std::string password;
  std::string backup_password;
  std::string baa_password;
  std::string msisdn;
  std::vector<std::string> refuse;
  // Passport fields {document_id, name, birthdate, country}, if the user has one.
  Json document;
};

struct AdversarySpec {
  PrincipalId id;
  CapabilitySet capabilities;
  Strategy strategy = Strategy::kPassive;
  std::size_t line = 0;
};

struct ActionSpec {
  SimTime at;
  std::string action;
  Json args = Json::object();
  std::size_t line = 0;
};

struct AssertionSpec {
  std::string type;
  Json args = Json::object();
  std::size_t line = 0;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<PrincipalSpec> principals;
  std::vector<AdversarySpec> adversaries;
  std::vector<ActionSpec> schedule;
  std::vector<AssertionSpec> assertions;

  const PrincipalSpec* Find(const PrincipalId& id) const;
  const AdversarySpec* FindAdversary(const PrincipalId& id) const;
};

// ScenarioError, with "line N" in the message, for malformed JSON, unknown
// actions or roles, and references to undeclared principals.
absl::StatusOr<Scenario> ParseScenario(std::string_view text);
absl::StatusOr<Scenario> LoadScenario(const std::string& path);

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_SCENARIO_H_

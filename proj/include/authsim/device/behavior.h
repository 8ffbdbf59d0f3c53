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

#ifndef AUTHSIM_DEVICE_BEHAVIOR_H_
#define AUTHSIM_DEVICE_BEHAVIOR_H_

#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/crypto/drbg.h"

namespace authsim::device {

struct BehavioralRecord {
  DeviceId device_id;
  PrincipalId user;
  SimTime captured_at;
  std::vector<double> features;

  friend bool operator==(const BehavioralRecord&,
                         const BehavioralRecord&) = default;
};

Json RecordToJson(const BehavioralRecord& record);
absl::StatusOr<BehavioralRecord> RecordFromJson(const Json& json);

// Independent per-feature Gaussian source of behavioral measurements.
struct BehaviorGenerator {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t dimension() const { return mean.size(); }
  std::vector<double> Sample(crypto::Drbg& rng) const;

  static absl::StatusOr<BehaviorGenerator> FromJson(const Json& json);
  Json ToJson() const;
};

// Same spread as `owner`, every mean moved by `shift_sigmas` standard
// deviations.
BehaviorGenerator ShiftedGenerator(const BehaviorGenerator& owner,
                                   double shift_sigmas);

// Generator used by tests and bundled scenarios: d features with varied means
// and unit-scale spreads.
BehaviorGenerator FixtureOwnerGenerator(std::size_t dimension = 8);

}  // namespace authsim::device

#endif  // AUTHSIM_DEVICE_BEHAVIOR_H_

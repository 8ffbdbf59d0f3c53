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

#include "authsim/device/behavior.h"

#include "authsim/common/status.h"

namespace authsim::device {

Json RecordToJson(const BehavioralRecord& record) {
  return {{"device_id", record.device_id.value()},
          {"user", record.user.value()},
          {"captured_at", ToMillis(record.captured_at)},
          {"features", record.features}};
}

absl::StatusOr<BehavioralRecord> RecordFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("features") ||
      !json["features"].is_array()) {
    return MakeError(ErrorCode::kInvalidArgument, "malformed behavioral record");
  }
  BehavioralRecord r;
  r.device_id = DeviceId(json.value("device_id", ""));
  r.user = PrincipalId(json.value("user", ""));
  r.captured_at = FromMillis(json.value("captured_at", std::int64_t{0}));
  for (const Json& f : json["features"]) {
    if (!f.is_number()) {
      return MakeError(ErrorCode::kInvalidArgument, "non-numeric feature");
    }
    r.features.push_back(f.get<double>());
  }
  return r;
}

std::vector<double> BehaviorGenerator::Sample(crypto::Drbg& rng) const {
  std::vector<double> out(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    out[i] = rng.Normal(mean[i], stddev[i]);
  }
  return out;
}

absl::StatusOr<BehaviorGenerator> BehaviorGenerator::FromJson(const Json& json) {
  if (!json.is_object() || !json.contains("mean") || !json.contains("stddev")) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "generator needs mean and stddev arrays");
  }
  BehaviorGenerator g;
  g.mean = json["mean"].get<std::vector<double>>();
  g.stddev = json["stddev"].get<std::vector<double>>();
  if (g.mean.size() != g.stddev.size() || g.mean.empty()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "mean and stddev must have equal, non-zero length");
  }
  for (double s : g.stddev) {
    if (!(s > 0)) {
      return MakeError(ErrorCode::kInvalidArgument, "stddev must be positive");
    }
  }
  return g;
}

Json BehaviorGenerator::ToJson() const {
  return {{"mean", mean}, {"stddev", stddev}};
}

BehaviorGenerator ShiftedGenerator(const BehaviorGenerator& owner,
                                   double shift_sigmas) {
  BehaviorGenerator out = owner;
  for (std::size_t i = 0; i < out.mean.size(); ++i) {
    out.mean[i] += shift_sigmas * out.stddev[i];
  }
  return out;
}

BehaviorGenerator FixtureOwnerGenerator(std::size_t dimension) {
  BehaviorGenerator g;
  for (std::size_t i = 0; i < dimension; ++i) {
    // Keystroke dwell-like values in the 80..150 range, spreads 4..11.
    g.mean.push_back(80.0 + 10.0 * static_cast<double>(i));
    g.stddev.push_back(4.0 + static_cast<double>(i));
  }
  return g;
}

}  // namespace authsim::device

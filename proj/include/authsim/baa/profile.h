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

#ifndef AUTHSIM_BAA_PROFILE_H_
#define AUTHSIM_BAA_PROFILE_H_

#include <chrono>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"

namespace authsim::baa {

struct BaaConfig {
  std::size_t dimension = 8;
  double z = 3.0;
  double tau = 0.8;
  std::size_t n_min = 20;
  std::size_t training_min = 50;
  // Login rate limit: at most `rate_limit` attempts per `rate_window`.
  std::size_t rate_limit = 5;
  SimDuration rate_window = std::chrono::seconds(60);
  SimDuration token_lifetime = std::chrono::seconds(600);

  static absl::StatusOr<BaaConfig> FromJson(const Json& json);
};

// Independent per-feature Gaussian, updated with Welford's algorithm.
class BehavioralProfile {
 public:
  BehavioralProfile() = default;
  BehavioralProfile(PrincipalId user, std::size_t dimension);

  const PrincipalId& user() const { return user_; }
  std::size_t dimension() const { return mean_.size(); }
  std::size_t count() const { return count_; }
  bool trained(std::size_t training_min) const { return count_ >= training_min; }

  // FeatureDimensionError on a size mismatch.
  absl::Status Update(std::span<const double> features);

  double mean(std::size_t i) const { return mean_[i]; }
  // Population variance; 0 until two samples are in.
  double variance(std::size_t i) const;
  double stddev(std::size_t i) const;

  // Every feature within z standard deviations of its mean. A zero-spread
  // feature only admits its exact mean.
  bool Within(std::span<const double> features, double z) const;

  Json ToJson() const;
  static absl::StatusOr<BehavioralProfile> FromJson(const Json& json);

  friend bool operator==(const BehavioralProfile&, const BehavioralProfile&) = default;

 private:
  PrincipalId user_;
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

enum class Verdict { kMatch, kNoMatch, kInsufficientData };
std::string_view VerdictName(Verdict v);

// The decision rule on an already-filtered window: InsufficientData below
// n_min records, otherwise Match iff the fraction of records within z is at
// least tau.
Verdict ScoreWindow(const BehavioralProfile& profile,
                    const std::vector<std::vector<double>>& window,
                    const BaaConfig& config);

}  // namespace authsim::baa

#endif  // AUTHSIM_BAA_PROFILE_H_

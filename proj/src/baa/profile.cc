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

#include "authsim/baa/profile.h"

#include <cmath>

#include "authsim/common/status.h"

namespace authsim::baa {

absl::StatusOr<BaaConfig> BaaConfig::FromJson(const Json& json) {
  BaaConfig c;
  try {
    c.dimension = json.value("dimension", c.dimension);
    c.z = json.value("z", c.z);
    c.tau = json.value("tau", c.tau);
    c.n_min = json.value("n_min", c.n_min);
    c.training_min = json.value("training_min", c.training_min);
    c.rate_limit = json.value("rate_limit", c.rate_limit);
    c.rate_window = std::chrono::seconds(
        json.value("rate_window_s", static_cast<std::int64_t>(60)));
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  if (c.dimension == 0 || c.z <= 0 || c.tau <= 0 || c.tau > 1 || c.n_min == 0) {
    return MakeError(ErrorCode::kInvalidArgument, "BAA config out of range");
  }
  return c;
}

BehavioralProfile::BehavioralProfile(PrincipalId user, std::size_t dimension)
    : user_(std::move(user)), mean_(dimension, 0.0), m2_(dimension, 0.0) {}

absl::Status BehavioralProfile::Update(std::span<const double> features) {
  if (features.size() != mean_.size()) {
    return MakeError(ErrorCode::kFeatureDimensionError,
                     "record has " + std::to_string(features.size()) +
                         " features, profile has " + std::to_string(mean_.size()));
  }
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = features[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (features[i] - mean_[i]);
  }
  return absl::OkStatus();
}

double BehavioralProfile::variance(std::size_t i) const {
  if (count_ < 2) return 0.0;
  return std::max(0.0, m2_[i] / static_cast<double>(count_));
}

double BehavioralProfile::stddev(std::size_t i) const { return std::sqrt(variance(i)); }

bool BehavioralProfile::Within(std::span<const double> features, double z) const {
  if (features.size() != mean_.size()) return false;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    if (std::abs(features[i] - mean_[i]) > z * stddev(i)) return false;
  }
  return true;
}

Json BehavioralProfile::ToJson() const {
  return {{"user", user_.value()}, {"count", count_}, {"mean", mean_}, {"m2", m2_}};
}

absl::StatusOr<BehavioralProfile> BehavioralProfile::FromJson(const Json& json) {
  BehavioralProfile p;
  try {
    p.user_ = PrincipalId(json.at("user").get<std::string>());
    p.count_ = json.at("count").get<std::size_t>();
    p.mean_ = json.at("mean").get<std::vector<double>>();
    p.m2_ = json.at("m2").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  if (p.mean_.size() != p.m2_.size()) {
    return MakeError(ErrorCode::kInvalidArgument, "profile vectors differ in size");
  }
  return p;
}

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kMatch: return "match";
    case Verdict::kNoMatch: return "no-match";
    case Verdict::kInsufficientData: return "insufficient-data";
  }
  return "?";
}

Verdict ScoreWindow(const BehavioralProfile& profile,
                    const std::vector<std::vector<double>>& window,
                    const BaaConfig& config) {
  if (window.size() < config.n_min) return Verdict::kInsufficientData;
  std::size_t within = 0;
  for (const auto& features : window) {
    if (profile.Within(features, config.z)) ++within;
  }
  const double fraction = static_cast<double>(within) / static_cast<double>(window.size());
  return fraction >= config.tau ? Verdict::kMatch : Verdict::kNoMatch;
}

}  // namespace authsim::baa

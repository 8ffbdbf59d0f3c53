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

#include "authsim/risk/risk.h"

#include "authsim/common/status.h"

namespace authsim::risk {
namespace {

// Splits `set` into the part the population can condition on and the names
// it has no column for.
AttributeAssignment KnownPart(const AttributeAssignment& set,
                              const PopulationTable& population,
                              std::vector<std::string>* ignored) {
  AttributeAssignment known;
  for (const auto& [name, value] : set) {
    if (population.HasColumn(name)) {
      known.emplace(name, value);
    } else {
      ignored->push_back(name);
    }
  }
  return known;
}

}  // namespace

Json RiskIndicator::ToJson() const {
  Json out = {{"kind", kind == Kind::kInference ? "inference" : "rarity"},
              {"conditioned", conditioned},
              {"score", score},
              {"numerator", numerator},
              {"denominator", denominator},
              {"population_size", population_size},
              {"population_knowledge", "full reference table"}};
  if (kind == Kind::kInference) {
    out["target"] = target;
    out["best_value"] = best_value;
  }
  if (!ignored.empty()) out["ignored"] = ignored;
  return out;
}

absl::StatusOr<RiskIndicator> InferenceRisk(const AttributeAssignment& revealed,
                                            const std::string& hidden,
                                            const PopulationTable& population) {
  std::optional<std::size_t> hidden_col = population.ColumnIndex(hidden);
  if (!hidden_col) {
    return MakeError(ErrorCode::kSchemaError,
                     "no population column for " + hidden);
  }
  if (revealed.contains(hidden)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     hidden + " is already revealed");
  }
  RiskIndicator out;
  out.kind = RiskIndicator::Kind::kInference;
  out.target = hidden;
  out.population_size = population.size();
  out.conditioned = KnownPart(revealed, population, &out.ignored);

  RowSet base = population.Match(out.conditioned);
  out.denominator = base.Count();
  if (out.denominator == 0) {
    return MakeError(ErrorCode::kUndefined,
                     "no population rows match the revealed set");
  }
  for (const std::string& value : population.Values(hidden)) {
    AttributeAssignment with = out.conditioned;
    with[hidden] = value;
    std::size_t count = population.CountMatching(with);
    // Values() is sorted, so ties go to the smallest value.
    if (count > out.numerator) {
      out.numerator = count;
      out.best_value = value;
    }
  }
  out.score = static_cast<double>(out.numerator) /
              static_cast<double>(out.denominator);
  return out;
}

absl::StatusOr<RiskIndicator> FederatedInferenceRisk(
    const DisclosureLedger& ledger, const PrincipalId& user,
    const PrincipalId& sp, const std::string& hidden,
    const PopulationTable& population) {
  return InferenceRisk(ledger.LinkableRevealed(user, sp), hidden, population);
}

absl::StatusOr<RiskIndicator> PabacCombinationRisk(
    const AttributeAssignment& disclose, const PopulationTable& population) {
  if (disclose.empty()) {
    return MakeError(ErrorCode::kInvalidArgument, "disclosure set is empty");
  }
  for (const auto& [name, value] : disclose) {
    if (!population.HasColumn(name)) {
      return MakeError(ErrorCode::kSchemaError,
                       "no population column for " + name);
    }
  }
  RiskIndicator out;
  out.kind = RiskIndicator::Kind::kRarity;
  out.conditioned = disclose;
  out.population_size = population.size();
  out.denominator = population.CountMatching(disclose);
  if (out.denominator == 0) {
    return MakeError(ErrorCode::kUndefined,
                     "no population rows match the disclosure set");
  }
  out.numerator = 1;
  out.score = 1.0 / static_cast<double>(out.denominator);
  return out;
}

}  // namespace authsim::risk

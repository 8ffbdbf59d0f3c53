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

#ifndef AUTHSIM_RISK_RISK_H_
#define AUTHSIM_RISK_RISK_H_

#include <cstddef>
#include <string>

#include "absl/status/statusor.h"
#include "authsim/common/json.h"
#include "authsim/risk/ledger.h"
#include "authsim/risk/population.h"

namespace authsim::risk {

struct RiskIndicator {
  enum class Kind { kInference, kRarity };
  Kind kind = Kind::kInference;
  // Inference: the hidden attribute. Rarity: empty.
  std::string target;
  // The conditioning set (R for inference, D for rarity).
  AttributeAssignment conditioned;
  double score = 0.0;
  // score == numerator / denominator exactly.
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  std::size_t population_size = 0;
  // Inference only: the most likely value of the hidden attribute.
  std::string best_value;
  // Conditioning attributes that are not population columns and so were
  // left out of the count.
  std::vector<std::string> ignored;

  Json ToJson() const;
};

// Probability that an SP holding the revealed set R guesses hidden attribute
// `hidden` correctly: max_v |R and hidden=v| / |R|.
// Undefined when no rows match R; SchemaError when `hidden` is not a
// population column; InvalidArgument when `hidden` is already in R.
absl::StatusOr<RiskIndicator> InferenceRisk(const AttributeAssignment& revealed,
                                            const std::string& hidden,
                                            const PopulationTable& population);

// The ledger-driven form: R is the (user, sp) linkable federated history.
absl::StatusOr<RiskIndicator> FederatedInferenceRisk(
    const DisclosureLedger& ledger, const PrincipalId& user,
    const PrincipalId& sp, const std::string& hidden,
    const PopulationTable& population);

// Reciprocal anonymity-set size of the about-to-disclose set D: 1/k with
// k = |rows matching D|. Undefined when k = 0; InvalidArgument when D is
// empty; SchemaError when D names an attribute outside the population.
absl::StatusOr<RiskIndicator> PabacCombinationRisk(
    const AttributeAssignment& disclose, const PopulationTable& population);

}  // namespace authsim::risk

#endif  // AUTHSIM_RISK_RISK_H_

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

#ifndef AUTHSIM_SIM_TRACE_VALIDATOR_H_
#define AUTHSIM_SIM_TRACE_VALIDATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "authsim/common/json.h"

namespace authsim::sim {

struct Violation {
  std::string invariant;
  std::uint64_t seq = 0;
  std::string detail;
};

struct TraceReport {
  std::size_t events = 0;
  // Login flows held to the exact six-step order (no adversary traffic).
  std::size_t clean_flows = 0;
  std::size_t grants = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Violates(const std::string& invariant) const;
  Json ToJson() const;
};

// Re-checks every trace invariant over a parsed event log:
//   log_structure       dense seq numbers; deliveries follow their send
//   msg_id_unique       no msg_id is sent twice
//   flow_conformance    untouched logins follow the six steps exactly, with
//                       the token exchange between steps 5 and 6
//   single_grant        at most one grant per SP session and per flow
//   nonce_single_use    an IdP accepts each nonce once
//   audience_soundness  an SP grants only on tokens addressed to it
//   lock_dominance      a locked account is never authenticated or issued to
//   mc_opacity          no MNO-protocol message reaches an SP
//   adversary_soundness taps read secure traffic only with MitM; replays
//                       and device theft need the matching capability
//   tentative_containment management operations never succeed below AAL2
//   state_replay        the IDC journal in the log rebuilds its checkpoint
//   benchmark_validity  every benchmark batch fully succeeded
//   assertion           scenario assertions recorded in the log passed
TraceReport ValidateTrace(const std::vector<Json>& events);

// Grants an adversary obtained: SP grants delivered to it or triggered by
// its traffic, plus every grant beyond the first for one flow.
std::size_t AdversaryBreaches(const std::vector<Json>& events, const std::string& adversary);

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_TRACE_VALIDATOR_H_

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

#ifndef AUTHSIM_SIM_WORLD_H_
#define AUTHSIM_SIM_WORLD_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/baa/authority.h"
#include "authsim/crypto/drbg.h"
#include "authsim/idc/consolidator.h"
#include "authsim/idc/documents.h"
#include "authsim/idc/mno.h"
#include "authsim/pabac/issuer.h"
#include "authsim/pabac/verifier.h"
#include "authsim/risk/population.h"
#include "authsim/sim/actors.h"
#include "authsim/sim/adversary.h"
#include "authsim/sim/event_log.h"
#include "authsim/sim/runtime.h"
#include "authsim/sim/scenario.h"
#include "authsim/sim/trace_validator.h"

namespace authsim::sim {

struct WorldOptions {
  // Replaces the scenario's own seed.
  std::optional<std::uint64_t> seed;
  const risk::PopulationTable* population = nullptr;
  // Simulated start of the run; behavioral training history precedes it.
  SimTime start = FromMillis(1'000'000'000);
};

struct AssertionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::vector<AssertionResult> assertions;
  TraceReport trace;
  bool ok() const;
};

// Every principal of a scenario instantiated on one deterministic runtime.
// All keys and nonces derive from the seed.
class World {
 public:
  static absl::StatusOr<std::unique_ptr<World>> Build(const Scenario& scenario,
                                                      WorldOptions options, EventLog* log);
  ~World();

  // Executes the schedule, writes the IDC checkpoint, evaluates the
  // scenario assertions and re-validates the trace.
  absl::StatusOr<RunResult> Run();

  Runtime& runtime() { return runtime_; }
  UserAgentActor* Agent(const PrincipalId& id);
  SpActor* Sp(const PrincipalId& id);
  IdpActor* Idp(const PrincipalId& id);
  Adversary* FindAdversary(const PrincipalId& id);
  idc::IdentityConsolidator* Idc() { return idc_.get(); }

 private:
  World(const Scenario& scenario, WorldOptions options, EventLog* log);

  absl::Status Setup();
  void Perform(const ActionSpec& action);
  void Recover(const ActionSpec& action);
  absl::Status Enroll(UserAgentActor& agent, const DeviceId& device, IdpActor& idp);
  void RecordDisclosure(const PrincipalId& sp, const std::string& flow, const PrincipalId& agent,
                        const federation::TokenValidation& v);
  AssertionResult Evaluate(const AssertionSpec& a, const std::vector<Json>& events,
                           const TraceReport& trace);
  void Op(std::string_view op, const absl::Status& s, Json detail);

  const Scenario& scenario_;
  WorldOptions options_;
  EventLog* log_;
  crypto::Drbg rng_;
  Runtime runtime_;
  PrincipalId world_id_{"world"};
  PrincipalId admin_{"idc.admin"};

  std::map<PrincipalId, std::unique_ptr<UserAgentActor>> agents_;
  std::map<PrincipalId, std::unique_ptr<IdpActor>> idps_;
  std::map<PrincipalId, std::unique_ptr<SpActor>> sps_;
  std::map<PrincipalId, std::unique_ptr<Adversary>> adversaries_;
  std::map<PrincipalId, std::unique_ptr<pabac::CredentialIssuer>> issuers_;
  std::map<PrincipalId, std::unique_ptr<pabac::CredentialVerifier>> verifiers_;
  std::map<PrincipalId, std::string> last_flow_;
  std::unique_ptr<idc::MnoIdp> mno_;
  std::unique_ptr<baa::BehavioralAuthority> baa_;
  std::unique_ptr<idc::DocumentAuthority> documents_;
  std::unique_ptr<idc::IdentityConsolidator> idc_;
  std::unique_ptr<IdcActor> idc_actor_;
  device::BehaviorGenerator owner_behavior_;
};

// Parses nothing; builds, runs and reports.
absl::StatusOr<RunResult> RunScenario(const Scenario& scenario, WorldOptions options,
                                      EventLog* log);

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_WORLD_H_

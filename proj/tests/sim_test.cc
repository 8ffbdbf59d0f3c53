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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "authsim/common/status.h"
#include "authsim/sim/actors.h"
#include "authsim/sim/adversary.h"
#include "authsim/sim/bench.h"
#include "authsim/sim/concurrent_runtime.h"
#include "authsim/sim/envelope.h"
#include "authsim/sim/event_log.h"
#include "authsim/sim/scenario.h"
#include "authsim/sim/trace_validator.h"
#include "authsim/sim/world.h"

namespace authsim::sim {
namespace {

std::string ScenarioPath(const std::string& name) {
  const char* dir = std::getenv("AUTHSIM_SOURCE_DIR");
  return std::string(dir == nullptr ? "." : dir) + "/scenarios/" + name + ".json";
}

struct Ran {
  std::unique_ptr<EventLog> log = std::make_unique<EventLog>();
  RunResult result;
};

Ran RunNamed(const std::string& name, WorldOptions options = {}) {
  Ran out;
  auto scenario = LoadScenario(ScenarioPath(name));
  EXPECT_TRUE(scenario.ok()) << scenario.status();
  auto result = RunScenario(*scenario, options, out.log.get());
  EXPECT_TRUE(result.ok()) << result.status();
  if (result.ok()) out.result = *result;
  return out;
}

std::string Failures(const RunResult& r) {
  std::string out;
  for (const AssertionResult& a : r.assertions) {
    if (!a.pass) out += a.name + " (" + a.detail + ") ";
  }
  for (const Violation& v : r.trace.violations) out += v.invariant + ": " + v.detail + " ";
  return out;
}

// Keeps events in order and makes seq dense again, so a mutation is judged
// on its protocol effect rather than on a broken sequence.
std::vector<Json> Renumber(std::vector<Json> events) {
  for (std::size_t i = 0; i < events.size(); ++i) events[i]["seq"] = i;
  return events;
}

std::vector<std::size_t> StepSends(const std::vector<Json>& events, const std::string& flow) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Json& e = events[i];
    if (e.value("kind", "") != "send") continue;
    const Json& env = e.at("envelope");
    if (env.at("payload").value("flow", "") == flow && LoginStep(env.at("type").get<std::string>()) > 0) {
      out.push_back(i);
    }
  }
  return out;
}

// ---------------------------------------------------------------- scenarios

TEST(ScenarioTest, UndeclaredPrincipalNamesTheLine) {
  const std::string text = R"({
  "seed": 1,
  "principals": [
    {"id": "alice", "role": "user", "devices": [{"id": "p"}]},
    {"id": "idp.example", "role": "idp"}
  ],
  "schedule": [
    {"at": 0, "action": "enroll", "user": "alice", "device": "p", "idp": "idp.example"},
    {"at": 5, "action": "login", "user": "alice", "sp": "ghost.example"}
  ]
})";
  auto s = ParseScenario(text);
  ASSERT_TRUE(HasErrorCode(s.status(), ErrorCode::kScenarioError));
  EXPECT_NE(s.status().message().find("line 9"), std::string::npos) << s.status();
  EXPECT_NE(s.status().message().find("ghost.example"), std::string::npos);
}

TEST(ScenarioTest, SyntaxErrorNamesTheLine) {
  auto s = ParseScenario("{\n  \"seed\": 1,\n  \"principals\": [\n    {\"id\": }\n  ]\n}");
  ASSERT_TRUE(HasErrorCode(s.status(), ErrorCode::kScenarioError));
  EXPECT_NE(s.status().message().find("line 4"), std::string::npos) << s.status();
}

TEST(ScenarioTest, SpMustPointAtAnIdentityProvider) {
  auto s = ParseScenario(R"({"principals": [
    {"id": "u", "role": "user"},
    {"id": "shop", "role": "sp", "idp": "u"}]})");
  ASSERT_TRUE(HasErrorCode(s.status(), ErrorCode::kScenarioError));
  EXPECT_NE(s.status().message().find("line 3"), std::string::npos) << s.status();
}

TEST(ScenarioTest, UnknownCapabilityIsRejected) {
  auto s = ParseScenario(R"({"adversaries": [{"id": "m", "capabilities": ["Telepathy"]}]})");
  EXPECT_TRUE(HasErrorCode(s.status(), ErrorCode::kScenarioError)) << s.status();
}

TEST(ScenarioTest, ScheduleIsOrderedByTimeStably) {
  auto s = ParseScenario(R"({"principals": [{"id": "u", "role": "user"}],
    "schedule": [
      {"at": 50, "action": "set_biometric", "user": "u", "present": false},
      {"at": 10, "action": "set_biometric", "user": "u", "present": true},
      {"at": 50, "action": "set_biometric", "user": "u", "present": true}]})");
  ASSERT_TRUE(s.ok()) << s.status();
  ASSERT_EQ(s->schedule.size(), 3u);
  EXPECT_EQ(s->schedule[0].at, FromMillis(10));
  EXPECT_FALSE(s->schedule[1].args.at("present").get<bool>());
  EXPECT_TRUE(s->schedule[2].args.at("present").get<bool>());
}

// -------------------------------------------------------------- adversaries

TEST(AdversaryTest, HardwareAttackImpliesSoftwareAttack) {
  CapabilitySet caps;
  caps.Add(Capability::kHardwareAttack);
  EXPECT_TRUE(caps.Has(Capability::kSoftwareAttack));
  EXPECT_FALSE(caps.Has(Capability::kMitM));
  auto named = CapabilitySet::FromNames({"HardwareAttack"});
  ASSERT_TRUE(named.ok());
  EXPECT_TRUE(named->Has(Capability::kSoftwareAttack));
}

TEST(AdversaryTest, StrategyNeedsItsCapability) {
  auto a = Adversary::Create(PrincipalId("m"), CapabilitySet{}, Strategy::kReplay,
                             crypto::Drbg(1));
  EXPECT_TRUE(HasErrorCode(a.status(), ErrorCode::kInvalidArgument));
  CapabilitySet replay;
  replay.Add(Capability::kReplay);
  EXPECT_TRUE(Adversary::Create(PrincipalId("m"), replay, Strategy::kReplay, crypto::Drbg(1)).ok());
}

// ---------------------------------------------------------- login and trace

TEST(WorldTest, FederatedLoginRunsTheSixStepsInOrder) {
  Ran ran = RunNamed("federated_login");
  EXPECT_TRUE(ran.result.ok()) << Failures(ran.result);
  EXPECT_EQ(ran.result.trace.clean_flows, 2u);
  const std::vector<Json> events = ran.log->Events();
  const std::vector<std::size_t> steps = StepSends(events, "alice#0");
  ASSERT_EQ(steps.size(), 6u);
  const std::vector<std::pair<std::string, std::string>> ends = {
      {"alice", "shop.example"}, {"shop.example", "idp.example"}, {"idp.example", "alice"},
      {"alice", "idp.example"},  {"idp.example", "shop.example"}, {"shop.example", "alice"}};
  for (int i = 0; i < 6; ++i) {
    const Json& env = events[steps[i]].at("envelope");
    EXPECT_EQ(LoginStep(env.at("type").get<std::string>()), i + 1);
    EXPECT_EQ(env.at("from"), ends[i].first);
    EXPECT_EQ(env.at("to"), ends[i].second);
  }
}

TEST(WorldTest, SameSeedGivesIdenticalLogs) {
  Ran a = RunNamed("device_recovery");
  Ran b = RunNamed("device_recovery");
  ASSERT_GT(a.log->size(), 50u);
  EXPECT_EQ(a.log->Text(), b.log->Text());
  Ran c = RunNamed("device_recovery", {.seed = 99});
  EXPECT_NE(a.log->Text(), c.log->Text());
}

TEST(WorldTest, PersistentLogMatchesTheInMemoryOne) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "authsim_sim_test_events.jsonl").string();
  auto log = EventLog::OpenPersistent(path);
  ASSERT_TRUE(log.ok()) << log.status();
  auto scenario = LoadScenario(ScenarioPath("mobile_connect"));
  ASSERT_TRUE(scenario.ok());
  auto result = RunScenario(*scenario, {}, log->get());
  ASSERT_TRUE(result.ok());
  auto read = EventLog::ReadFile(path);
  ASSERT_TRUE(read.ok()) << read.status();
  EXPECT_EQ(*read, (*log)->Events());
  EXPECT_TRUE(ValidateTrace(*read).ok());
  std::filesystem::remove(path);
}

TEST(WorldTest, GarbledLogLineIsASchemaError) {
  auto parsed = EventLog::Parse("{\"seq\":0}\n{not json\n");
  ASSERT_TRUE(HasErrorCode(parsed.status(), ErrorCode::kSchemaError));
  EXPECT_NE(parsed.status().message().find("line 2"), std::string::npos);
}

TEST(TraceValidatorTest, EveryDropDuplicateAndReorderOfAStepIsCaught) {
  Ran ran = RunNamed("federated_login");
  const std::vector<Json> events = ran.log->Events();
  ASSERT_TRUE(ValidateTrace(Renumber(events)).ok());
  const std::vector<std::size_t> steps = StepSends(events, "alice#0");
  ASSERT_EQ(steps.size(), 6u);
  std::uint64_t max_id = 0;
  for (const Json& e : events) {
    if (e.value("kind", "") == "send") max_id = std::max(max_id, e.at("envelope").at("msg_id").get<std::uint64_t>());
  }
  int mutations = 0;
  for (std::size_t k = 0; k < 6; ++k) {
    // Drop: the send and everything that refers to its message.
    const Json id = events[steps[k]].at("envelope").at("msg_id");
    std::vector<Json> dropped;
    for (const Json& e : events) {
      const bool refers = e.value("kind", "") == "send" ? e.at("envelope").at("msg_id") == id
                                                        : e.contains("msg_id") && e.at("msg_id") == id;
      if (!refers) dropped.push_back(e);
    }
    EXPECT_TRUE(ValidateTrace(Renumber(dropped)).Violates("flow_conformance")) << "drop " << k + 1;
    // Duplicate: the same step sent again under a fresh id.
    std::vector<Json> duplicated = events;
    Json copy = events[steps[k]];
    copy["envelope"]["msg_id"] = ++max_id;
    duplicated.insert(duplicated.begin() + static_cast<std::ptrdiff_t>(steps[k]) + 1, copy);
    EXPECT_TRUE(ValidateTrace(Renumber(duplicated)).Violates("flow_conformance")) << "dup " << k + 1;
    mutations += 2;
    if (k + 1 < 6) {
      std::vector<Json> reordered = events;
      std::swap(reordered[steps[k]], reordered[steps[k + 1]]);
      EXPECT_TRUE(ValidateTrace(Renumber(reordered)).Violates("flow_conformance"))
          << "swap " << k + 1;
      ++mutations;
    }
  }
  EXPECT_EQ(mutations, 17);
}

TEST(TraceValidatorTest, TamperedCheckpointFailsStateReplay) {
  Ran ran = RunNamed("device_recovery");
  std::vector<Json> events = ran.log->Events();
  bool tampered = false;
  for (Json& e : events) {
    if (e.value("kind", "") == "checkpoint") {
      e["state"]["registry"]["admins"] = Json::array({"intruder"});
      tampered = true;
    }
  }
  ASSERT_TRUE(tampered);
  EXPECT_TRUE(ValidateTrace(events).Violates("state_replay"));
}

TEST(TraceValidatorTest, ObservingSealedTrafficWithoutMitmIsUnsound) {
  Ran ran = RunNamed("replay_attack");
  std::vector<Json> events = ran.log->Events();
  bool tampered = false;
  for (Json& e : events) {
    if (e.value("kind", "") == "observe" && e.value("secure", false) && !tampered) {
      e["read"] = true;
      tampered = true;
    }
  }
  ASSERT_TRUE(tampered);
  EXPECT_TRUE(ValidateTrace(events).Violates("adversary_soundness"));
}

TEST(TraceValidatorTest, AuthenticationWhileLockedBreaksLockDominance) {
  // Extracted keys get past the gate, so the IdP's lock is what refuses.
  Ran ran = RunNamed("hardware_theft");
  std::vector<Json> events = ran.log->Events();
  bool tampered = false;
  for (Json& e : events) {
    if (e.value("op", "") == "idp.authenticate" && e.value("error", "") == "AccountLocked") {
      e["ok"] = true;
      e.erase("error");
      tampered = true;
    }
  }
  ASSERT_TRUE(tampered);
  EXPECT_TRUE(ValidateTrace(events).Violates("lock_dominance"));
}

TEST(TraceValidatorTest, TentativeUsersCannotAuthorizeDevices) {
  Ran ran = RunNamed("device_recovery");
  std::vector<Json> events = ran.log->Events();
  bool tampered = false;
  for (Json& e : events) {
    if (e.value("op", "") == "idc.authorize_device" && !e.value("ok", true)) {
      e["ok"] = true;
      e.erase("error");
      tampered = true;
    }
  }
  ASSERT_TRUE(tampered);
  EXPECT_TRUE(ValidateTrace(events).Violates("tentative_containment"));
}

TEST(TraceValidatorTest, ReusedNonceIsCaught) {
  Ran ran = RunNamed("federated_login");
  std::vector<Json> events = ran.log->Events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].value("op", "") == "idp.authenticate") {
      events.insert(events.begin() + static_cast<std::ptrdiff_t>(i) + 1, events[i]);
      break;
    }
  }
  EXPECT_TRUE(ValidateTrace(Renumber(events)).Violates("nonce_single_use"));
}

// ------------------------------------------------------------------ attacks

class AttackScenarioTest : public ::testing::TestWithParam<std::string> {};

TEST_P(AttackScenarioTest, AssertionsAndInvariantsHold) {
  Ran ran = RunNamed(GetParam());
  EXPECT_TRUE(ran.result.ok()) << Failures(ran.result);
  EXPECT_FALSE(ran.result.assertions.empty());
}

INSTANTIATE_TEST_SUITE_P(Scenarios, AttackScenarioTest,
                         ::testing::Values("replay_attack", "csrf_attack", "audience_mitm",
                                           "stolen_device", "hardware_theft", "device_recovery",
                                           "impostor_recovery", "mobile_connect"));

TEST(AttackTest, ReplayIsRejectedByTheSingleUseChecks) {
  Ran ran = RunNamed("replay_attack");
  std::set<std::string> errors;
  for (const Json& e : ran.log->Events()) {
    if (e.value("kind", "") == "op" && !e.value("ok", true)) errors.insert(e.value("error", ""));
  }
  EXPECT_TRUE(errors.contains("ReplayDetected"));
  EXPECT_EQ(AdversaryBreaches(ran.log->Events(), "mallory"), 0u);
}

TEST(AttackTest, HardwareExtractionWorksOnlyUntilTheLock) {
  Ran ran = RunNamed("hardware_theft");
  std::vector<Json> before, after;
  for (const Json& e : ran.log->Events()) {
    (e.at("at").get<std::int64_t>() < 1'000'003'000 ? before : after).push_back(e);
  }
  EXPECT_EQ(AdversaryBreaches(before, "lab"), 1u);
  EXPECT_EQ(AdversaryBreaches(after, "lab"), 0u);
}

TEST(AttackTest, MobileConnectCodeNeverReachesTheSp) {
  Ran ran = RunNamed("mobile_connect");
  std::string code;
  for (const Json& e : ran.log->Events()) {
    if (e.value("kind", "") == "send" && e.at("envelope").at("type") == msg::kMnoSms) {
      code = e.at("envelope").at("payload").at("code").get<std::string>();
    }
  }
  ASSERT_FALSE(code.empty());
  for (const Json& e : ran.log->Events()) {
    if (e.value("kind", "") == "send" && e.at("envelope").at("to") == "news.example") {
      EXPECT_EQ(e.at("envelope").dump().find(code), std::string::npos);
    }
  }
  // Redirecting the operator's SMS to the SP is the leak the check exists for.
  std::vector<Json> events = ran.log->Events();
  for (Json& e : events) {
    if (e.value("kind", "") == "send" && e.at("envelope").at("type") == msg::kMnoSms) {
      e["envelope"]["to"] = "news.example";
    }
  }
  EXPECT_TRUE(ValidateTrace(events).Violates("mc_opacity"));
}

// --------------------------------------------------------------- concurrent

TEST(ConcurrentRuntimeTest, ParallelLoginsKeepEveryInvariant) {
  EventLog log;
  const SimTime now = FromMillis(1'000'000'000);
  ConcurrentRuntime runtime(4, now, &log);
  crypto::Drbg rng(5);
  crypto::Drbg idp_rng = rng.Fork("idp");
  federation::IdpConfig config;
  config.origin = "https://idp.example";
  config.password_params = crypto::PasswordHashParams::Minimal();
  auto idp_core = std::make_unique<federation::IdentityProvider>(
      PrincipalId("idp.example"), config, crypto::SigningKey::Generate(idp_rng), idp_rng.Fork("r"));
  idp_core->RegisterClient(PrincipalId("shop.example"));
  auto sp_core = std::make_unique<federation::ServiceProvider>(
      PrincipalId("shop.example"), config.origin, idp_core->verify_key(), rng.Fork("sp"));
  IdpActor idp(std::move(idp_core));
  SpActor sp(std::move(sp_core), PrincipalId("idp.example"));
  runtime.AddActor(&idp);
  runtime.AddActor(&sp);
  constexpr std::size_t kUsers = 200;
  std::vector<std::unique_ptr<UserAgentActor>> agents;
  for (std::size_t i = 0; i < kUsers; ++i) {
    const PrincipalId user("user" + std::to_string(i));
    log.Append({{"kind", "principal"}, {"id", user.value()}, {"role", "User"}});
    agents.push_back(std::make_unique<UserAgentActor>(user, rng.Fork(user.value())));
    idp.idp().UpsertAccount(user.value(), {});
    const std::string password = "pw-" + user.value() + "-0123456789";
    idp.idp().SetPassword(user.value(), password);
    agents.back()->set_password(password);
    runtime.AddActor(agents.back().get());
  }
  for (auto& agent : agents) {
    agent->StartLogin(runtime, PrincipalId("shop.example"), {}, FlowMethod::kPassword);
  }
  runtime.WaitIdle();
  std::size_t granted = 0;
  for (auto& agent : agents) granted += agent->granted_count();
  EXPECT_EQ(granted, kUsers);
  EXPECT_EQ(runtime.failed_ops(), 0u);
  const TraceReport report = ValidateTrace(log.Events());
  EXPECT_TRUE(report.ok()) << report.ToJson().dump();
  EXPECT_EQ(report.clean_flows, kUsers);
  EXPECT_EQ(report.grants, kUsers);
}

// -------------------------------------------------------------------- bench

TEST(BenchTest, OneRepetitionIsInvalid) {
  auto r = RunLoadBenchmark(BenchFlow::kPlainPassword, {10}, 1);
  EXPECT_TRUE(HasErrorCode(r.status(), ErrorCode::kBenchmarkInvalid));
}

TEST(BenchTest, SizesMustAscend) {
  auto r = RunLoadBenchmark(BenchFlow::kPlainPassword, {20, 10}, 2);
  EXPECT_TRUE(HasErrorCode(r.status(), ErrorCode::kBenchmarkInvalid));
}

TEST(BenchTest, SmallRunReportsEveryRowWithSamples) {
  for (BenchFlow flow : {BenchFlow::kPlainPassword, BenchFlow::kFidoFederated,
                         BenchFlow::kPabacFederated}) {
    auto r = RunLoadBenchmark(flow, {10, 20}, 3, {.workers = 2});
    ASSERT_TRUE(r.ok()) << r.status();
    ASSERT_EQ(r->rows.size(), 2u);
    for (const BenchRow& row : r->rows) {
      EXPECT_EQ(row.samples.size(), 3u);
      EXPECT_LE(row.ci_low, row.mean);
      EXPECT_GE(row.ci_high, row.mean);
      EXPECT_GT(row.mean, 0.0);
    }
    const Json j = r->ToJson();
    EXPECT_EQ(j.at("flow"), std::string(BenchFlowName(flow)));
    EXPECT_EQ(j.at("rows")[1].at("samples_s").size(), 3u);
  }
}

TEST(BenchTest, ConfidenceIntervalMatchesTheTable) {
  // t(0.975, 4) = 2.776445 from a standard table; s = sqrt(2.5).
  EXPECT_NEAR(ConfidenceHalfWidth({1, 2, 3, 4, 5}), 2.776445 * std::sqrt(2.5) / std::sqrt(5.0),
              1e-5);
  // t(0.975, 9) = 2.262157.
  EXPECT_NEAR(ConfidenceHalfWidth({2, 4, 2, 4, 2, 4, 2, 4, 2, 4}),
              2.262157 * std::sqrt(10.0 / 9.0) / std::sqrt(10.0), 1e-5);
}

TEST(BenchTest, BatchRangeSyntax) {
  auto sizes = ParseBatchSizes("500:4000:500");
  ASSERT_TRUE(sizes.ok());
  EXPECT_EQ(sizes->size(), 8u);
  EXPECT_EQ(sizes->front(), 500u);
  EXPECT_EQ(sizes->back(), 4000u);
  EXPECT_EQ(*ParseBatchSizes("3,7"), (std::vector<std::size_t>{3, 7}));
  EXPECT_FALSE(ParseBatchSizes("5:1:1").ok());
}

TEST(BenchTest, RatiosNeedMatchingSizes) {
  BenchReport a, b;
  a.rows = {{.batch_size = 10, .mean = 2.0}};
  b.rows = {{.batch_size = 10, .mean = 1.0}};
  EXPECT_EQ(*OverheadRatios(a, b), std::vector<double>{2.0});
  b.rows[0].batch_size = 20;
  EXPECT_FALSE(OverheadRatios(a, b).ok());
}

}  // namespace
}  // namespace authsim::sim

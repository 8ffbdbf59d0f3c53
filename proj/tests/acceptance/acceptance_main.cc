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

// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
//
// Every event log the run produces lands under --out, and criterion 9 hands
// that whole directory to `authsim verify`.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "authsim/baa/authority.h"
#include "authsim/baa/profile.h"
#include "authsim/common/status.h"
#include "authsim/crypto/byte_scan.h"
#include "authsim/device/behavior.h"
#include "authsim/device/device.h"
#include "authsim/federation/idp.h"
#include "authsim/federation/sp.h"
#include "authsim/idc/recovery.h"
#include "authsim/pabac/issuer.h"
#include "authsim/pabac/linker.h"
#include "authsim/pabac/verifier.h"
#include "authsim/pabac/wallet.h"
#include "authsim/risk/population.h"
#include "authsim/risk/risk.h"
#include "authsim/sim/bench.h"
#include "authsim/sim/envelope.h"
#include "authsim/sim/event_log.h"
#include "authsim/sim/scenario.h"
#include "authsim/sim/trace_validator.h"
#include "authsim/sim/world.h"

namespace authsim {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;
using std::chrono::seconds;

// Pinned tolerances.
constexpr double kConformanceBudgetS = 5.0;
constexpr double kLadderBudgetS = 30.0;
constexpr std::size_t kLadderLength = 8;
constexpr int kAttackTrials = 1000;
constexpr int kLinkUsers = 10;
constexpr int kLinkTrials = 100;
constexpr int kPseudonymTokens = 10'000;
constexpr int kRiskQueries = 1000;
constexpr int kBaaTrials = 100;
constexpr int kBaaOwnerMinMatches = 95;
constexpr int kBaaImpostorMaxMatches = 5;
constexpr double kImpostorShiftSigmas = 5.0;
constexpr std::size_t kBenchFirst = 500, kBenchLast = 4000, kBenchStep = 500;
constexpr std::size_t kBenchReps = 10;
constexpr double kBenchBudgetS = 600.0;

struct Outcome {
  bool pass = false;
  std::string detail;
  // A failure explained in the README and accepted by --expect-fail. The
  // binary still prints FAIL for it.
  bool known_gap = false;
};

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Context {
  fs::path out;
  fs::path scenarios;
  const risk::PopulationTable* population = nullptr;
};

absl::StatusOr<sim::Scenario> Load(const Context& ctx, const std::string& name) {
  return sim::LoadScenario((ctx.scenarios / (name + ".json")).string());
}

struct LoggedRun {
  sim::RunResult result;
  std::vector<Json> events;
};

// Runs a scenario with its log persisted at `path`.
absl::StatusOr<LoggedRun> RunLogged(const Context& ctx, const sim::Scenario& scenario,
                                    std::optional<std::uint64_t> seed, const fs::path& path) {
  fs::create_directories(path.parent_path());
  AUTHSIM_ASSIGN_OR_RETURN(auto log, sim::EventLog::OpenPersistent(path.string()));
  sim::WorldOptions options;
  options.seed = seed;
  options.population = ctx.population;
  AUTHSIM_ASSIGN_OR_RETURN(sim::RunResult result, sim::RunScenario(scenario, options, log.get()));
  AUTHSIM_RETURN_IF_ERROR(log->Sync());
  return LoggedRun{std::move(result), log->Events()};
}

std::string Problems(const sim::RunResult& r) {
  std::string out;
  for (const auto& a : r.assertions) {
    if (!a.pass) absl::StrAppend(&out, " assertion ", a.name, " (", a.detail, ")");
  }
  for (const auto& v : r.trace.violations) absl::StrAppend(&out, " ", v.invariant, ": ", v.detail);
  return out;
}

// ------------------------------------------------------------ criterion 1

std::vector<Json> Renumber(std::vector<Json> events) {
  for (std::size_t i = 0; i < events.size(); ++i) events[i]["seq"] = i;
  return events;
}

// Send positions of each login flow's numbered steps, in log order.
std::map<std::string, std::vector<std::size_t>> StepSends(const std::vector<Json>& events) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Json& e = events[i];
    if (e.value("kind", "") != "send") continue;
    const Json& env = e.at("envelope");
    const std::string flow = env.at("payload").value("flow", "");
    if (!flow.empty() && sim::LoginStep(env.at("type").get<std::string>()) > 0) {
      out[flow].push_back(i);
    }
  }
  return out;
}

Outcome Conformance(const Context& ctx) {
  const auto t0 = Clock::now();
  auto scenario = Load(ctx, "federated_login");
  if (!scenario.ok()) return {false, std::string(scenario.status().message())};
  auto run = RunLogged(ctx, *scenario, std::nullopt, ctx.out / "c1" / "federated_login.jsonl");
  if (!run.ok()) return {false, std::string(run.status().message())};
  if (!run->result.ok()) return {false, "scenario failed:" + Problems(run->result)};
  const std::vector<Json>& events = run->events;

  const auto flows = StepSends(events);
  std::size_t conforming = 0;
  for (const auto& [flow, sends] : flows) {
    std::vector<int> steps;
    for (std::size_t i : sends) {
      steps.push_back(sim::LoginStep(events[i].at("envelope").at("type").get<std::string>()));
    }
    if (steps == std::vector<int>{1, 2, 3, 4, 5, 6}) ++conforming;
  }

  std::uint64_t max_id = 0;
  for (const Json& e : events) {
    if (e.value("kind", "") == "send") {
      max_id = std::max(max_id, e.at("envelope").at("msg_id").get<std::uint64_t>());
    }
  }
  int mutations = 0, rejected = 0;
  auto judge = [&](const std::vector<Json>& mutated) {
    ++mutations;
    rejected += sim::ValidateTrace(Renumber(mutated)).Violates("flow_conformance") ? 1 : 0;
  };
  for (const auto& [flow, steps] : flows) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const Json id = events[steps[k]].at("envelope").at("msg_id");
      std::vector<Json> dropped;
      for (const Json& e : events) {
        const bool refers = e.value("kind", "") == "send"
                                ? e.at("envelope").at("msg_id") == id
                                : e.contains("msg_id") && e.at("msg_id") == id;
        if (!refers) dropped.push_back(e);
      }
      judge(dropped);
      std::vector<Json> duplicated = events;
      Json copy = events[steps[k]];
      copy["envelope"]["msg_id"] = ++max_id;
      duplicated.insert(duplicated.begin() + static_cast<std::ptrdiff_t>(steps[k]) + 1, copy);
      judge(duplicated);
      if (k + 1 < steps.size()) {
        std::vector<Json> reordered = events;
        std::swap(reordered[steps[k]], reordered[steps[k + 1]]);
        judge(reordered);
      }
    }
  }
  const double elapsed = Since(t0);
  const bool unmutated_ok = sim::ValidateTrace(Renumber(events)).ok();
  const bool pass = !flows.empty() && conforming == flows.size() && unmutated_ok &&
                    mutations == 17 * static_cast<int>(flows.size()) && rejected == mutations &&
                    elapsed < kConformanceBudgetS;
  return {pass, absl::StrFormat("%zu/%zu flows in six-step order, %d/%d mutations rejected, "
                                "%.2f s (budget %.0f s)",
                                conforming, flows.size(), rejected, mutations, elapsed,
                                kConformanceBudgetS)};
}

// ------------------------------------------------------------ criterion 2

Outcome RecoveryLadder(const Context& ctx) {
  const auto t0 = Clock::now();
  const idc::LadderReport report = idc::CheckRecoveryLadder(kLadderLength);
  const double elapsed = Since(t0);
  // Every sequence over the event alphabet is walked: sum of 10^k, k <= 8.
  std::uint64_t expected = 0, power = 1;
  for (std::size_t k = 0; k <= kLadderLength; ++k, power *= idc::kRecoveryEventCount) {
    expected += power;
  }
  // The ladder also runs end to end: one genuine and one impostor recovery.
  std::string scenario_problems;
  for (const std::string name : {"device_recovery", "impostor_recovery"}) {
    auto scenario = Load(ctx, name);
    if (!scenario.ok()) return {false, std::string(scenario.status().message())};
    auto run = RunLogged(ctx, *scenario, std::nullopt, ctx.out / "c2" / (name + ".jsonl"));
    if (!run.ok()) return {false, std::string(run.status().message())};
    if (!run->result.ok()) absl::StrAppend(&scenario_problems, " ", name, ":", Problems(run->result));
  }
  const bool pass = report.ok() && report.sequences == expected &&
                    report.full_access_sequences > 0 && scenario_problems.empty() &&
                    elapsed < kLadderBudgetS;
  std::string detail = absl::StrFormat(
      "%d sequences (expected %d), %d reach FullAccess, shortcut/aal/containment violations "
      "%d/%d/%d, recovery scenarios %s, %.2f s (budget %.0f s)",
      report.sequences, expected, report.full_access_sequences, report.shortcut_violations,
      report.aal_violations, report.containment_violations,
      scenario_problems.empty() ? "pass" : "fail", elapsed, kLadderBudgetS);
  if (report.first_violation) absl::StrAppend(&detail, "; first violation ", *report.first_violation);
  return {pass, detail + scenario_problems};
}

// ------------------------------------------------------------ criterion 3

struct AttackCase {
  std::string label;
  std::string scenario;
  bool lock_split = false;
};

Outcome AdversarySuite(const Context& ctx) {
  const std::vector<AttackCase> cases = {
      {"Replay", "replay_attack"},
      {"CSRF", "csrf_attack"},
      {"AudienceMitM", "audience_mitm"},
      {"StolenDeviceWithoutGate", "stolen_device"},
      {"HardwareAttack", "hardware_theft", true},
  };
  bool pass = true;
  std::vector<std::string> parts;
  for (const AttackCase& c : cases) {
    auto scenario = Load(ctx, c.scenario);
    if (!scenario.ok()) return {false, std::string(scenario.status().message())};
    if (scenario->adversaries.size() != 1) return {false, c.scenario + " needs one adversary"};
    const std::string adversary = scenario->adversaries[0].id.value();
    // The lock propagates at the scheduled lock action.
    std::optional<std::int64_t> lock_at;
    for (const sim::ActionSpec& a : scenario->schedule) {
      if (a.action == "lock" && !lock_at) {
        lock_at = ToMillis(sim::WorldOptions{}.start + (a.at - SimTime{}));
      }
    }
    if (c.lock_split && !lock_at) return {false, c.scenario + " has no lock action"};
    std::size_t before = 0, after = 0, invalid_runs = 0, attempted = 0;
    for (int t = 0; t < kAttackTrials; ++t) {
      const std::uint64_t seed = 10'000 + static_cast<std::uint64_t>(t);
      auto run = RunLogged(ctx, *scenario, seed,
                           ctx.out / "c3" / c.scenario / absl::StrFormat("seed_%05d.jsonl", seed));
      if (!run.ok()) return {false, std::string(run.status().message())};
      if (!run->result.trace.ok()) ++invalid_runs;
      // A zero only counts if the adversary actually put traffic on the bus.
      attempted += std::any_of(run->events.begin(), run->events.end(), [&](const Json& e) {
        if (e.value("kind", "") != "send") return false;
        const Json& env = e.at("envelope");
        return env.value("from", "") == adversary || env.value("injected_by", "") == adversary;
      });
      if (c.lock_split) {
        std::vector<Json> pre, post;
        for (const Json& e : run->events) {
          (e.at("at").get<std::int64_t>() < *lock_at ? pre : post).push_back(e);
        }
        before += sim::AdversaryBreaches(pre, adversary);
        after += sim::AdversaryBreaches(post, adversary);
      } else {
        after += sim::AdversaryBreaches(run->events, adversary);
      }
    }
    if (c.lock_split) {
      // Extraction is a real threat until the lock, and nothing after it.
      pass = pass && before > 0 && after == 0 && invalid_runs == 0 && attempted == kAttackTrials;
      parts.push_back(absl::StrFormat("%s %zu before lock / %zu after", c.label, before, after));
    } else {
      pass = pass && after == 0 && invalid_runs == 0 && attempted == kAttackTrials;
      parts.push_back(absl::StrFormat("%s %zu", c.label, after));
    }
    if (attempted != kAttackTrials) parts.back() += absl::StrFormat(" (attempted in %zu)", attempted);
    if (invalid_runs > 0) parts.back() += absl::StrFormat(" (%zu invalid traces)", invalid_runs);
  }
  return {pass, absl::StrFormat("successes over %d trials each: %s", kAttackTrials,
                                absl::StrJoin(parts, ", "))};
}

// ------------------------------------------------------------ criterion 4

Outcome PabacPrivacy() {
  using identity::IdentityAttribute;
  const SimTime now = FromMillis(1'000);
  crypto::Drbg rng(404);
  std::map<std::string, std::vector<IdentityAttribute>> repo;
  crypto::Drbg key_rng = rng.Fork("rsa");
  pabac::CredentialIssuer issuer(
      PrincipalId("idp.gov"), pabac::GenerateRsaKey(2048, key_rng), rng.Fork("issuer"),
      [&repo](const std::string& user) -> const std::vector<IdentityAttribute>* {
        auto it = repo.find(user);
        return it == repo.end() ? nullptr : &it->second;
      });
  pabac::CredentialVerifier verifier;
  verifier.TrustIssuer(issuer.id(), issuer.public_key());

  const std::vector<std::string> countries = {"de", "fr", "it", "es", "nl"};
  std::vector<pabac::Wallet> wallets;
  std::vector<federation::Scope> truth;
  for (int u = 0; u < kLinkUsers; ++u) {
    const std::string user = absl::StrCat("holder", u);
    federation::Scope attrs = {
        {"over18", true},
        {"country", countries[static_cast<std::size_t>(u) % countries.size()]},
        // At least ten characters, so the full multi-encoding scan applies.
        {"email", absl::StrCat(rng.RandomHex(8), "@mail.example")},
    };
    for (const auto& [name, value] : attrs) repo[user].push_back({name, value, issuer.id(), now});
    wallets.emplace_back(PrincipalId(user));
    absl::Status s = pabac::IssueCredentials(issuer, wallets.back(), user, attrs, kLinkTrials, rng);
    if (!s.ok()) return {false, std::string(s.message())};
    truth.push_back(attrs);
  }
  const pabac::TranscriptIndex index(issuer.transcripts());

  const std::vector<std::set<std::string>> disclosures = {
      {"over18"}, {"over18", "country"}, {"over18", "email"}, {}};
  std::size_t presentations = 0, accepted = 0, links = 0, leaks = 0, double_spend = 0;
  for (int t = 0; t < kLinkTrials; ++t) {
    for (int u = 0; u < kLinkUsers; ++u) {
      const auto& disclose = disclosures[static_cast<std::size_t>(t + u) % disclosures.size()];
      const std::string nonce = rng.RandomHex(16);
      auto p = wallets[static_cast<std::size_t>(u)].PresentCovering(disclose, nonce);
      if (!p.ok()) return {false, std::string(p.status().message())};
      ++presentations;
      accepted += verifier.Verify(*p, nonce).accepted ? 1 : 0;
      links += index.Link(*p).size();
      const std::string bytes = CanonicalJson(pabac::PresentationToJson(*p));
      for (const auto& [name, value] : truth[static_cast<std::size_t>(u)]) {
        if (disclose.contains(name) || !std::holds_alternative<std::string>(value)) continue;
        const std::string& text = std::get<std::string>(value);
        // Short values show up in random base64 by chance, so they are
        // searched as their JSON token.
        const bool found = text.size() >= 10
                               ? crypto::ContainsEncoded(bytes, crypto::AsBytes(text))
                               : bytes.find(Json(text).dump()) != std::string::npos;
        leaks += found ? 1 : 0;
      }
      const pabac::VerificationResult again = verifier.Verify(*p, nonce);
      double_spend += !again.accepted && again.reason == pabac::RejectReason::kDoubleSpend ? 1 : 0;
    }
  }
  const double reject_rate = static_cast<double>(double_spend) / static_cast<double>(presentations);
  const bool pass = presentations == kLinkUsers * kLinkTrials && accepted == presentations &&
                    links == 0 && leaks == 0 && double_spend == presentations;
  return {pass, absl::StrFormat("%zu presentations (%zu accepted) against %zu transcripts: "
                                "%zu links, %zu undisclosed values found, double-spend "
                                "rejection %.1f%%",
                                presentations, accepted, issuer.transcripts().size(), links, leaks,
                                100.0 * reject_rate)};
}

// ------------------------------------------------------------ criterion 5

Outcome PseudonymUnlinkability() {
  const std::string kAccount = "user-4f1c9a2e";
  const std::string kOrigin = "https://idp.example";
  const DeviceId kDevice("phone-8d02b71c");
  crypto::Drbg rng(505);
  federation::IdentityProvider idp(PrincipalId("idp.example"), federation::IdpConfig{.origin = kOrigin},
                                   crypto::SigningKey::Generate(rng), rng.Fork("idp"));
  device::Device phone(kDevice, PrincipalId(kAccount), device::DeviceConfig{}, rng.Fork("device"));
  federation::ServiceProvider sp(PrincipalId("sp.shop"), kOrigin, idp.verify_key(), rng.Fork("sp"));
  idp.RegisterClient(sp.id());
  SimTime now = FromMillis(5'000'000);
  idp.UpsertAccount(kAccount, {{"over18", true, idp.id(), now}});
  auto challenge = idp.BeginRegistration(kAccount, now);
  if (!challenge.ok()) return {false, std::string(challenge.status().message())};
  if (auto g = phone.UnlockGate(true, now); !g.ok()) return {false, std::string(g.status().message())};
  auto reg = phone.EnrollKey(idp.id().value(), kAccount, *challenge, now);
  if (!reg.ok()) return {false, std::string(reg.status().message())};
  if (absl::Status s = idp.CompleteRegistration(*reg, now); !s.ok()) {
    return {false, std::string(s.message())};
  }

  const std::vector<std::string> attrs = {"over18"};
  std::set<std::string> subjects;
  int granted = 0;
  for (int i = 0; i < kPseudonymTokens; ++i) {
    now += milliseconds(10);
    const std::string sid = sp.BeginLogin(attrs);
    auto req = idp.BeginAuthorization(sp.id(), sid, attrs, now);
    if (!req.ok()) return {false, std::string(req.status().message())};
    if (auto g = phone.UnlockGate(true, now); !g.ok()) return {false, std::string(g.status().message())};
    auto assertion = phone.SignAssertion(idp.id().value(), kAccount, req->nonce, kOrigin, now);
    if (!assertion.ok()) return {false, std::string(assertion.status().message())};
    auto code = idp.CompleteFidoAuthentication(
        kAccount, *assertion, {{"over18", identity::ConsentDecision::kAllow}}, now);
    if (!code.ok()) return {false, std::string(code.status().message())};
    if (absl::Status s = sp.OnAuthnResponse(*code, kOrigin); !s.ok()) {
      return {false, std::string(s.message())};
    }
    auto token = idp.ExchangeCode(code->code, sp.id(), sid, code->csrf, now);
    if (!token.ok()) return {false, std::string(token.status().message())};
    auto v = sp.OnToken(sid, *token, now);
    if (v.ok() && v->valid) ++granted;
    subjects.insert(token->subject);
  }
  const std::string storage = sp.StorageBytes();
  const bool account_found = crypto::ContainsEncoded(storage, crypto::AsBytes(kAccount));
  const bool device_found = crypto::ContainsEncoded(storage, crypto::AsBytes(kDevice.value()));
  const bool pass = granted == kPseudonymTokens && subjects.size() == kPseudonymTokens &&
                    !account_found && !device_found;
  return {pass, absl::StrFormat("%d tokens granted, %zu distinct subjects, stable id in SP "
                                "storage: %d occurrences of account, %d of device (%zu bytes "
                                "scanned)",
                                granted, subjects.size(), account_found ? 1 : 0,
                                device_found ? 1 : 0, storage.size())};
}

// ------------------------------------------------------------ criterion 6

// Flat-scan oracle, independent of the population's bitset index.
bool RowMatches(const risk::PopulationTable& t, const std::vector<std::string>& row,
                const risk::AttributeAssignment& filter) {
  for (const auto& [name, value] : filter) {
    if (row[*t.ColumnIndex(name)] != value) return false;
  }
  return true;
}

std::optional<double> OracleInference(const risk::PopulationTable& t,
                                      const risk::AttributeAssignment& r,
                                      const std::string& hidden) {
  const std::size_t col = *t.ColumnIndex(hidden);
  std::size_t total = 0;
  std::map<std::string, std::size_t> by_value;
  for (const auto& row : t.rows()) {
    if (!RowMatches(t, row, r)) continue;
    ++total;
    ++by_value[row[col]];
  }
  if (total == 0) return std::nullopt;
  std::size_t best = 0;
  for (const auto& [v, n] : by_value) best = std::max(best, n);
  return static_cast<double>(best) / static_cast<double>(total);
}

std::optional<double> OracleRarity(const risk::PopulationTable& t,
                                   const risk::AttributeAssignment& d) {
  std::size_t k = 0;
  for (const auto& row : t.rows()) k += RowMatches(t, row, d) ? 1 : 0;
  if (k == 0) return std::nullopt;
  return 1.0 / static_cast<double>(k);
}

// Values come from one real row half of the time so most queries match.
risk::AttributeAssignment RandomAssignment(const risk::PopulationTable& t, crypto::Drbg& rng,
                                           std::size_t max_size, const std::string& exclude = "") {
  risk::AttributeAssignment out;
  const auto& anchor = t.rows()[rng.UniformInt(t.size())];
  const std::size_t want = rng.UniformInt(max_size + 1);
  for (std::size_t i = 0; i < want; ++i) {
    const std::size_t c = rng.UniformInt(t.columns().size());
    if (t.columns()[c] == exclude) continue;
    out[t.columns()[c]] = rng.UniformInt(2) == 0 ? anchor[c] : t.rows()[rng.UniformInt(t.size())][c];
  }
  return out;
}

// Adds one column not yet in `base` (and not `exclude`), valued from a row
// that satisfies `base` when one exists.
std::optional<risk::AttributeAssignment> Superset(const risk::PopulationTable& t,
                                                  const risk::AttributeAssignment& base,
                                                  crypto::Drbg& rng,
                                                  const std::string& exclude = "") {
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < t.columns().size(); ++c) {
    if (!base.contains(t.columns()[c]) && t.columns()[c] != exclude) free.push_back(c);
  }
  if (free.empty()) return std::nullopt;
  const std::size_t c = free[rng.UniformInt(free.size())];
  std::vector<const std::vector<std::string>*> matching;
  for (const auto& row : t.rows()) {
    if (RowMatches(t, row, base)) matching.push_back(&row);
  }
  const auto& source = matching.empty() ? t.rows()[rng.UniformInt(t.size())]
                                        : *matching[rng.UniformInt(matching.size())];
  risk::AttributeAssignment out = base;
  out[t.columns()[c]] = source[c];
  return out;
}

Outcome RiskOracle(const risk::PopulationTable& t) {
  crypto::Drbg rng(606);
  std::size_t inference_defined = 0, rarity_defined = 0, mismatches = 0;
  for (int i = 0; i < kRiskQueries; ++i) {
    const std::string hidden = t.columns()[rng.UniformInt(t.columns().size())];
    const risk::AttributeAssignment r = RandomAssignment(t, rng, 3, hidden);
    auto got = risk::InferenceRisk(r, hidden, t);
    const std::optional<double> want = OracleInference(t, r, hidden);
    if (got.ok() != want.has_value() || (want && got->score != *want) ||
        (!want && !HasErrorCode(got.status(), ErrorCode::kUndefined))) {
      ++mismatches;
    }
    inference_defined += want ? 1 : 0;

    risk::AttributeAssignment d = RandomAssignment(t, rng, 4);
    if (d.empty()) d[t.columns()[0]] = t.rows()[rng.UniformInt(t.size())][0];
    auto rarity = risk::PabacCombinationRisk(d, t);
    const std::optional<double> want_rarity = OracleRarity(t, d);
    if (rarity.ok() != want_rarity.has_value() || (want_rarity && rarity->score != *want_rarity)) {
      ++mismatches;
    }
    rarity_defined += want_rarity ? 1 : 0;
  }

  // Supersets: one more revealed attribute for inference, one more disclosed
  // attribute for rarity.
  std::size_t inference_pairs = 0, inference_drops = 0, expected_drops = 0;
  std::size_t rarity_pairs = 0, rarity_drops = 0;
  double worst_drop = 0;
  while (inference_pairs < static_cast<std::size_t>(kRiskQueries)) {
    const std::string hidden = t.columns()[rng.UniformInt(t.columns().size())];
    const risk::AttributeAssignment r = RandomAssignment(t, rng, 2, hidden);
    auto base = risk::InferenceRisk(r, hidden, t);
    auto bigger = Superset(t, r, rng, hidden);
    if (!base.ok() || !bigger) continue;
    auto grown = risk::InferenceRisk(*bigger, hidden, t);
    if (!grown.ok()) continue;
    ++inference_pairs;
    if (grown->score < base->score) {
      ++inference_drops;
      worst_drop = std::max(worst_drop, base->score - grown->score);
    }
    // The averaged form: summed best-guess counts over every value of the
    // added attribute never fall below the base count.
    std::string added;
    for (const auto& [name, value] : *bigger) {
      if (!r.contains(name)) added = name;
    }
    std::size_t sum = 0;
    for (const std::string& v : t.Values(added)) {
      risk::AttributeAssignment e = r;
      e[added] = v;
      if (auto part = risk::InferenceRisk(e, hidden, t); part.ok()) sum += part->numerator;
    }
    expected_drops += sum < base->numerator ? 1 : 0;
  }
  while (rarity_pairs < static_cast<std::size_t>(kRiskQueries)) {
    risk::AttributeAssignment d = RandomAssignment(t, rng, 3);
    if (d.empty()) continue;
    auto bigger = Superset(t, d, rng);
    if (!bigger) continue;
    auto small = risk::PabacCombinationRisk(d, t);
    auto big = risk::PabacCombinationRisk(*bigger, t);
    if (!small.ok() || !big.ok()) continue;
    ++rarity_pairs;
    rarity_drops += big->score < small->score ? 1 : 0;
  }

  const bool equivalence = mismatches == 0;
  const bool pass = equivalence && rarity_drops == 0 && inference_drops == 0;
  Outcome o;
  o.pass = pass;
  o.detail = absl::StrFormat(
      "oracle mismatches %zu over %d queries (%zu inference, %zu rarity defined); rarity "
      "supersets lowering the score %zu/%zu; inference supersets lowering the score %zu/%zu "
      "(largest drop %.4f); averaged guess accuracy drops %zu",
      mismatches, kRiskQueries, inference_defined, rarity_defined, rarity_drops, rarity_pairs,
      inference_drops, inference_pairs, worst_drop, expected_drops);
  // The literal inference statement is false for the max-posterior score:
  // conditioning can flatten the posterior. Everything else must hold for
  // the failure to count as that known gap.
  o.known_gap = !pass && equivalence && rarity_drops == 0 && expected_drops == 0 &&
                inference_drops > 0;
  return o;
}

// ------------------------------------------------------------ criterion 7

Outcome BaaSeparation() {
  const auto owner = device::FixtureOwnerGenerator();
  const auto impostor = device::ShiftedGenerator(owner, kImpostorShiftSigmas);
  const PrincipalId user("owner");
  const PrincipalId idc("idc.example");
  const DeviceId dev("owner.phone");
  int owner_matches = 0, impostor_matches = 0, changed = 0, checked = 0;
  for (int trial = 0; trial < kBaaTrials; ++trial) {
    crypto::Drbg rng(7000 + static_cast<std::uint64_t>(trial));
    baa::BehavioralAuthority baa(PrincipalId("baa.example"), baa::BaaConfig{},
                                 crypto::SigningKey::Generate(rng), rng.Fork("baa"));
    baa.EnrollUser(user, "backup");
    const baa::BaaConfig& config = baa.config();
    SimTime at = FromMillis(10'000);
    auto stream = [&](const device::BehaviorGenerator& gen, std::size_t n, SimTime start,
                      baa::AccessMode mode) -> absl::Status {
      for (std::size_t i = 0; i < n; ++i) {
        AUTHSIM_RETURN_IF_ERROR(
            baa.Ingest({dev, user, start + seconds(static_cast<int>(i)), gen.Sample(rng)}, mode));
      }
      return absl::OkStatus();
    };
    if (absl::Status s = stream(owner, config.training_min, at, baa::AccessMode::kFull); !s.ok()) {
      return {false, std::string(s.message())};
    }
    // Each window follows its own boundary; the injection lands just before
    // that boundary and is drawn from the other generator.
    auto window = [&](const device::BehaviorGenerator& gen, const device::BehaviorGenerator& other,
                      SimTime boundary) -> absl::StatusOr<baa::Verdict> {
      AUTHSIM_RETURN_IF_ERROR(stream(gen, config.n_min, boundary, baa::AccessMode::kTentative));
      AUTHSIM_ASSIGN_OR_RETURN(baa::Verdict clean, baa.ComputeVerdict({idc, user, boundary}));
      AUTHSIM_RETURN_IF_ERROR(
          stream(other, 10 * config.n_min, boundary - seconds(600), baa::AccessMode::kTentative));
      AUTHSIM_ASSIGN_OR_RETURN(baa::Verdict injected, baa.ComputeVerdict({idc, user, boundary}));
      ++checked;
      changed += injected != clean ? 1 : 0;
      return clean;
    };
    auto mine = window(owner, impostor, at + seconds(10'000));
    auto theirs = window(impostor, owner, at + seconds(20'000));
    if (!mine.ok()) return {false, std::string(mine.status().message())};
    if (!theirs.ok()) return {false, std::string(theirs.status().message())};
    owner_matches += *mine == baa::Verdict::kMatch ? 1 : 0;
    impostor_matches += *theirs == baa::Verdict::kMatch ? 1 : 0;
  }
  const bool pass = owner_matches >= kBaaOwnerMinMatches &&
                    impostor_matches <= kBaaImpostorMaxMatches && changed == 0;
  return {pass, absl::StrFormat("owner windows matched %d/%d (need >= %d), %.0f-sigma impostor "
                                "windows matched %d/%d (need <= %d), pre-boundary injection "
                                "changed %d/%d verdicts",
                                owner_matches, kBaaTrials, kBaaOwnerMinMatches,
                                kImpostorShiftSigmas, impostor_matches, kBaaTrials,
                                kBaaImpostorMaxMatches, changed, checked)};
}

// ------------------------------------------------------------ criterion 8

bool Overlap(const sim::BenchRow& a, const sim::BenchRow& b) {
  return a.ci_low <= b.ci_high && b.ci_low <= a.ci_high;
}

Outcome BenchmarkShape(const Context& ctx) {
  std::vector<std::size_t> sizes;
  for (std::size_t n = kBenchFirst; n <= kBenchLast; n += kBenchStep) sizes.push_back(n);
  const std::vector<sim::BenchFlow> flows = {sim::BenchFlow::kPlainPassword,
                                             sim::BenchFlow::kFidoFederated,
                                             sim::BenchFlow::kPabacFederated};
  const fs::path dir = ctx.out / "c8";
  fs::create_directories(dir);
  const auto t0 = Clock::now();
  std::vector<sim::BenchReport> reports;
  for (sim::BenchFlow flow : flows) {
    auto report = sim::RunLoadBenchmark(flow, sizes, kBenchReps);
    // (a): any failed login makes the run invalid.
    if (!report.ok()) return {false, "(a) " + std::string(report.status().message())};
    reports.push_back(*report);
  }
  const double elapsed = Since(t0);

  // (b)
  std::vector<std::string> b_breaks;
  for (const sim::BenchReport& r : reports) {
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      if (r.rows[i].mean < r.rows[i - 1].mean && !Overlap(r.rows[i], r.rows[i - 1])) {
        b_breaks.push_back(absl::StrCat(std::string(sim::BenchFlowName(r.flow)), "@",
                                        r.rows[i].batch_size));
      }
    }
  }
  // (c)
  std::vector<std::string> c_breaks;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double plain = reports[0].rows[i].mean, fido = reports[1].rows[i].mean,
                 pabac = reports[2].rows[i].mean;
    if (!(pabac >= fido && fido >= plain)) c_breaks.push_back(absl::StrCat(sizes[i]));
  }
  // (d): written, read back, one raw sample per repetition.
  bool d_ok = true;
  for (const sim::BenchReport& r : reports) {
    const fs::path path = dir / absl::StrCat("bench_", std::string(sim::BenchFlowName(r.flow)), ".json");
    std::ofstream(path) << r.ToJson().dump(2) << "\n";
    std::ifstream in(path);
    const Json back = Json::parse(in, nullptr, false);
    if (back.is_discarded() || !back.contains("rows") || back["rows"].size() != sizes.size()) {
      d_ok = false;
      continue;
    }
    for (const Json& row : back["rows"]) {
      d_ok = d_ok && row.contains("samples_s") && row["samples_s"].size() == kBenchReps;
    }
  }
  std::string means;
  for (std::size_t i = 0; i < sizes.size(); i += sizes.size() - 1) {
    absl::StrAppend(&means, means.empty() ? "" : "; ", "n=", sizes[i], " mean ms");
    for (const sim::BenchReport& r : reports) {
      absl::StrAppend(&means, " ", std::string(sim::BenchFlowName(r.flow)), " ",
                      absl::StrFormat("%.1f", 1000 * r.rows[i].mean));
    }
  }
  const bool pass = b_breaks.empty() && c_breaks.empty() && d_ok && elapsed < kBenchBudgetS;
  std::string detail = absl::StrFormat(
      "(a) 100%% success in %zu batches x %zu reps x 3 flows; (b) %zu significant decreases; "
      "(c) ordering broken at %zu sizes; (d) reports %s; %.1f s (budget %.0f s); %s",
      sizes.size(), kBenchReps, b_breaks.size(), c_breaks.size(), d_ok ? "written" : "malformed",
      elapsed, kBenchBudgetS, means);
  if (!b_breaks.empty()) absl::StrAppend(&detail, "; (b) at ", absl::StrJoin(b_breaks, ","));
  if (!c_breaks.empty()) absl::StrAppend(&detail, "; (c) at n=", absl::StrJoin(c_breaks, ","));

  // Timed runs go unlogged; a short logged run per flow feeds criterion 9.
  for (sim::BenchFlow flow : flows) {
    auto log = sim::EventLog::OpenPersistent(
        (dir / absl::StrCat("bench_", std::string(sim::BenchFlowName(flow)), ".jsonl")).string());
    if (!log.ok()) return {false, std::string(log.status().message())};
    auto traced = sim::RunLoadBenchmark(flow, {50, 100}, 2, {.log = log->get()});
    absl::Status synced = (*log)->Sync();
    if (!traced.ok() || !synced.ok()) {
      return {false, detail + "; logged run: " +
                         std::string((traced.ok() ? synced : traced.status()).message())};
    }
  }
  return {pass, detail};
}

// ------------------------------------------------------------ criterion 9

Outcome Determinism(const Context& ctx, const std::string& authsim) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(ctx.scenarios)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t identical = 0;
  std::vector<std::string> differing;
  for (const fs::path& file : files) {
    auto scenario = sim::LoadScenario(file.string());
    if (!scenario.ok()) return {false, std::string(scenario.status().message())};
    std::string text[2];
    for (int k = 0; k < 2; ++k) {
      auto run = RunLogged(ctx, *scenario, std::nullopt,
                           ctx.out / "c9" / absl::StrCat(file.stem().string(), "_", k, ".jsonl"));
      if (!run.ok()) return {false, std::string(run.status().message())};
      std::ifstream in(ctx.out / "c9" / absl::StrCat(file.stem().string(), "_", k, ".jsonl"),
                       std::ios::binary);
      std::ostringstream bytes;
      bytes << in.rdbuf();
      text[k] = bytes.str();
    }
    if (!text[0].empty() && text[0] == text[1]) {
      ++identical;
    } else {
      differing.push_back(file.stem().string());
    }
  }

  // Every log written by criteria 1-9 goes through the command-line verifier.
  const fs::path verdict = ctx.out / "verify.txt";
  const std::string command = absl::StrCat("\"", authsim, "\" verify --log \"", ctx.out.string(),
                                           "\" > \"", verdict.string(), "\" 2>&1");
  const int status = std::system(command.c_str());
  std::ifstream in(verdict);
  std::string last, line;
  while (std::getline(in, line)) last = line;
  const bool verified = status == 0 && last.rfind("ok (", 0) == 0;
  const bool pass = !files.empty() && identical == files.size() && verified;
  std::string detail = absl::StrFormat("%zu/%zu scenarios byte-identical across two runs; "
                                       "authsim verify: %s",
                                       identical, files.size(), last.empty() ? "no output" : last);
  if (!differing.empty()) absl::StrAppend(&detail, "; differ: ", absl::StrJoin(differing, ","));
  return {pass, detail};
}

}  // namespace
}  // namespace authsim

int main(int argc, char** argv) {
  using namespace authsim;
  CLI::App app{"Acceptance criteria 1-9"};
  std::string population_path, scenarios, out = "acceptance_out", authsim_path;
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--population", population_path, "Population CSV")->required();
  app.add_option("--scenarios", scenarios, "Scenario directory")->required();
  app.add_option("--out", out, "Output directory for logs and reports");
  app.add_option("--authsim", authsim_path, "authsim binary used to verify the logs")->required();
  app.add_option("--expect-fail", expect_fail,
                 "Criteria whose documented gap is accepted; still printed as FAIL");
  app.add_option("--only", only, "Run just these criteria");
  CLI11_PARSE(app, argc, argv);

  auto population = risk::PopulationTable::LoadCsv(population_path);
  if (!population.ok()) {
    std::cerr << "error: " << population.status().message() << "\n";
    return 2;
  }
  Context ctx{out, scenarios, &*population};
  std::error_code ec;
  fs::remove_all(ctx.out, ec);
  fs::create_directories(ctx.out);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, [&] { return Conformance(ctx); }},
      {2, [&] { return RecoveryLadder(ctx); }},
      {3, [&] { return AdversarySuite(ctx); }},
      {4, [] { return PabacPrivacy(); }},
      {5, [] { return PseudonymUnlinkability(); }},
      {6, [&] { return RiskOracle(*population); }},
      {7, [] { return BaaSeparation(); }},
      {8, [&] { return BenchmarkShape(ctx); }},
      {9, [&] { return Determinism(ctx, authsim_path); }},
  };
  int hard_failures = 0;
  Json summary = Json::array();
  for (const auto& [n, check] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    const auto t0 = Clock::now();
    const Outcome o = check();
    const bool expected = std::find(expect_fail.begin(), expect_fail.end(), n) != expect_fail.end();
    std::string note;
    if (!o.pass && expected && o.known_gap) {
      note = " [expected failure: documented gap]";
    } else if (!o.pass) {
      ++hard_failures;
    } else if (expected) {
      // A documented gap that closes is news; make it visible.
      note = " [unexpected pass: drop --expect-fail]";
      ++hard_failures;
    }
    std::printf("%s criterion %d: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str(),
                Since(t0), note.c_str());
    std::fflush(stdout);
    summary.push_back({{"criterion", n}, {"pass", o.pass}, {"detail", o.detail},
                       {"known_gap", o.known_gap}});
  }
  std::ofstream(fs::path(out) / "acceptance.json") << summary.dump(2) << "\n";
  return hard_failures == 0 ? 0 : 1;
}

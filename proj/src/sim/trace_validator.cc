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

#include "authsim/sim/trace_validator.h"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/idc/consolidator.h"
#include "authsim/sim/envelope.h"

namespace authsim::sim {
namespace {

std::string Str(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) return "";
  return j.at(key).get<std::string>();
}

std::uint64_t Seq(const Json& e) {
  return e.contains("seq") && e.at("seq").is_number_unsigned() ? e.at("seq").get<std::uint64_t>()
                                                               : 0;
}

bool IsOp(const Json& e, std::string_view op) {
  return Str(e, "kind") == "op" && Str(e, "op") == op;
}

bool IsOkOp(const Json& e, std::string_view op) {
  return IsOp(e, op) && e.value("ok", false);
}

struct StepMsg {
  std::uint64_t seq;
  int step;
  std::string from;
  std::string to;
};

struct FlowTrace {
  std::string method;
  bool attacked = false;
  std::vector<StepMsg> steps;
  std::vector<std::uint64_t> token_msgs;
  std::uint64_t first_seq = 0;
};

class Checker {
 public:
  explicit Checker(const std::vector<Json>& events) : events_(events) {}

  TraceReport Run() {
    report_.events = events_.size();
    Index();
    CheckStructure();
    CheckFlows();
    CheckOps();
    CheckStateReplay();
    std::stable_sort(report_.violations.begin(), report_.violations.end(),
                     [](const Violation& a, const Violation& b) { return a.seq < b.seq; });
    return std::move(report_);
  }

 private:
  void Fail(std::string invariant, std::uint64_t seq, std::string detail) {
    report_.violations.push_back({std::move(invariant), seq, std::move(detail)});
  }

  void Index() {
    for (const Json& e : events_) {
      const std::string kind = Str(e, "kind");
      if (kind == "principal") roles_[Str(e, "id")] = Str(e, "role");
      if (kind == "tap") reads_secure_[Str(e, "by")] = e.value("reads_secure", false);
      if (kind == "adversary") {
        std::set<std::string> caps;
        for (const auto& c : e.value("capabilities", Json::array())) caps.insert(c.get<std::string>());
        capabilities_[Str(e, "id")] = std::move(caps);
      }
    }
  }

  bool HasCapability(const std::string& who, const std::string& cap) const {
    auto it = capabilities_.find(who);
    return it != capabilities_.end() && it->second.contains(cap);
  }

  void CheckStructure() {
    std::set<std::uint64_t> sent;
    for (std::size_t i = 0; i < events_.size(); ++i) {
      const Json& e = events_[i];
      if (!e.is_object() || !e.contains("kind")) {
        Fail("log_structure", i, "event without kind");
        continue;
      }
      if (Seq(e) != i) Fail("log_structure", i, absl::StrCat("seq ", Seq(e), " at position ", i));
      const std::string kind = Str(e, "kind");
      if (kind == "send") {
        const std::uint64_t id = e.at("envelope").value("msg_id", std::uint64_t{0});
        if (!sent.insert(id).second) Fail("msg_id_unique", i, absl::StrCat("msg_id ", id));
      } else if (kind == "deliver" || kind == "observe" || kind == "drop") {
        const std::uint64_t id = e.value("msg_id", std::uint64_t{0});
        if (!sent.contains(id)) {
          Fail("log_structure", i, absl::StrCat(kind, " of unsent msg_id ", id));
        }
      } else if (kind == "assert" && !e.value("pass", false)) {
        Fail("assertion", i, Str(e, "name"));
      } else if (kind == "bench_batch" &&
                 e.value("successes", 0) != e.value("size", -1)) {
        Fail("benchmark_validity", i,
             absl::StrCat("batch ", e.value("size", -1), ": ", e.value("successes", 0),
                          " successes"));
      }
    }
  }

  void CheckFlows() {
    std::map<std::string, FlowTrace> flows;
    for (const Json& e : events_) {
      const std::string kind = Str(e, "kind");
      if (kind == "rewrite") {
        flows[Str(e.at("envelope").at("payload"), "flow")].attacked = true;
        continue;
      }
      if (kind != "send") continue;
      const Json& env = e.at("envelope");
      const Json& payload = env.at("payload");
      const std::string flow = Str(payload, "flow");
      if (flow.empty()) continue;
      FlowTrace& f = flows[flow];
      if (f.steps.empty() && f.token_msgs.empty()) f.first_seq = Seq(e);
      if (env.contains("injected_by")) {
        f.attacked = true;
        continue;
      }
      const std::string type = Str(env, "type");
      const int step = LoginStep(type);
      if (step == 1) f.method = Str(payload, "method");
      if (step > 0) {
        f.steps.push_back({Seq(e), step, Str(env, "from"), Str(env, "to")});
      } else if (type == msg::kTokenRequest || type == msg::kTokenResponse) {
        f.token_msgs.push_back(Seq(e));
      }
    }
    std::set<std::string> granted;
    for (const Json& e : events_) {
      if (IsOkOp(e, "sp.access")) granted.insert(Str(e.at("detail"), "flow"));
    }
    for (const auto& [flow, f] : flows) {
      // Mobile Connect logins take a different route; attacked flows are
      // judged by the security invariants instead.
      if (f.attacked || f.method == "mc") continue;
      if (f.method.empty() && f.steps.empty()) continue;
      ++report_.clean_flows;
      const std::uint64_t at = f.steps.empty() ? f.first_seq : f.steps.front().seq;
      for (std::size_t i = 0; i < f.steps.size(); ++i) {
        if (f.steps[i].step != static_cast<int>(i) + 1) {
          Fail("flow_conformance", f.steps[i].seq,
               absl::StrCat(flow, ": step ", f.steps[i].step, " where step ", i + 1,
                            " belongs"));
          break;
        }
      }
      const bool complete = f.steps.size() == 6;
      if (f.steps.size() > 6) {
        Fail("flow_conformance", at, absl::StrCat(flow, ": ", f.steps.size(), " step messages"));
      }
      if (granted.contains(flow) != (complete || f.steps.size() > 6)) {
        Fail("flow_conformance", at,
             absl::StrCat(flow, granted.contains(flow) ? ": granted with " : ": ",
                          f.steps.size(), " steps",
                          granted.contains(flow) ? "" : " but never granted"));
      }
      if (!complete) continue;
      // Who sends and receives each step: user, SP, IdP.
      const std::string user = f.steps[0].from, sp = f.steps[0].to, idp = f.steps[1].to;
      const std::array<std::pair<std::string, std::string>, 6> ends = {{
          {user, sp}, {sp, idp}, {idp, user}, {user, idp}, {idp, sp}, {sp, user}}};
      for (std::size_t i = 0; i < 6; ++i) {
        if (f.steps[i].from != ends[i].first || f.steps[i].to != ends[i].second) {
          Fail("flow_conformance", f.steps[i].seq,
               absl::StrCat(flow, ": step ", i + 1, " runs ", f.steps[i].from, " -> ",
                            f.steps[i].to));
        }
      }
      if (f.token_msgs.size() != 2) {
        Fail("flow_conformance", at,
             absl::StrCat(flow, ": ", f.token_msgs.size(), " token messages"));
      }
      for (std::uint64_t s : f.token_msgs) {
        if (s < f.steps[4].seq || s > f.steps[5].seq) {
          Fail("flow_conformance", s, absl::StrCat(flow, ": token exchange outside step 5"));
        }
      }
    }
  }

  void CheckOps() {
    std::map<std::pair<std::string, std::string>, int> per_session, per_flow;
    std::set<std::pair<std::string, std::string>> nonces;
    std::map<std::pair<std::string, std::string>, bool> locked;
    static const std::set<std::string> kManagement = {
        "idc.authorize_device", "idc.restore_credentials", "idc.view_pabac",
        "idc.edit_consent", "idc.store_backup"};
    for (const Json& e : events_) {
      const std::uint64_t seq = Seq(e);
      const std::string kind = Str(e, "kind");
      if (kind == "send") {
        const Json& env = e.at("envelope");
        const std::string to = Str(env, "to"), from = Str(env, "from");
        const std::string type = Str(env, "type");
        if (roles_[to] == "SP" &&
            (type.rfind(msg::kMnoPrefix, 0) == 0 || roles_[from] == "MNO")) {
          Fail("mc_opacity", seq, absl::StrCat(type, " from ", from, " reached SP ", to));
        }
        if (env.contains("replay_of") &&
            !HasCapability(Str(env, "injected_by"), "Replay")) {
          Fail("adversary_soundness", seq, "replay without the Replay capability");
        }
        continue;
      }
      if (kind == "observe" && e.value("secure", true) && e.value("read", false)) {
        const std::string by = Str(e, "by");
        if (!reads_secure_[by] || (capabilities_.contains(by) && !HasCapability(by, "MitM"))) {
          Fail("adversary_soundness", seq, absl::StrCat(by, " read a secure envelope"));
        }
        continue;
      }
      if (kind != "op") continue;
      const std::string actor = Str(e, "actor"), op = Str(e, "op");
      const Json& d = e.contains("detail") ? e.at("detail") : Json::object();
      const bool ok = e.value("ok", false);
      if (op == "adversary.steal") {
        if (!HasCapability(actor, "StealDevice") ||
            (d.contains("software_dump_bytes") && !HasCapability(actor, "SoftwareAttack")) ||
            (d.contains("extracted_keys") && !HasCapability(actor, "HardwareAttack"))) {
          Fail("adversary_soundness", seq, absl::StrCat(actor, " exceeded its device tier"));
        }
      }
      if (op == "idp.lock" && ok) {
        locked[{actor, Str(d, "account")}] = d.value("locked", false);
      }
      if (ok && (op == "idp.authenticate" || op == "idp.exchange")) {
        const std::string account = Str(d, "account");
        if (!account.empty() && locked[{actor, account}]) {
          Fail("lock_dominance", seq, absl::StrCat(op, " for locked account ", account));
        }
      }
      if (ok && op == "idp.authenticate" && !Str(d, "nonce").empty() &&
          !nonces.insert({actor, Str(d, "nonce")}).second) {
        Fail("nonce_single_use", seq, absl::StrCat("nonce accepted twice by ", actor));
      }
      if (ok && op == "sp.access") {
        ++report_.grants;
        if (Str(d, "audience") != actor) {
          Fail("audience_soundness", seq,
               absl::StrCat(actor, " granted on a token for ", Str(d, "audience")));
        }
        if (++per_session[{actor, Str(d, "session")}] > 1 ||
            ++per_flow[{actor, Str(d, "flow")}] > 1) {
          Fail("single_grant", seq, absl::StrCat("second grant for ", Str(d, "flow")));
        }
      }
      if (ok && kManagement.contains(op)) {
        const std::string aal = Str(d, "aal");
        if (aal != "AAL2" && aal != "AAL3") {
          Fail("tentative_containment", seq, absl::StrCat(op, " at ", aal));
        }
      }
    }
  }

  void CheckStateReplay() {
    std::map<std::string, std::vector<Json>> journals;
    std::map<std::string, std::pair<std::uint64_t, Json>> checkpoints;
    for (const Json& e : events_) {
      const std::string actor = Str(e, "actor");
      if (Str(e, "kind") == "op" && e.contains("detail") && e.at("detail").contains("journal")) {
        for (const Json& j : e.at("detail").at("journal")) journals[actor].push_back(j);
      }
      if (Str(e, "kind") == "checkpoint") checkpoints[actor] = {Seq(e), e.at("state")};
    }
    for (const auto& [actor, cp] : checkpoints) {
      crypto::Drbg rng(0);
      idc::IdentityConsolidator replica(PrincipalId(actor), idc::IdcConfig{},
                                        crypto::SigningKey::Generate(rng), rng.Fork("replica"));
      for (const Json& entry : journals[actor]) {
        if (auto s = replica.ApplyJournal(entry); !s.ok()) {
          Fail("state_replay", cp.first, absl::StrCat(actor, ": ", s.message()));
          break;
        }
      }
      if (CanonicalJson(replica.Checkpoint()) != CanonicalJson(cp.second)) {
        Fail("state_replay", cp.first, absl::StrCat(actor, ": replayed state differs"));
      }
    }
  }

  const std::vector<Json>& events_;
  TraceReport report_;
  std::map<std::string, std::string> roles_;
  std::map<std::string, bool> reads_secure_;
  std::map<std::string, std::set<std::string>> capabilities_;
};

}  // namespace

bool TraceReport::Violates(const std::string& invariant) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.invariant == invariant; });
}

Json TraceReport::ToJson() const {
  Json v = Json::array();
  for (const Violation& x : violations) {
    v.push_back({{"invariant", x.invariant}, {"seq", x.seq}, {"detail", x.detail}});
  }
  return {{"events", events},
          {"clean_flows", clean_flows},
          {"grants", grants},
          {"ok", ok()},
          {"violations", v}};
}

TraceReport ValidateTrace(const std::vector<Json>& events) { return Checker(events).Run(); }

std::size_t AdversaryBreaches(const std::vector<Json>& events, const std::string& adversary) {
  std::size_t breaches = 0;
  std::map<std::pair<std::string, std::string>, int> per_flow;
  for (const Json& e : events) {
    if (!IsOkOp(e, "sp.access")) continue;
    const Json& d = e.at("detail");
    if (Str(d, "agent") == adversary || Str(d, "via") == adversary) ++breaches;
    if (++per_flow[{Str(e, "actor"), Str(d, "flow")}] > 1) ++breaches;
  }
  return breaches;
}

}  // namespace authsim::sim

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

#include "authsim/sim/world.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "authsim/common/status.h"
#include "authsim/device/behavior.h"
#include "authsim/identity/attributes.h"
#include "authsim/pabac/blind_rsa.h"
#include "authsim/risk/ledger.h"

namespace authsim::sim {
namespace {

using std::chrono::seconds;

constexpr std::size_t kRsaBits = 2048;
constexpr std::size_t kTrainingRecords = 50;
constexpr std::size_t kRecoveryRecords = 20;
constexpr double kImpostorShift = 5.0;

std::string RawValue(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

absl::StatusOr<std::vector<identity::IdentityAttribute>> Normalize(const Json& attributes,
                                                                   const PrincipalId& source,
                                                                   SimTime at) {
  const auto schema = identity::AttributeSchema::Default();
  std::vector<identity::IdentityAttribute> out;
  for (const auto& [name, value] : attributes.items()) {
    AUTHSIM_ASSIGN_OR_RETURN(identity::IdentityAttribute a,
                             identity::NormalizeAttribute(schema, name, RawValue(value), source, at));
    out.push_back(std::move(a));
  }
  return out;
}

Json ScopeArg(const Json& scope) {
  if (scope.is_string()) return {{"all", true}};
  return {{"entities", scope}};
}

std::vector<std::string> Strings(const Json& args, const char* key) {
  return args.value(key, std::vector<std::string>{});
}

}  // namespace

bool RunResult::ok() const {
  for (const AssertionResult& a : assertions) {
    if (!a.pass) return false;
  }
  return trace.ok();
}

World::World(const Scenario& scenario, WorldOptions options, EventLog* log)
    : scenario_(scenario),
      options_(options),
      log_(log),
      rng_(options.seed.value_or(scenario.seed)),
      runtime_(log, Runtime::Options{std::chrono::milliseconds(5), options.start}),
      owner_behavior_(device::FixtureOwnerGenerator()) {}

World::~World() = default;

absl::StatusOr<std::unique_ptr<World>> World::Build(const Scenario& scenario,
                                                    WorldOptions options, EventLog* log) {
  if (log == nullptr) return MakeError(ErrorCode::kInvalidArgument, "a world needs an event log");
  std::unique_ptr<World> world(new World(scenario, options, log));
  AUTHSIM_RETURN_IF_ERROR(world->Setup());
  return world;
}

UserAgentActor* World::Agent(const PrincipalId& id) {
  auto it = agents_.find(id);
  return it == agents_.end() ? nullptr : it->second.get();
}
SpActor* World::Sp(const PrincipalId& id) {
  auto it = sps_.find(id);
  return it == sps_.end() ? nullptr : it->second.get();
}
IdpActor* World::Idp(const PrincipalId& id) {
  auto it = idps_.find(id);
  return it == idps_.end() ? nullptr : it->second.get();
}
Adversary* World::FindAdversary(const PrincipalId& id) {
  auto it = adversaries_.find(id);
  return it == adversaries_.end() ? nullptr : it->second.get();
}

void World::Op(std::string_view op, const absl::Status& s, Json detail) {
  runtime_.RecordOp(world_id_, op, s, std::move(detail));
}

absl::Status World::Setup() {
  using identity::Role;
  runtime_.Record({{"kind", "scenario"},
                   {"name", scenario_.name},
                   {"seed", options_.seed.value_or(scenario_.seed)}});
  for (const PrincipalSpec& p : scenario_.principals) {
    runtime_.Record({{"kind", "principal"},
                     {"id", p.id.value()},
                     {"role", std::string(identity::RoleName(p.role))}});
  }
  auto fork = [&](const PrincipalId& id) { return rng_.Fork(absl::StrCat("principal/", id.value())); };

  std::optional<PrincipalId> idc_id, mno_id;
  for (const PrincipalSpec& p : scenario_.principals) {
    crypto::Drbg prng = fork(p.id);
    if (p.role == Role::kMno && !mno_) {
      mno_ = std::make_unique<idc::MnoIdp>(p.id, crypto::SigningKey::Generate(prng), prng.Fork("mno"));
      mno_id = p.id;
    } else if (p.role == Role::kBaa && !baa_) {
      baa_ = std::make_unique<baa::BehavioralAuthority>(p.id, baa::BaaConfig{},
                                                        crypto::SigningKey::Generate(prng),
                                                        prng.Fork("baa"));
    } else if (p.role == Role::kIdc && !idc_) {
      idc_ = std::make_unique<idc::IdentityConsolidator>(
          p.id, idc::IdcConfig{}, crypto::SigningKey::Generate(prng), prng.Fork("idc"),
          options_.population);
      documents_ = std::make_unique<idc::DocumentAuthority>(PrincipalId("documents.office"), prng);
      idc_id = p.id;
    }
  }
  if (idc_) {
    idc_->AddAdmin(admin_);
    idc_->TrustDocumentAuthority(documents_->verify_key());
    for (const PrincipalSpec& p : scenario_.principals) {
      std::optional<std::pair<idc::EntityKind, identity::Aal>> kind;
      switch (p.role) {
        case Role::kSp: kind = {idc::EntityKind::kSp, identity::Aal::kNone}; break;
        case Role::kIdp: kind = {idc::EntityKind::kIdp, identity::Aal::kAal2}; break;
        case Role::kBaa: kind = {idc::EntityKind::kBaa, identity::Aal::kAal2}; break;
        case Role::kMno: kind = {idc::EntityKind::kMno, identity::Aal::kAal1}; break;
        default: break;
      }
      if (kind) AUTHSIM_RETURN_IF_ERROR(idc_->RegisterEntity(admin_, p.id, kind->first, kind->second));
    }
    if (baa_) idc_->TrustEntityKey(baa_->id(), baa_->verify_key());
    if (mno_) {
      idc_->AttachMno(mno_.get());
      idc_->MapMcAttribute("msisdn", mno_->id());
    }
    idc_actor_ = std::make_unique<IdcActor>(idc_.get(), mno_id);
    runtime_.AddActor(idc_actor_.get());
  }

  for (const PrincipalSpec& p : scenario_.principals) {
    if (p.role != Role::kIdp) continue;
    crypto::Drbg prng = fork(p.id);
    federation::IdpConfig config;
    config.origin = p.origin;
    config.password_params = crypto::PasswordHashParams::Minimal();
    auto idp = std::make_unique<federation::IdentityProvider>(
        p.id, config, crypto::SigningKey::Generate(prng), prng.Fork("idp"));
    federation::IdentityProvider* raw = idp.get();
    if (p.credentials) {
      crypto::Drbg key_rng = prng.Fork("rsa");
      issuers_[p.id] = std::make_unique<pabac::CredentialIssuer>(
          p.id, pabac::GenerateRsaKey(kRsaBits, key_rng), prng.Fork("issuer"),
          [raw](const std::string& account) { return raw->Attributes(account); });
      auto verifier = std::make_unique<pabac::CredentialVerifier>();
      verifier->TrustIssuer(p.id, issuers_[p.id]->public_key());
      raw->SetCredentialModule(std::make_unique<pabac::PabacAuthModule>(verifier.get()));
      verifiers_[p.id] = std::move(verifier);
    }
    idps_[p.id] = std::make_unique<IdpActor>(std::move(idp), idc_id);
    runtime_.AddActor(idps_[p.id].get());
  }

  for (const PrincipalSpec& p : scenario_.principals) {
    if (p.role != Role::kSp) continue;
    crypto::Drbg prng = fork(p.id);
    std::string origin;
    crypto::VerifyKey key;
    if (IdpActor* idp = Idp(p.idp)) {
      origin = idp->idp().config().origin;
      key = idp->idp().verify_key();
      idp->idp().RegisterClient(p.id);
    } else if (idc_ && p.idp == idc_->id()) {
      origin = absl::StrCat("https://", idc_->id().value());
      key = idc_->verify_key();
    } else {
      return MakeError(ErrorCode::kScenarioError,
                       absl::StrCat("line ", p.line, ": ", p.id.value(), " has no usable IdP"));
    }
    auto sp = std::make_unique<federation::ServiceProvider>(p.id, origin, key, prng.Fork("sp"));
    sps_[p.id] = std::make_unique<SpActor>(std::move(sp), p.idp);
    const PrincipalId sp_id = p.id;
    sps_[p.id]->set_grant_hook(
        [this, sp_id](const std::string& flow, const PrincipalId& agent,
                      const federation::TokenValidation& v) { RecordDisclosure(sp_id, flow, agent, v); });
    runtime_.AddActor(sps_[p.id].get());
  }

  for (const PrincipalSpec& p : scenario_.principals) {
    if (p.role != Role::kUser) continue;
    crypto::Drbg prng = fork(p.id);
    auto agent = std::make_unique<UserAgentActor>(p.id, prng.Fork("agent"));
    for (const DeviceSpec& d : p.devices) {
      device::DeviceConfig config;
      config.tee_grade = d.tee;
      agent->AddDevice(std::make_unique<device::Device>(
          d.id, p.id, config, prng.Fork(absl::StrCat("device/", d.id.value()))));
    }
    agent->set_password(p.password);
    agent->set_refused({p.refuse.begin(), p.refuse.end()});
    for (auto& [id, idp] : idps_) {
      AUTHSIM_ASSIGN_OR_RETURN(auto attributes, Normalize(p.attributes, id, options_.start));
      idp->idp().UpsertAccount(p.id.value(), std::move(attributes));
      if (!p.password.empty()) idp->idp().SetPassword(p.id.value(), p.password);
    }
    if (mno_ && !p.msisdn.empty()) mno_->AddSubscriber(p.id, p.msisdn, {});
    if (baa_ && !p.baa_password.empty()) {
      baa_->EnrollUser(p.id, p.baa_password);
      const DeviceId history(absl::StrCat("history/", p.id.value()));
      for (std::size_t i = 0; i < kTrainingRecords; ++i) {
        device::BehavioralRecord r{history, p.id,
                                   options_.start - seconds(kTrainingRecords * 60 - i * 60),
                                   owner_behavior_.Sample(prng)};
        AUTHSIM_RETURN_IF_ERROR(baa_->Ingest(r, baa::AccessMode::kFull));
      }
    }
    if (idc_ && !p.backup_password.empty()) {
      AUTHSIM_ASSIGN_OR_RETURN(auto identity, Normalize(p.attributes, idc_->id(), options_.start));
      if (p.document.is_object()) {
        const idc::IdentityDocument doc = documents_->Issue(
            p.document.value("document_id", std::string("D1")), p.document.value("name", std::string()),
            p.document.value("birthdate", std::string()), p.document.value("country", std::string()));
        AUTHSIM_ASSIGN_OR_RETURN(
            auto acquired, idc::AcquireDocument(idc::DocumentToText(doc), documents_->verify_key(),
                                                identity::AttributeSchema::Default(),
                                                idc_->DocumentSource(), options_.start));
        for (const auto& a : acquired) {
          identity::TrustTable trust;
          trust.Set(idc_->DocumentSource(), 100);
          identity = identity::FuseAttributes(identity, a, trust);
        }
      }
      AUTHSIM_RETURN_IF_ERROR(idc_->EnrollUser(p.id, p.backup_password, std::move(identity)));
      for (const PrincipalSpec& e : scenario_.principals) {
        if (e.role != Role::kUser && e.role != Role::kIdc) {
          AUTHSIM_RETURN_IF_ERROR(idc_->LinkUser(p.id, e.id));
        }
      }
      agent->set_idc_session(idc_->OpenSession(p.id, identity::Aal::kAal2).session_id);
    }
    runtime_.AddActor(agent.get());
    agents_[p.id] = std::move(agent);
  }

  for (const AdversarySpec& a : scenario_.adversaries) {
    AUTHSIM_ASSIGN_OR_RETURN(
        auto adversary,
        Adversary::Create(a.id, a.capabilities, a.strategy, fork(a.id).Fork("adversary")));
    runtime_.Record({{"kind", "adversary"},
                     {"id", a.id.value()},
                     {"capabilities", a.capabilities.Names()},
                     {"strategy", std::string(StrategyName(a.strategy))}});
    runtime_.AddActor(adversary.get());
    if (a.capabilities.Has(Capability::kReplay) || a.capabilities.Has(Capability::kMitM)) {
      runtime_.AddInterceptor(adversary.get());
    }
    adversaries_[a.id] = std::move(adversary);
  }
  if (idc_actor_) idc_actor_->Record(runtime_, "idc.setup", absl::OkStatus(), Json::object());
  return absl::OkStatus();
}

absl::Status World::Enroll(UserAgentActor& agent, const DeviceId& device_id, IdpActor& idp) {
  device::Device* d = agent.FindDevice(device_id);
  if (d == nullptr) return MakeError(ErrorCode::kNotFound, "device not held by the user");
  const std::string account = agent.address().value();
  const SimTime now = runtime_.Now();
  AUTHSIM_ASSIGN_OR_RETURN(std::string challenge, idp.idp().BeginRegistration(account, now));
  // The owner is present at enrollment.
  AUTHSIM_RETURN_IF_ERROR(d->UnlockGate(true, now).status());
  AUTHSIM_ASSIGN_OR_RETURN(device::Registration reg,
                           d->EnrollKey(idp.address().value(), account, challenge, now));
  return idp.idp().CompleteRegistration(reg, now);
}

void World::RecordDisclosure(const PrincipalId& sp, const std::string& flow,
                             const PrincipalId& agent, const federation::TokenValidation& v) {
  if (!idc_ || idc_->Identity(agent) == nullptr) return;
  std::vector<std::string> names;
  for (const auto& [name, value] : v.scope) {
    idc_->RecordDisclosure(risk::DisclosureEntry{agent, sp, name, identity::ValueToString(value),
                                                 flow, risk::DisclosureProtocol::kFederated,
                                                 runtime_.Now()});
    names.push_back(name);
  }
  idc_actor_->Record(runtime_, "idc.disclose", absl::OkStatus(),
                     {{"user", agent.value()}, {"sp", sp.value()}, {"attributes", names}});
}

void World::Perform(const ActionSpec& action) {
  const Json& a = action.args;
  runtime_.Record({{"kind", "action"}, {"action", action.action}, {"line", action.line}, {"args", a}});
  const std::string& act = action.action;
  auto user = [&](const char* key) { return Agent(PrincipalId(a.value(key, std::string()))); };
  if (act == "enroll") {
    UserAgentActor* agent = user("user");
    IdpActor* idp = Idp(PrincipalId(a.at("idp").get<std::string>()));
    const DeviceId device(a.at("device").get<std::string>());
    Op("idp.register", Enroll(*agent, device, *idp),
       {{"account", agent->address().value()}, {"idp", idp->address().value()},
        {"device", device.value()}});
  } else if (act == "login") {
    UserAgentActor* agent = user("user");
    if (a.contains("biometric")) agent->set_biometric_present(a.at("biometric").get<bool>());
    const FlowMethod method = *ParseFlowMethod(a.value("method", std::string("fido")));
    last_flow_[agent->address()] = agent->StartLogin(
        runtime_, PrincipalId(a.at("sp").get<std::string>()), Strings(a, "attributes"), method);
  } else if (act == "issue_credentials") {
    UserAgentActor* agent = user("user");
    const PrincipalId issuer_id(a.at("idp").get<std::string>());
    federation::Scope scope;
    const auto* attributes = Idp(issuer_id)->idp().Attributes(agent->address().value());
    for (const std::string& name : Strings(a, "attributes")) {
      for (const auto& attr : *attributes) {
        if (attr.name == name) scope[name] = attr.value;
      }
    }
    crypto::Drbg rng = rng_.Fork(absl::StrCat("issue/", agent->address().value(), "/", action.line));
    const std::size_t count = a.value("count", 1);
    Op("pabac.issue",
       pabac::IssueCredentials(*issuers_[issuer_id], agent->wallet(), agent->address().value(),
                               scope, count, rng),
       {{"user", agent->address().value()}, {"issuer", issuer_id.value()}, {"count", count}});
  } else if (act == "steal") {
    const DeviceId device(a.at("device").get<std::string>());
    Adversary* thief = FindAdversary(PrincipalId(a.at("by").get<std::string>()));
    std::unique_ptr<device::Device> taken;
    for (auto& [id, agent] : agents_) {
      if (!taken) taken = agent->TakeDevice(device);
    }
    absl::Status s = taken ? thief->TakeDevice(std::move(taken), runtime_)
                           : MakeError(ErrorCode::kNotFound, "device not held by any user");
    Op("world.steal", s, {{"device", device.value()}, {"by", thief->address().value()}});
  } else if (act == "attack") {
    Adversary* adversary = FindAdversary(PrincipalId(a.at("by").get<std::string>()));
    const PrincipalId sp(a.at("sp").get<std::string>());
    std::optional<std::string> session;
    if (a.contains("victim")) {
      auto flow = last_flow_.find(PrincipalId(a.at("victim").get<std::string>()));
      if (flow != last_flow_.end()) session = Sp(sp)->SessionForFlow(flow->second);
    }
    adversary->Attack(runtime_, sp, session, Strings(a, "attributes"));
  } else if (act == "lock" || act == "unlock") {
    UserAgentActor* agent = user("user");
    Envelope e;
    e.from = agent->address();
    e.to = idc_ ? idc_->id() : PrincipalId("idc");
    e.type = std::string(act == "lock" ? msg::kSetLock : msg::kReleaseLock);
    std::string session = agent->idc_session();
    if (a.value("from_recovery", false) && idc_) {
      for (const Json& ev : log_->Events()) {
        if (ev.value("op", "") == "idc.recovery_start" && ev.value("ok", false) &&
            ev.at("detail").value("user", "") == agent->address().value()) {
          session = ev.at("detail").value("session", session);
        }
      }
    }
    e.payload = {{"session", session}, {"scope", ScopeArg(a.at("scope"))}};
    runtime_.Send(std::move(e));
  } else if (act == "report_loss") {
    const PrincipalId u(a.at("user").get<std::string>());
    absl::Status s = mno_ ? absl::OkStatus() : MakeError(ErrorCode::kNotFound, "no MNO");
    if (mno_) {
      mno_->ReportLost(u, DeviceId(a.at("device").get<std::string>()), runtime_.Now());
      mno_->IssueReplacementSim(u);
    }
    runtime_.RecordOp(mno_ ? mno_->id() : world_id_, "mno.report_lost", s,
                      {{"user", u.value()}, {"device", a.at("device")}});
  } else if (act == "set_biometric") {
    user("user")->set_biometric_present(a.value("present", true));
  } else if (act == "recover") {
    Recover(action);
  }
  [[maybe_unused]] absl::Status synced = log_->Sync();
}

void World::Recover(const ActionSpec& action) {
  const Json& a = action.args;
  const PrincipalId user(a.at("user").get<std::string>());
  const PrincipalSpec* spec = scenario_.Find(user);
  UserAgentActor* agent = Agent(user);
  const SimTime now = runtime_.Now();
  auto record = [&](std::string_view op, const absl::Status& s, Json detail) {
    detail["user"] = user.value();
    if (const idc::RecoverySession* r = idc_->Recovery(user)) {
      detail["state"] = std::string(idc::RecoveryStateName(r->state));
    }
    idc_actor_->Record(runtime_, op, s, std::move(detail));
    return s.ok();
  };
  if (!idc_ || !mno_ || !baa_) {
    record("idc.recovery_start", MakeError(ErrorCode::kNotFound, "recovery needs IDC, MNO and BAA"),
           {});
    return;
  }
  // 1. Backup password or identity document.
  std::optional<std::string> password, document;
  if (a.value("credential", std::string("password")) == "password") {
    password = a.value("backup_password", spec->backup_password);
  } else {
    const idc::IdentityDocument doc = documents_->Issue(
        spec->document.value("document_id", std::string("D1")), spec->document.value("name", std::string()),
        spec->document.value("birthdate", std::string()), spec->document.value("country", std::string()));
    document = idc::DocumentToText(doc);
  }
  auto session = idc_->StartRecovery(user, password, document, now);
  if (!record("idc.recovery_start", session.status(),
              {{"session", session.ok() ? session->session_id : ""},
               {"aal", session.ok() ? std::string(identity::AalName(session->aal)) : ""}})) {
    return;
  }
  auto aal_now = [&] { return std::string(identity::AalName(*idc_->SessionAal(session->session_id))); };
  if (a.value("probe_tentative", false)) {
    const absl::Status probe = idc_->AuthorizeNewDevice(session->session_id);
    record("idc.authorize_device", probe, {{"aal", aal_now()}});
  }
  // 2. Mobile Connect with the operator's lost-device confirmation.
  if (a.value("report_loss", true) && !spec->devices.empty()) {
    mno_->ReportLost(user, spec->devices.front().id, now);
    mno_->IssueReplacementSim(user);
    runtime_.RecordOp(mno_->id(), "mno.report_lost", absl::OkStatus(),
                      {{"user", user.value()}, {"device", spec->devices.front().id.value()}});
  }
  auto sms = idc_->RecoveryBeginMc(user, now);
  if (!record("idc.recovery_mc_begin", sms.status(), {})) return;
  auto mc = idc_->RecoveryCompleteMc(user, sms->challenge_id, sms->code, now);
  if (!record("idc.recovery_mc", mc.status(), {})) return;
  // 3. Tentative BAA login, then behavior from the replacement device.
  auto access = baa_->Login(user, spec->baa_password, now);
  runtime_.RecordOp(baa_->id(), "baa.login", access.status(), {{"user", user.value()}});
  if (!access.ok()) return;
  if (!record("idc.recovery_baa_login", idc_->RecoveryBaaLogin(user, *access, now).status(), {})) {
    return;
  }
  if (!record("idc.recovery_streaming", idc_->RecoveryRecordsStreaming(user).status(), {})) return;
  const DeviceId new_id(a.at("new_device").get<std::string>());
  auto fresh = std::make_unique<device::Device>(
      new_id, user, device::DeviceConfig{}, rng_.Fork(absl::StrCat("device/", new_id.value())));
  const device::BehaviorGenerator gen =
      a.value("behavior", std::string("owner")) == "owner"
          ? owner_behavior_
          : device::ShiftedGenerator(owner_behavior_, kImpostorShift);
  absl::Status ingest = absl::OkStatus();
  for (const auto& r : fresh->EmitBehavior(gen, kRecoveryRecords, now + seconds(1), seconds(1))) {
    if (ingest.ok()) ingest = baa_->Ingest(r, baa::AccessMode::kTentative);
  }
  runtime_.RecordOp(baa_->id(), "baa.ingest", ingest,
                    {{"user", user.value()}, {"count", kRecoveryRecords}});
  auto request = idc_->RecoveryVerdictRequest(user);
  if (!record("idc.verdict_request", request.status(), {})) return;
  auto token = baa_->FederatedAssertion(*request, new_id, true, now + seconds(30));
  runtime_.RecordOp(
      baa_->id(), "baa.verdict", token.status(),
      {{"user", user.value()}, {"device", new_id.value()},
       {"behavior", token.ok() ? identity::ValueToString(token->scope.at("behavior")) : ""}});
  if (!token.ok()) return;
  if (!record("idc.recovery_verdict", idc_->RecoveryVerdict(user, *token, now + seconds(31)).status(),
              {})) {
    return;
  }
  if (idc_->Recovery(user)->state == idc::RecoveryState::kFailed) return;
  const absl::Status granted = idc_->RecoveryGrantFullAccess(user).status();
  if (!record("idc.recovery_grant", granted, {{"aal", aal_now()}})) return;
  // 4. New FIDO credentials at every IdP; the old ones are revoked.
  const absl::Status authorized = idc_->AuthorizeNewDevice(session->session_id);
  if (!record("idc.authorize_device", authorized, {{"aal", aal_now()}})) return;
  agent->AddDevice(std::move(fresh));
  agent->set_idc_session(session->session_id);
  for (auto& [id, idp] : idps_) {
    for (const auto& old : idp->idp().Authenticators(user.value())) {
      [[maybe_unused]] absl::Status revoked = idp->idp().RevokeAuthenticator(old.credential_id);
    }
    Op("idp.reenroll", Enroll(*agent, new_id, *idp),
       {{"account", user.value()}, {"idp", id.value()}, {"device", new_id.value()}});
  }
}

AssertionResult World::Evaluate(const AssertionSpec& spec, const std::vector<Json>& events,
                                const TraceReport& trace) {
  const Json& a = spec.args;
  AssertionResult r{spec.type, false, ""};
  if (spec.type == "flow_conformance") {
    r.pass = !trace.Violates("flow_conformance") && trace.clean_flows > 0;
    r.detail = absl::StrCat(trace.clean_flows, " clean flows");
  } else if (spec.type == "invariants") {
    r.pass = trace.ok();
    r.detail = trace.ok() ? "all hold" : trace.violations.front().invariant;
  } else if (spec.type == "granted" || spec.type == "denied") {
    UserAgentActor* agent = Agent(PrincipalId(a.at("user").get<std::string>()));
    const bool want = spec.type == "granted";
    std::size_t n = 0;
    for (const LoginOutcome& o : agent->outcomes()) {
      if (o.granted == want && (!a.contains("sp") || o.sp.value() == a.at("sp").get<std::string>())) ++n;
    }
    r.pass = n == a.value("count", std::size_t{1});
    r.detail = absl::StrCat(n, " ", spec.type);
  } else if (spec.type == "adversary_breaches") {
    const std::int64_t after = a.value("after", std::int64_t{-1});
    const std::int64_t before = a.value("before", std::numeric_limits<std::int64_t>::max());
    std::vector<Json> window;
    for (const Json& e : events) {
      const std::int64_t at = e.value("at", std::int64_t{0});
      if (at >= after && at < before) window.push_back(e);
    }
    const std::size_t n = AdversaryBreaches(window, a.at("by").get<std::string>());
    r.pass = n == a.value("count", std::size_t{0});
    r.detail = absl::StrCat(n, " breaches");
  } else if (spec.type == "locked") {
    const PrincipalId user(a.at("user").get<std::string>());
    const PrincipalId entity(a.at("entity").get<std::string>());
    const bool locked = Idp(entity) ? Idp(entity)->idp().IsAccountLocked(user.value())
                                    : (idc_ && idc_->IsLocked(user, entity));
    r.pass = locked == a.value("expected", true);
    r.detail = locked ? "locked" : "unlocked";
  } else if (spec.type == "recovery_state") {
    const idc::RecoverySession* rec = idc_ ? idc_->Recovery(PrincipalId(a.at("user").get<std::string>()))
                                           : nullptr;
    r.detail = rec ? std::string(idc::RecoveryStateName(rec->state)) : "none";
    r.pass = r.detail == a.at("state").get<std::string>();
  }
  return r;
}

absl::StatusOr<RunResult> World::Run() {
  for (const ActionSpec& action : scenario_.schedule) {
    runtime_.Schedule(options_.start + (action.at - SimEpoch()), [this, &action](Runtime&) { Perform(action); });
  }
  runtime_.Run();
  if (idc_) {
    if (Json rest = idc_actor_->TakeJournal(); !rest.empty()) {
      runtime_.RecordOp(idc_->id(), "idc.journal", absl::OkStatus(), {{"journal", rest}});
    }
    runtime_.Record({{"kind", "checkpoint"}, {"actor", idc_->id().value()}, {"state", idc_->Checkpoint()}});
  }
  RunResult result;
  const std::vector<Json> events = log_->Events();
  result.trace = ValidateTrace(events);
  for (const AssertionSpec& spec : scenario_.assertions) {
    AssertionResult r = Evaluate(spec, events, result.trace);
    runtime_.Record({{"kind", "assert"},
                     {"name", r.name},
                     {"line", spec.line},
                     {"pass", r.pass},
                     {"detail", r.detail}});
    result.assertions.push_back(std::move(r));
  }
  AUTHSIM_RETURN_IF_ERROR(log_->Sync());
  return result;
}

absl::StatusOr<RunResult> RunScenario(const Scenario& scenario, WorldOptions options,
                                      EventLog* log) {
  AUTHSIM_ASSIGN_OR_RETURN(std::unique_ptr<World> world, World::Build(scenario, options, log));
  return world->Run();
}

}  // namespace authsim::sim

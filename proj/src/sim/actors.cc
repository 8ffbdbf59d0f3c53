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

#include "authsim/sim/actors.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "authsim/common/status.h"
#include "authsim/federation/token.h"
#include "authsim/pabac/credential.h"

namespace authsim::sim {
namespace {

using federation::ConsentDecisions;

Json StringList(const std::vector<std::string>& v) { return Json(v); }

std::vector<std::string> ReadList(const Json& json) {
  return json.get<std::vector<std::string>>();
}

Envelope Make(const PrincipalId& from, const PrincipalId& to, std::string_view type,
              Json payload) {
  Envelope e;
  e.from = from;
  e.to = to;
  e.type = std::string(type);
  e.payload = std::move(payload);
  return e;
}

absl::Status Malformed(const Json::exception& ex) {
  return MakeError(ErrorCode::kSchemaError, ex.what());
}

}  // namespace

std::string_view FlowMethodName(FlowMethod method) {
  switch (method) {
    case FlowMethod::kFido: return "fido";
    case FlowMethod::kPassword: return "password";
    case FlowMethod::kCredential: return "credential";
    case FlowMethod::kMobileConnect: return "mc";
  }
  return "?";
}

std::optional<FlowMethod> ParseFlowMethod(std::string_view name) {
  for (FlowMethod m : {FlowMethod::kFido, FlowMethod::kPassword, FlowMethod::kCredential,
                       FlowMethod::kMobileConnect}) {
    if (FlowMethodName(m) == name) return m;
  }
  return std::nullopt;
}

absl::StatusOr<idc::LockScope> LockScopeFromJson(const Json& json) {
  try {
    if (json.is_object() && json.value("all", false)) return idc::LockScope::All();
    idc::LockScope scope;
    for (const auto& e : json.is_object() ? json.at("entities") : json) {
      scope.entities.insert(PrincipalId(e.get<std::string>()));
    }
    if (scope.empty()) return MakeError(ErrorCode::kInvalidArgument, "empty lock scope");
    return scope;
  } catch (const Json::exception& ex) {
    return Malformed(ex);
  }
}

Json LockScopeToJson(const idc::LockScope& scope) {
  if (scope.all) return {{"all", true}};
  Json entities = Json::array();
  for (const PrincipalId& e : scope.entities) entities.push_back(e.value());
  return {{"entities", entities}};
}

// ---------------------------------------------------------------------------
// UserAgentActor

UserAgentActor::UserAgentActor(PrincipalId user, crypto::Drbg rng)
    : user_(std::move(user)), rng_(std::move(rng)), wallet_(user_) {}

void UserAgentActor::AddDevice(std::unique_ptr<device::Device> d) {
  devices_.push_back(std::move(d));
}

device::Device* UserAgentActor::FindDevice(const DeviceId& id) {
  for (auto& d : devices_) {
    if (d->id() == id) return d.get();
  }
  return nullptr;
}

std::unique_ptr<device::Device> UserAgentActor::TakeDevice(const DeviceId& id) {
  for (auto it = devices_.begin(); it != devices_.end(); ++it) {
    if ((*it)->id() == id) {
      std::unique_ptr<device::Device> out = std::move(*it);
      devices_.erase(it);
      return out;
    }
  }
  return nullptr;
}

std::size_t UserAgentActor::granted_count() const {
  std::size_t n = 0;
  for (const LoginOutcome& o : outcomes_) n += o.granted ? 1 : 0;
  return n;
}

std::string UserAgentActor::StartLogin(Bus& bus, const PrincipalId& sp,
                                       std::vector<std::string> attributes,
                                       FlowMethod method) {
  std::string flow = absl::StrCat(user_.value(), "#", next_flow_++);
  pending_[flow] = Pending{sp, method};
  bus.Send(Make(user_, sp, msg::kLoginStart,
                {{"flow", flow},
                 {"attributes", StringList(attributes)},
                 {"method", std::string(FlowMethodName(method))}}));
  return flow;
}

ConsentDecisions UserAgentActor::Consent(const std::vector<std::string>& attributes) const {
  ConsentDecisions out;
  for (const std::string& a : attributes) {
    out[a] = refused_.contains(a) ? identity::ConsentDecision::kDeny
                                  : identity::ConsentDecision::kAllow;
  }
  return out;
}

void UserAgentActor::Handle(const Envelope& e, Bus& bus) {
  try {
    if (e.type == msg::kAuthnChallenge) {
      OnChallenge(e, bus);
    } else if (e.type == msg::kMnoSms) {
      OnSms(e, bus);
    } else if (e.type == msg::kLoginGranted) {
      Finish(e.payload.at("flow").get<std::string>(), true, "", bus);
    } else if (e.type == msg::kLoginDenied) {
      Finish(e.payload.at("flow").get<std::string>(), false,
             e.payload.value("error", std::string("denied")), bus);
    }
  } catch (const Json::exception& ex) {
    bus.RecordOp(user_, "agent.handle", Malformed(ex), {{"type", e.type}});
  }
}

void UserAgentActor::OnChallenge(const Envelope& e, Bus& bus) {
  const std::string flow = e.payload.at("flow").get<std::string>();
  auto pending = pending_.find(flow);
  if (pending == pending_.end()) {
    bus.RecordOp(user_, "agent.challenge", MakeError(ErrorCode::kNotFound, "unknown flow"),
                 {{"flow", flow}});
    return;
  }
  auto request = federation::RequestFromJson(e.payload.at("request"));
  if (!request.ok()) {
    bus.RecordOp(user_, "agent.challenge", request.status(), {{"flow", flow}});
    return;
  }
  Json reply = {{"flow", flow},
                {"method", std::string(FlowMethodName(pending->second.method))},
                {"account", user_.value()},
                {"nonce", request->nonce},
                {"consent", federation::ConsentDecisionsToJson(Consent(request->attributes))}};
  switch (pending->second.method) {
    case FlowMethod::kFido: {
      const std::string rp = e.from.value();
      device::Device* d = nullptr;
      for (auto& candidate : devices_) {
        if (candidate->HasKey(rp, user_.value())) d = candidate.get();
      }
      absl::Status s = absl::OkStatus();
      absl::StatusOr<device::Assertion> assertion =
          MakeError(ErrorCode::kNoCredential, "no device holds a key for this IdP");
      if (d != nullptr) {
        auto gate = d->UnlockGate(biometric_present_, bus.Now());
        if (!gate.ok()) {
          assertion = gate.status();
        } else {
          assertion = d->SignAssertion(rp, user_.value(), request->nonce, request->origin,
                                       bus.Now());
        }
      }
      bus.RecordOp(user_, "device.assert", assertion.status(),
                   {{"flow", flow}, {"device", d ? d->id().value() : ""}});
      if (!assertion.ok()) {
        Finish(flow, false, StatusLabel(assertion.status()), bus);
        return;
      }
      reply["assertion"] = device::AssertionToJson(*assertion);
      break;
    }
    case FlowMethod::kPassword:
      reply["password"] = password_;
      break;
    case FlowMethod::kCredential: {
      const std::set<std::string> wanted(request->attributes.begin(), request->attributes.end());
      auto presentation = wallet_.PresentCovering(wanted, request->nonce);
      bus.RecordOp(user_, "wallet.present", presentation.status(), {{"flow", flow}});
      if (!presentation.ok()) {
        Finish(flow, false, StatusLabel(presentation.status()), bus);
        return;
      }
      reply["presentation"] = pabac::PresentationToJson(*presentation);
      break;
    }
    case FlowMethod::kMobileConnect:
      bus.RecordOp(user_, "agent.challenge",
                   MakeError(ErrorCode::kInvalidArgument, "unexpected challenge"),
                   {{"flow", flow}});
      return;
  }
  bus.Send(Make(user_, e.from, msg::kAuthnResponse, std::move(reply)));
}

void UserAgentActor::OnSms(const Envelope& e, Bus& bus) {
  const std::string flow = e.payload.at("flow").get<std::string>();
  if (!pending_.contains(flow)) return;
  bus.Send(Make(user_, PrincipalId(e.payload.at("reply_to").get<std::string>()),
                msg::kAuthnResponse,
                {{"flow", flow},
                 {"method", "mc"},
                 {"proxy_id", e.payload.at("proxy_id")},
                 {"code", e.payload.at("code")}}));
}

void UserAgentActor::Finish(const std::string& flow, bool granted, std::string error,
                            Bus& bus) {
  auto it = pending_.find(flow);
  if (it == pending_.end()) return;
  outcomes_.push_back(LoginOutcome{flow, it->second.sp, granted, std::move(error), bus.Now()});
  pending_.erase(it);
}

// ---------------------------------------------------------------------------
// IdpActor

IdpActor::IdpActor(std::unique_ptr<federation::IdentityProvider> idp,
                   std::optional<PrincipalId> idc)
    : idp_(std::move(idp)), idc_(std::move(idc)) {}

void IdpActor::Handle(const Envelope& e, Bus& bus) {
  try {
    if (e.type == msg::kAuthnRequest) {
      OnAuthnRequest(e, bus);
    } else if (e.type == msg::kAuthnResponse) {
      OnAuthnResponse(e, bus);
    } else if (e.type == msg::kTokenRequest) {
      OnTokenRequest(e, bus);
    } else if (e.type == msg::kLockNotice) {
      OnLockNotice(e, bus);
    }
  } catch (const Json::exception& ex) {
    bus.RecordOp(address(), "idp.handle", Malformed(ex), {{"type", e.type}});
  }
}

void IdpActor::OnAuthnRequest(const Envelope& e, Bus& bus) {
  const Json& p = e.payload;
  const std::string flow = p.at("flow").get<std::string>();
  const PrincipalId agent(p.at("agent").get<std::string>());
  auto request = idp_->BeginAuthorization(e.from, p.at("session").get<std::string>(),
                                          ReadList(p.at("attributes")), bus.Now());
  bus.RecordOp(address(), "idp.authorize", request.status(),
               {{"flow", flow}, {"sp", e.from.value()},
                {"nonce", request.ok() ? request->nonce : ""}});
  if (!request.ok()) {
    bus.Send(Make(address(), agent, msg::kLoginDenied,
                  {{"flow", flow}, {"error", StatusLabel(request.status())}}));
    return;
  }
  agents_[request->nonce] = agent;
  bus.Send(Make(address(), agent, msg::kAuthnChallenge,
                {{"flow", flow},
                 {"method", p.at("method")},
                 {"request", federation::RequestToJson(*request)}}));
}

void IdpActor::OnAuthnResponse(const Envelope& e, Bus& bus) {
  const Json& p = e.payload;
  const std::string flow = p.at("flow").get<std::string>();
  const std::string method = p.at("method").get<std::string>();
  const std::string account = p.at("account").get<std::string>();
  const std::string nonce = p.at("nonce").get<std::string>();
  absl::StatusOr<federation::IssuedCode> code =
      MakeError(ErrorCode::kInvalidArgument, "unknown method");
  auto consent = federation::ConsentDecisionsFromJson(p.at("consent"));
  if (!consent.ok()) {
    code = consent.status();
  } else if (method == FlowMethodName(FlowMethod::kFido)) {
    auto assertion = device::AssertionFromJson(p.at("assertion"));
    code = assertion.ok() ? idp_->CompleteFidoAuthentication(account, *assertion, *consent,
                                                             bus.Now())
                          : absl::StatusOr<federation::IssuedCode>(assertion.status());
  } else if (method == FlowMethodName(FlowMethod::kPassword)) {
    code = idp_->CompletePasswordAuthentication(account, p.at("password").get<std::string>(),
                                                nonce, *consent, bus.Now());
  } else if (method == FlowMethodName(FlowMethod::kCredential)) {
    code = idp_->CompleteCredentialAuthentication(p.at("presentation"), nonce, bus.Now());
  }
  const bool anonymous = method == FlowMethodName(FlowMethod::kCredential);
  bus.RecordOp(address(), "idp.authenticate", code.status(),
               {{"flow", flow},
                {"method", method},
                {"account", anonymous ? "" : account},
                {"nonce", nonce},
                {"sp", code.ok() ? code->sp.value() : ""}});
  if (!code.ok()) {
    auto agent = agents_.find(nonce);
    // A failure for a live request goes back to the browser that owns it;
    // anything else (a replay, a guess) goes back to whoever sent it.
    const PrincipalId to = agent != agents_.end() ? agent->second : e.from;
    bus.Send(Make(address(), to, msg::kLoginDenied,
                  {{"flow", flow}, {"error", StatusLabel(code.status())}}));
    if (idc_ && !anonymous && idp_->HasAccount(account) &&
        HasErrorCode(code.status(), ErrorCode::kAuthenticationFailed)) {
      bus.Send(Make(address(), *idc_, msg::kAuthFailure, {{"user", account}}));
    }
    return;
  }
  agents_.erase(nonce);
  bus.Send(Make(address(), code->sp, msg::kAuthnCode,
                {{"flow", flow},
                 {"code", code->code},
                 {"sp", code->sp.value()},
                 {"session", code->redirect_session},
                 {"csrf", code->csrf},
                 {"origin", idp_->config().origin}}));
}

void IdpActor::OnTokenRequest(const Envelope& e, Bus& bus) {
  const Json& p = e.payload;
  const std::string flow = p.at("flow").get<std::string>();
  const std::string code = p.at("code").get<std::string>();
  const std::string session = p.at("session").get<std::string>();
  const std::optional<std::string> account = idp_->CodeAccount(code);
  auto token = idp_->ExchangeCode(code, e.from, session, p.at("csrf").get<std::string>(),
                                  bus.Now());
  bus.RecordOp(address(), "idp.exchange", token.status(),
               {{"flow", flow},
                {"sp", e.from.value()},
                {"account", account.value_or("")},
                {"audience", token.ok() ? token->audience.value() : ""}});
  Json reply = {{"flow", flow}, {"session", session}};
  if (token.ok()) {
    reply["token"] = federation::TokenToJson(*token);
  } else {
    reply["error"] = StatusLabel(token.status());
  }
  bus.Send(Make(address(), e.from, msg::kTokenResponse, std::move(reply)));
}

void IdpActor::OnLockNotice(const Envelope& e, Bus& bus) {
  const std::string user = e.payload.at("user").get<std::string>();
  const bool locked = e.payload.at("locked").get<bool>();
  absl::Status s = idp_->HasAccount(user)
                       ? absl::OkStatus()
                       : MakeError(ErrorCode::kNotFound, "no such account");
  if (s.ok()) idp_->SetAccountLocked(user, locked);
  bus.RecordOp(address(), "idp.lock", s, {{"account", user}, {"locked", locked}});
}

// ---------------------------------------------------------------------------
// SpActor

SpActor::SpActor(std::unique_ptr<federation::ServiceProvider> sp, PrincipalId idp)
    : sp_(std::move(sp)), idp_(std::move(idp)) {}

std::optional<std::string> SpActor::SessionForFlow(const std::string& flow) const {
  auto it = flow_sessions_.find(flow);
  if (it == flow_sessions_.end()) return std::nullopt;
  return it->second;
}

void SpActor::Handle(const Envelope& e, Bus& bus) {
  try {
    if (e.type == msg::kLoginStart) {
      OnLoginStart(e, bus);
    } else if (e.type == msg::kAuthnCode) {
      OnAuthnCode(e, bus);
    } else if (e.type == msg::kTokenResponse) {
      OnTokenResponse(e, bus);
    } else if (e.type == msg::kPresentToken) {
      OnPresentToken(e, bus);
    } else if (e.type == msg::kLockNotice) {
      bus.RecordOp(address(), "sp.lock_notice", absl::OkStatus(),
                   {{"user", e.payload.at("user")}, {"locked", e.payload.at("locked")}});
    }
  } catch (const Json::exception& ex) {
    bus.RecordOp(address(), "sp.handle", Malformed(ex), {{"type", e.type}});
  }
}

void SpActor::Deny(const PrincipalId& agent, const std::string& flow, const absl::Status& s,
                   Bus& bus) {
  bus.Send(Make(address(), agent, msg::kLoginDenied, {{"flow", flow}, {"error", StatusLabel(s)}}));
}

void SpActor::OnLoginStart(const Envelope& e, Bus& bus) {
  const std::string flow = e.payload.at("flow").get<std::string>();
  std::vector<std::string> wanted = ReadList(e.payload.at("attributes"));
  const std::string session = sp_->BeginLogin(wanted);
  sessions_[session] = FlowState{flow, e.from, PrincipalId()};
  flow_sessions_[flow] = session;
  bus.RecordOp(address(), "sp.login", absl::OkStatus(),
               {{"flow", flow}, {"session", session}, {"agent", e.from.value()}});
  bus.Send(Make(address(), idp_, msg::kAuthnRequest,
                {{"flow", flow},
                 {"session", session},
                 {"attributes", StringList(wanted)},
                 {"agent", e.from.value()},
                 {"method", e.payload.at("method")}}));
}

void SpActor::OnAuthnCode(const Envelope& e, Bus& bus) {
  const Json& p = e.payload;
  federation::IssuedCode code{p.at("code").get<std::string>(),
                              PrincipalId(p.at("sp").get<std::string>()),
                              p.at("session").get<std::string>(),
                              p.at("csrf").get<std::string>()};
  const std::string flow = p.at("flow").get<std::string>();
  absl::Status s = sp_->OnAuthnResponse(code, p.at("origin").get<std::string>());
  bus.RecordOp(address(), "sp.authn_response", s,
               {{"flow", flow}, {"session", code.redirect_session}, {"from", e.from.value()}});
  auto session = sessions_.find(code.redirect_session);
  // A rejected response is dropped without touching the victim's flow, so a
  // forged request cannot deny the genuine login either.
  if (!s.ok()) return;
  session->second.via = e.from;
  const std::string csrf = sp_->Session(code.redirect_session)->csrf.value_or("");
  bus.Send(Make(address(), idp_, msg::kTokenRequest,
                {{"flow", session->second.flow},
                 {"code", code.code},
                 {"session", code.redirect_session},
                 {"csrf", csrf}}));
}

void SpActor::OnTokenResponse(const Envelope& e, Bus& bus) {
  const Json& p = e.payload;
  const std::string session_id = p.at("session").get<std::string>();
  auto session = sessions_.find(session_id);
  if (session == sessions_.end() || e.from != idp_) {
    bus.RecordOp(address(), "sp.access",
                 MakeError(ErrorCode::kCsrfRejected, "token for an unknown session"),
                 {{"session", session_id}, {"from", e.from.value()}});
    return;
  }
  const FlowState& st = session->second;
  if (p.contains("error")) {
    absl::Status s = MakeError(
        ErrorCodeFromName(p.at("error").get<std::string>()).value_or(ErrorCode::kInvalidGrant),
        "token exchange failed");
    bus.RecordOp(address(), "sp.access", s, {{"flow", st.flow}, {"session", session_id}});
    Deny(st.agent, st.flow, s, bus);
    return;
  }
  auto token = federation::TokenFromJson(p.at("token"));
  absl::StatusOr<federation::TokenValidation> v =
      token.ok() ? sp_->OnToken(session_id, *token, bus.Now())
                 : absl::StatusOr<federation::TokenValidation>(token.status());
  absl::Status s = v.status();
  if (s.ok() && !v->valid) s = MakeError(*v->reason, "token rejected");
  Json detail = {{"flow", st.flow},
                 {"session", session_id},
                 {"agent", st.agent.value()},
                 {"via", st.via.value()},
                 {"audience", token.ok() ? token->audience.value() : ""},
                 {"subject", s.ok() ? v->subject : ""}};
  bus.RecordOp(address(), "sp.access", s, std::move(detail));
  if (!s.ok()) {
    Deny(st.agent, st.flow, s, bus);
    return;
  }
  ++grants_;
  if (hook_) hook_(st.flow, st.agent, *v);
  bus.Send(Make(address(), st.agent, msg::kLoginGranted,
                {{"flow", st.flow}, {"subject", v->subject}}));
}

void SpActor::OnPresentToken(const Envelope& e, Bus& bus) {
  // A bearer presenting a token directly, with no login of its own.
  const std::string flow = e.payload.at("flow").get<std::string>();
  auto token = federation::TokenFromJson(e.payload.at("token"));
  const std::string session = sp_->BeginLogin({});
  absl::StatusOr<federation::TokenValidation> v =
      token.ok() ? sp_->OnToken(session, *token, bus.Now())
                 : absl::StatusOr<federation::TokenValidation>(token.status());
  absl::Status s = v.status();
  if (s.ok() && !v->valid) s = MakeError(*v->reason, "token rejected");
  bus.RecordOp(address(), "sp.access", s,
               {{"flow", flow},
                {"session", session},
                {"agent", e.from.value()},
                {"via", e.from.value()},
                {"audience", token.ok() ? token->audience.value() : ""},
                {"subject", s.ok() ? v->subject : ""}});
  if (!s.ok()) {
    Deny(e.from, flow, s, bus);
    return;
  }
  ++grants_;
  if (hook_) hook_(flow, e.from, *v);
  bus.Send(Make(address(), e.from, msg::kLoginGranted, {{"flow", flow}, {"subject", v->subject}}));
}

// ---------------------------------------------------------------------------
// IdcActor

IdcActor::IdcActor(idc::IdentityConsolidator* idc, std::optional<PrincipalId> sms_gateway)
    : idc_(idc), sms_gateway_(std::move(sms_gateway)) {}

Json IdcActor::TakeJournal() {
  Json out = Json::array();
  const auto& journal = idc_->journal();
  for (; journal_mark_ < journal.size(); ++journal_mark_) out.push_back(journal[journal_mark_]);
  return out;
}

void IdcActor::Record(Bus& bus, std::string_view op, const absl::Status& s, Json detail) {
  detail["journal"] = TakeJournal();
  bus.RecordOp(address(), op, s, std::move(detail));
}

void IdcActor::FlushNotices(Bus& bus) {
  for (const idc::LockNotification& n : idc_->DrainNotifications()) {
    bus.Send(Make(address(), n.entity, msg::kLockNotice,
                  {{"user", n.user.value()}, {"locked", n.locked}}));
  }
}

void IdcActor::Handle(const Envelope& e, Bus& bus) {
  try {
    if (e.type == msg::kSetLock) {
      OnLock(e, bus, true);
    } else if (e.type == msg::kReleaseLock) {
      OnLock(e, bus, false);
    } else if (e.type == msg::kAuthFailure) {
      OnAuthFailure(e, bus);
    } else if (e.type == msg::kAuthnRequest) {
      OnMcRequest(e, bus);
    } else if (e.type == msg::kAuthnResponse) {
      OnMcResponse(e, bus);
    }
  } catch (const Json::exception& ex) {
    bus.RecordOp(address(), "idc.handle", Malformed(ex), {{"type", e.type}});
  }
}

void IdcActor::OnLock(const Envelope& e, Bus& bus, bool lock) {
  const std::string session = e.payload.at("session").get<std::string>();
  auto scope = LockScopeFromJson(e.payload.at("scope"));
  absl::Status s = scope.status();
  if (s.ok()) {
    s = lock ? idc_->SetLock(session, *scope, bus.Now()).status()
             : idc_->ReleaseLock(session, *scope).status();
  }
  Json detail = {{"from", e.from.value()}, {"scope", e.payload.at("scope")}};
  if (auto found = idc_->Session(session); found.ok()) {
    detail["user"] = found->user.value();
    detail["aal"] = std::string(identity::AalName(*idc_->SessionAal(session)));
  }
  Record(bus, lock ? "idc.lock" : "idc.release", s, std::move(detail));
  FlushNotices(bus);
}

void IdcActor::OnAuthFailure(const Envelope& e, Bus& bus) {
  const PrincipalId user(e.payload.at("user").get<std::string>());
  auto state = idc_->ReportAuthFailure(user, bus.Now());
  Record(bus, "idc.risk", absl::OkStatus(),
         {{"user", user.value()}, {"from", e.from.value()}, {"locked", state.has_value()}});
  FlushNotices(bus);
}

void IdcActor::OnMcRequest(const Envelope& e, Bus& bus) {
  const Json& p = e.payload;
  const std::string flow = p.at("flow").get<std::string>();
  const PrincipalId agent(p.at("agent").get<std::string>());
  absl::StatusOr<idc::McProxyStart> start =
      sms_gateway_ ? idc_->BeginMcProxy(e.from, agent, ReadList(p.at("attributes")), bus.Now())
                   : absl::StatusOr<idc::McProxyStart>(
                         MakeError(ErrorCode::kNoVerifier, "no MNO attached"));
  Record(bus, "idc.mc_begin", start.status(),
         {{"flow", flow}, {"sp", e.from.value()}, {"user", agent.value()}});
  if (!start.ok()) {
    bus.Send(Make(address(), agent, msg::kLoginDenied,
                  {{"flow", flow}, {"error", StatusLabel(start.status())}}));
    return;
  }
  mc_flows_[start->proxy_id] = McFlow{flow, e.from, p.at("session").get<std::string>(), agent};
  // The SMS leaves through the operator's gateway, straight to the handset.
  bus.Send(Make(*sms_gateway_, agent, msg::kMnoSms,
                {{"flow", flow},
                 {"proxy_id", start->proxy_id},
                 {"code", start->sms.code},
                 {"reply_to", address().value()}}));
}

void IdcActor::OnMcResponse(const Envelope& e, Bus& bus) {
  const std::string proxy_id = e.payload.at("proxy_id").get<std::string>();
  auto it = mc_flows_.find(proxy_id);
  if (it == mc_flows_.end()) {
    Record(bus, "idc.mc_complete", MakeError(ErrorCode::kInvalidGrant, "unknown proxy id"),
           {{"from", e.from.value()}});
    return;
  }
  const McFlow flow = it->second;
  auto token = idc_->CompleteMcProxy(proxy_id, e.payload.at("code").get<std::string>(),
                                     bus.Now());
  Record(bus, "idc.mc_complete", token.status(),
         {{"flow", flow.flow}, {"sp", flow.sp.value()}, {"user", flow.agent.value()}});
  if (!token.ok()) {
    if (!HasErrorCode(token.status(), ErrorCode::kAuthenticationFailed)) mc_flows_.erase(it);
    bus.Send(Make(address(), flow.agent, msg::kLoginDenied,
                  {{"flow", flow.flow}, {"error", StatusLabel(token.status())}}));
    return;
  }
  mc_flows_.erase(it);
  bus.Send(Make(address(), flow.sp, msg::kTokenResponse,
                {{"flow", flow.flow},
                 {"session", flow.session},
                 {"token", federation::TokenToJson(*token)}}));
}

}  // namespace authsim::sim

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

#include "authsim/idc/consolidator.h"

#include <algorithm>

#include "authsim/common/status.h"
#include "authsim/idc/documents.h"

namespace authsim::idc {

namespace {

bool InProgress(RecoveryState state) {
  return GrantedAal(state) == identity::Aal::kAal1;
}

}  // namespace

IdentityConsolidator::IdentityConsolidator(PrincipalId id, IdcConfig config,
                                           crypto::SigningKey key, crypto::Drbg rng,
                                           const risk::PopulationTable* population)
    : id_(id),
      config_(config),
      rng_(rng.Fork("idc")),
      issuer_(id, std::move(key), rng.Fork("issuer"), config.token_lifetime),
      population_(population),
      locks_(config.locks),
      vault_(rng.Fork("vault")) {
  trust_.Set(DocumentSource(), 100);
}

void IdentityConsolidator::AddAdmin(const PrincipalId& admin) {
  registry_.AddAdmin(admin);
  journal_.push_back({{"op", "add_admin"}, {"admin", admin.value()}});
}

absl::Status IdentityConsolidator::RegisterEntity(const PrincipalId& admin,
                                                  const PrincipalId& entity,
                                                  EntityKind kind, identity::Aal max_aal) {
  AUTHSIM_RETURN_IF_ERROR(registry_.RegisterEntity(admin, entity, kind, max_aal));
  journal_.push_back({{"op", "register_entity"},
                      {"admin", admin.value()},
                      {"entity", entity.value()},
                      {"kind", EntityKindName(kind)},
                      {"max_aal", AalName(max_aal)}});
  return absl::OkStatus();
}

absl::Status IdentityConsolidator::LinkUser(const PrincipalId& user,
                                            const PrincipalId& entity) {
  AUTHSIM_RETURN_IF_ERROR(registry_.LinkUser(user, entity));
  journal_.push_back({{"op", "link_user"}, {"user", user.value()}, {"entity", entity.value()}});
  return absl::OkStatus();
}

void IdentityConsolidator::TrustEntityKey(const PrincipalId& entity,
                                          const crypto::VerifyKey& key) {
  entity_keys_[entity] = key;
}

void IdentityConsolidator::AttachMno(MnoIdp* mno) {
  mnos_[mno->id()] = mno;
  TrustEntityKey(mno->id(), mno->verify_key());
}

void IdentityConsolidator::MapMcAttribute(const std::string& attribute,
                                          const PrincipalId& mno) {
  mc_attributes_[attribute].insert(mno);
}

absl::Status IdentityConsolidator::EnrollUser(
    const PrincipalId& user, std::string_view backup_password,
    std::vector<identity::IdentityAttribute> identity) {
  if (backup_password.size() < config_.min_backup_password) {
    return MakeError(ErrorCode::kWeakPassword, "backup password is too short");
  }
  if (users_.contains(user)) return MakeError(ErrorCode::kAlreadyExists, "user enrolled");
  users_[user] = UserRecord{
      crypto::HashPassword(backup_password, rng_, config_.password_params),
      std::move(identity), identity::ConsentPolicy(user)};
  return absl::OkStatus();
}

const std::vector<identity::IdentityAttribute>* IdentityConsolidator::Identity(
    const PrincipalId& user) const {
  auto it = users_.find(user);
  return it == users_.end() ? nullptr : &it->second.identity;
}

IdcSession IdentityConsolidator::OpenSession(const PrincipalId& user, identity::Aal aal) {
  IdcSession s{rng_.RandomHex(12), user, aal, false};
  sessions_[s.session_id] = s;
  return s;
}

absl::StatusOr<IdcSession> IdentityConsolidator::RequireSession(
    const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return MakeError(ErrorCode::kNotFound, "unknown IDC session");
  return it->second;
}

RecoveryState IdentityConsolidator::StateOf(const IdcSession& session) const {
  if (session.recovery) {
    auto it = recoveries_.find(session.user);
    return it == recoveries_.end() ? RecoveryState::kStart : it->second.state;
  }
  // Ordinary sessions map onto the ladder by their level.
  if (session.aal >= identity::Aal::kAal2) return RecoveryState::kFullAccess;
  if (session.aal == identity::Aal::kAal1) return RecoveryState::kTentativeIdc;
  return RecoveryState::kStart;
}

absl::StatusOr<identity::Aal> IdentityConsolidator::SessionAal(
    const std::string& session_id) const {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s, RequireSession(session_id));
  return s.recovery ? GrantedAal(StateOf(s)) : s.aal;
}

absl::StatusOr<IdcSession> IdentityConsolidator::Session(
    const std::string& session_id) const {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s, RequireSession(session_id));
  if (s.recovery) s.aal = GrantedAal(StateOf(s));
  return s;
}

absl::StatusOr<IdcSession> IdentityConsolidator::RequireOperation(
    const std::string& session_id, IdcOperation op) const {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s, Session(session_id));
  if (!Permits(StateOf(s), op)) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     std::string(IdcOperationName(op)) + " not allowed in this session");
  }
  return s;
}

absl::StatusOr<std::vector<identity::IdentityAttribute>>
IdentityConsolidator::AcquireIdentityDocument(const std::string& session_id,
                                              std::string_view document, SimTime now) {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s,
                           RequireOperation(session_id, IdcOperation::kEditAttributes));
  if (!document_authority_) return MakeError(ErrorCode::kNoVerifier, "no document authority");
  AUTHSIM_ASSIGN_OR_RETURN(
      auto acquired,
      AcquireDocument(document, *document_authority_, schema_, DocumentSource(), now));
  UserRecord& record = users_.at(s.user);
  for (const auto& a : acquired) record.identity = identity::FuseAttributes(record.identity, a, trust_);
  return acquired;
}

absl::StatusOr<PrincipalId> IdentityConsolidator::DiscoverBaa(const PrincipalId& sp,
                                                              const PrincipalId& user) const {
  return registry_.DiscoverBaa(sp, user);
}

void IdentityConsolidator::Notify(const PrincipalId& user, bool locked,
                                  const LockScope& scope) {
  for (const EntityRecord& e : registry_.UserEntities(user)) {
    if (scope.Covers(e.id)) outbox_.push_back({e.id, user, locked});
  }
}

void IdentityConsolidator::JournalLock(const PrincipalId& user) {
  const LockState* state = locks_.State(user);
  journal_.push_back({{"op", "lock_state"},
                      {"user", user.value()},
                      {"state", state ? LockStateToJson(*state) : Json(nullptr)}});
}

absl::StatusOr<LockState> IdentityConsolidator::SetLock(const std::string& session_id,
                                                        const LockScope& scope, SimTime now) {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s, Session(session_id));
  if (s.aal < identity::Aal::kAal1) {
    return MakeError(ErrorCode::kUnauthorized, "session cannot set locks");
  }
  LockState state = locks_.Lock(s.user, scope, LockReason::kUserInitiated, now);
  Notify(s.user, true, scope);
  JournalLock(s.user);
  return state;
}

absl::StatusOr<std::optional<LockState>> IdentityConsolidator::ReleaseLock(
    const std::string& session_id, const LockScope& scope) {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s, Session(session_id));
  AUTHSIM_ASSIGN_OR_RETURN(auto remaining, locks_.Unlock(s.user, scope, s.aal));
  Notify(s.user, false, scope);
  JournalLock(s.user);
  return remaining;
}

std::optional<LockState> IdentityConsolidator::ReportAuthFailure(const PrincipalId& user,
                                                                 SimTime now) {
  auto lock = locks_.ReportFailure(user, now);
  if (lock) {
    Notify(user, true, lock->scope);
    JournalLock(user);
  }
  return lock;
}

std::vector<LockNotification> IdentityConsolidator::DrainNotifications() {
  std::vector<LockNotification> out;
  out.swap(outbox_);
  return out;
}

absl::StatusOr<MnoIdp*> IdentityConsolidator::McCapable(
    const PrincipalId& user, const std::vector<std::string>& attributes) const {
  std::optional<std::set<PrincipalId>> candidates;
  for (const auto& a : attributes) {
    auto it = mc_attributes_.find(a);
    if (it == mc_attributes_.end()) return MakeError(ErrorCode::kNoVerifier, "no MNO attests " + a);
    if (!candidates) {
      candidates = it->second;
    } else {
      std::erase_if(*candidates, [&](const PrincipalId& m) { return !it->second.contains(m); });
    }
  }
  if (candidates) {
    for (const auto& m : *candidates) {
      auto mno = mnos_.find(m);
      if (mno == mnos_.end()) continue;
      const auto held = mno->second->VerifiableAttributes(user);
      if (std::all_of(attributes.begin(), attributes.end(),
                      [&](const std::string& a) { return held.contains(a); })) {
        return mno->second;
      }
    }
  }
  return MakeError(ErrorCode::kNoVerifier, "no MNO can attest the request for this user");
}

absl::StatusOr<federation::TokenValidation> IdentityConsolidator::ValidateFrom(
    const PrincipalId& issuer, const federation::AccessToken& token, SimTime now) const {
  auto key = entity_keys_.find(issuer);
  if (key == entity_keys_.end()) return MakeError(ErrorCode::kNoVerifier, "issuer key unknown");
  if (token.issuer != issuer) {
    return MakeError(ErrorCode::kAuthenticationFailed, "token from the wrong issuer");
  }
  auto v = federation::ValidateToken(token, key->second, id_, now);
  if (!v.valid) {
    return MakeError(v.reason.value_or(ErrorCode::kAuthenticationFailed),
                     "token rejected by the IDC");
  }
  return v;
}

absl::StatusOr<McProxyStart> IdentityConsolidator::BeginMcProxy(
    const PrincipalId& sp, const PrincipalId& user, std::vector<std::string> attributes,
    SimTime now) {
  const EntityRecord* requester = registry_.Find(sp);
  if (requester == nullptr || requester->kind != EntityKind::kSp) {
    return MakeError(ErrorCode::kUnknownClient, "unregistered SP");
  }
  if (locks_.IsLocked(user, sp)) return MakeError(ErrorCode::kAccountLocked, "account locked");
  if (auto r = recoveries_.find(user); r != recoveries_.end() && InProgress(r->second.state)) {
    return MakeError(ErrorCode::kTentativeAccessDenied,
                     "SP tokens wait for recovery to finish");
  }
  AUTHSIM_ASSIGN_OR_RETURN(MnoIdp * mno, McCapable(user, attributes));
  AUTHSIM_ASSIGN_OR_RETURN(SmsDispatch sms, mno->StartOtp(id_, user, attributes, now));
  std::string proxy_id = rng_.RandomHex(12);
  mc_requests_[proxy_id] = McProxyRequest{sp, user, mno->id(), sms.challenge_id};
  return McProxyStart{proxy_id, std::move(sms)};
}

absl::StatusOr<federation::AccessToken> IdentityConsolidator::CompleteMcProxy(
    const std::string& proxy_id, const std::string& code, SimTime now) {
  auto it = mc_requests_.find(proxy_id);
  if (it == mc_requests_.end()) return MakeError(ErrorCode::kInvalidGrant, "unknown MC request");
  const McProxyRequest request = it->second;
  AUTHSIM_ASSIGN_OR_RETURN(federation::AccessToken mno_token,
                           mnos_.at(request.mno)->VerifyOtp(request.challenge_id, code, now));
  mc_requests_.erase(it);
  AUTHSIM_ASSIGN_OR_RETURN(auto v, ValidateFrom(request.mno, mno_token, now));
  if (locks_.IsLocked(request.user, request.sp)) {
    return MakeError(ErrorCode::kAccountLocked, "account locked");
  }
  return issuer_.MintFresh(proxy_id, request.sp, std::move(v.scope), v.aal, now);
}

absl::StatusOr<IdcSession> IdentityConsolidator::StartRecovery(
    const PrincipalId& user, std::optional<std::string> backup_password,
    std::optional<std::string> document, SimTime now) {
  auto it = users_.find(user);
  std::optional<RecoveryEvent> event;
  if (it != users_.end()) {
    if (backup_password && crypto::VerifyPassword(it->second.backup_password, *backup_password)) {
      event = RecoveryEvent::kBackupPasswordAccepted;
    } else if (document && document_authority_) {
      auto acquired =
          AcquireDocument(*document, *document_authority_, schema_, DocumentSource(), now);
      if (acquired.ok() && DocumentMatches(*acquired, it->second.identity)) {
        event = RecoveryEvent::kDocumentMatched;
      }
    }
  }
  AUTHSIM_ASSIGN_OR_RETURN(
      RecoverySession session,
      Advance(RecoverySession{user}, event.value_or(RecoveryEvent::kCredentialRejected)));
  recoveries_[user] = std::move(session);
  baa_boundaries_.erase(user);
  recovery_mc_.erase(user);
  IdcSession s{rng_.RandomHex(12), user, identity::Aal::kNone, true};
  sessions_[s.session_id] = s;
  s.aal = GrantedAal(recoveries_.at(user).state);
  return s;
}

absl::StatusOr<RecoverySession> IdentityConsolidator::AdvanceRecovery(
    const PrincipalId& user, RecoveryEvent event) {
  auto it = recoveries_.find(user);
  RecoverySession current = it == recoveries_.end() ? RecoverySession{user} : it->second;
  AUTHSIM_ASSIGN_OR_RETURN(RecoverySession next, Advance(current, event));
  recoveries_[user] = next;
  return next;
}

const RecoverySession* IdentityConsolidator::Recovery(const PrincipalId& user) const {
  auto it = recoveries_.find(user);
  return it == recoveries_.end() ? nullptr : &it->second;
}

absl::StatusOr<SmsDispatch> IdentityConsolidator::RecoveryBeginMc(const PrincipalId& user,
                                                                  SimTime now) {
  const RecoverySession* r = Recovery(user);
  if (r == nullptr || r->state != RecoveryState::kTentativeIdc) {
    return MakeError(ErrorCode::kIllegalTransition, "MC step needs a tentative session");
  }
  for (const EntityRecord& e : registry_.UserEntities(user, EntityKind::kMno)) {
    auto mno = mnos_.find(e.id);
    if (mno == mnos_.end()) continue;
    AUTHSIM_ASSIGN_OR_RETURN(SmsDispatch sms, mno->second->StartOtp(id_, user, {}, now));
    recovery_mc_[user] = {mno->first, sms.challenge_id};
    return sms;
  }
  return MakeError(ErrorCode::kNoVerifier, "user has no linked MNO");
}

absl::StatusOr<RecoverySession> IdentityConsolidator::RecoveryCompleteMc(
    const PrincipalId& user, const std::string& challenge_id, const std::string& code,
    SimTime now) {
  auto pending = recovery_mc_.find(user);
  if (pending == recovery_mc_.end()) {
    return MakeError(ErrorCode::kInvalidGrant, "no MC step in progress");
  }
  const PrincipalId mno_id = pending->second.first;
  if (pending->second.second != challenge_id) {
    return MakeError(ErrorCode::kInvalidGrant, "challenge does not belong to this recovery");
  }
  MnoIdp* mno = mnos_.at(mno_id);
  AUTHSIM_ASSIGN_OR_RETURN(federation::AccessToken token,
                           mno->VerifyOtp(challenge_id, code, now));
  recovery_mc_.erase(pending);
  AUTHSIM_RETURN_IF_ERROR(ValidateFrom(mno_id, token, now).status());
  return AdvanceRecovery(user, mno->ConfirmLost(user) ? RecoveryEvent::kMcLostConfirmed
                                                      : RecoveryEvent::kMcLostUnconfirmed);
}

absl::StatusOr<RecoverySession> IdentityConsolidator::RecoveryBaaLogin(
    const PrincipalId& user, const baa::BaaAccess& access, SimTime now) {
  if (access.user != user) {
    return MakeError(ErrorCode::kAuthenticationFailed, "BAA access is for another user");
  }
  AUTHSIM_ASSIGN_OR_RETURN(RecoverySession next,
                           AdvanceRecovery(user, RecoveryEvent::kBaaLogin));
  baa_boundaries_[user] = now;
  return next;
}

absl::StatusOr<RecoverySession> IdentityConsolidator::RecoveryRecordsStreaming(
    const PrincipalId& user) {
  return AdvanceRecovery(user, RecoveryEvent::kRecordsStreaming);
}

absl::StatusOr<baa::VerdictRequest> IdentityConsolidator::RecoveryVerdictRequest(
    const PrincipalId& user) const {
  auto boundary = baa_boundaries_.find(user);
  if (boundary == baa_boundaries_.end()) {
    return MakeError(ErrorCode::kIllegalTransition, "no BAA login on record");
  }
  return baa::VerdictRequest{id_, user, boundary->second};
}

absl::StatusOr<RecoverySession> IdentityConsolidator::RecoveryVerdict(
    const PrincipalId& user, const federation::AccessToken& token, SimTime now) {
  auto baa = registry_.BestBaa(user);
  if (!baa) return MakeError(ErrorCode::kNoBaaRegistered, "user has no registered BAA");
  AUTHSIM_ASSIGN_OR_RETURN(auto v, ValidateFrom(*baa, token, now));
  auto behavior = v.scope.find("behavior");
  if (behavior == v.scope.end() || !std::holds_alternative<std::string>(behavior->second)) {
    return MakeError(ErrorCode::kAuthenticationFailed, "token carries no verdict");
  }
  const std::string& verdict = std::get<std::string>(behavior->second);
  if (verdict != baa::VerdictName(baa::Verdict::kMatch) &&
      verdict != baa::VerdictName(baa::Verdict::kNoMatch)) {
    return MakeError(ErrorCode::kAuthenticationFailed, "unexpected verdict");
  }
  return AdvanceRecovery(user, verdict == baa::VerdictName(baa::Verdict::kMatch)
                                   ? RecoveryEvent::kVerdictMatch
                                   : RecoveryEvent::kVerdictNoMatch);
}

absl::StatusOr<RecoverySession> IdentityConsolidator::RecoveryGrantFullAccess(
    const PrincipalId& user) {
  return AdvanceRecovery(user, RecoveryEvent::kGrantFullAccess);
}

absl::Status IdentityConsolidator::AuthorizeNewDevice(const std::string& session_id) const {
  return RequireOperation(session_id, IdcOperation::kIssueFidoCredential).status();
}

absl::StatusOr<TentativeView> IdentityConsolidator::ViewTrusted(
    const std::string& session_id) const {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s,
                           RequireOperation(session_id, IdcOperation::kViewTrustedIdps));
  TentativeView view;
  for (const EntityRecord& e : registry_.UserEntities(s.user)) {
    if (e.kind != EntityKind::kSp) view.trusted_idps.emplace_back(e.id, e.max_aal);
  }
  AUTHSIM_ASSIGN_OR_RETURN(view.backup_passwords, vault_.List(s.user, s.aal));
  return view;
}

absl::Status IdentityConsolidator::StoreBackupPasswords(
    const std::string& session_id, std::vector<baa::StoredPassword> entries) {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s, Session(session_id));
  return vault_.Store(s.user, std::move(entries), s.aal);
}

absl::StatusOr<ProfileView> IdentityConsolidator::ViewProfile(
    const std::string& session_id) const {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s,
                           RequireOperation(session_id, IdcOperation::kViewTrustedIdps));
  ProfileView view{s.user, {}, {}, Permits(StateOf(s), IdcOperation::kEditAttributes)};
  // A tentative session sees only its restricted subset (ViewTrusted).
  if (!view.editable) return view;
  view.attributes = users_.at(s.user).identity;
  for (auto& [audience, names] : ledger_.DisclosuresByAudience(s.user)) {
    AudienceView entry{audience, names, std::nullopt};
    if (population_ != nullptr) {
      const risk::AttributeAssignment told = ledger_.LinkableRevealed(s.user, audience);
      for (const std::string& column : population_->columns()) {
        if (told.contains(column)) continue;
        auto r = risk::FederatedInferenceRisk(ledger_, s.user, audience, column, *population_);
        if (r.ok() && (!entry.top_risk || r->score > entry.top_risk->score)) entry.top_risk = *r;
      }
    }
    view.audiences.push_back(std::move(entry));
  }
  return view;
}

absl::Status IdentityConsolidator::EditConsent(const std::string& session_id,
                                               identity::ConsentGrant grant) {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s,
                           RequireOperation(session_id, IdcOperation::kEditAttributes));
  users_.at(s.user).consent.SetGrant(std::move(grant));
  return absl::OkStatus();
}

absl::Status IdentityConsolidator::RevokeConsent(const std::string& session_id,
                                                 const std::string& attribute,
                                                 const PrincipalId& audience) {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s,
                           RequireOperation(session_id, IdcOperation::kEditAttributes));
  users_.at(s.user).consent.Revoke(attribute, audience);
  return absl::OkStatus();
}

federation::ConsentDecisions IdentityConsolidator::ConsentFor(
    const PrincipalId& user, const PrincipalId& sp,
    const std::vector<std::string>& attributes, SimTime now) const {
  federation::ConsentDecisions out;
  auto it = users_.find(user);
  for (const auto& a : attributes) {
    identity::ConsentDecision d = identity::ConsentDecision::kDeny;
    if (it != users_.end()) {
      d = identity::EvaluateConsent(it->second.consent, schema_, a, sp, now)
              .value_or(identity::ConsentDecision::kDeny);
    }
    out[a] = d;
  }
  return out;
}

void IdentityConsolidator::RecordDisclosure(risk::DisclosureEntry entry) {
  journal_.push_back({{"op", "disclose"}, {"entry", risk::EntryToJson(entry)}});
  ledger_.Record(std::move(entry));
}

absl::Status IdentityConsolidator::StoreCredentialBackup(const std::string& session_id,
                                                         pabac::CredentialBackup backup) {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s, Session(session_id));
  if (backup.owner != s.user) {
    return MakeError(ErrorCode::kUnauthorized, "backup belongs to another user");
  }
  const Json record = pabac::BackupToJson(backup);
  AUTHSIM_RETURN_IF_ERROR(backups_.Put(std::move(backup), s.aal));
  journal_.push_back({{"op", "backup"}, {"backup", record}});
  return absl::OkStatus();
}

absl::StatusOr<std::uint64_t> IdentityConsolidator::ViewPabac(
    const std::string& session_id) const {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s,
                           RequireOperation(session_id, IdcOperation::kViewPabac));
  return backups_.LatestVersion(s.user);
}

absl::StatusOr<std::vector<pabac::AttributeCredential>>
IdentityConsolidator::RestoreCredentials(const std::string& session_id,
                                         std::string_view password) const {
  AUTHSIM_ASSIGN_OR_RETURN(IdcSession s,
                           RequireOperation(session_id, IdcOperation::kRestoreCredentials));
  AUTHSIM_ASSIGN_OR_RETURN(pabac::CredentialBackup backup, backups_.Fetch(s.user, s.aal));
  return pabac::RestoreBackup(backup, password, s.aal);
}

Json IdentityConsolidator::Checkpoint() const {
  return {{"registry", registry_.ToJson()},
          {"locks", locks_.ToJson()},
          {"ledger", ledger_.ToJson()},
          {"backups", Json::parse(backups_.OperatorBytes())}};
}

absl::Status IdentityConsolidator::ApplyJournal(const Json& entry) {
  try {
    const std::string op = entry.at("op").get<std::string>();
    if (op == "add_admin") {
      AddAdmin(PrincipalId(entry.at("admin").get<std::string>()));
      return absl::OkStatus();
    }
    if (op == "register_entity") {
      auto kind = ParseEntityKind(entry.at("kind").get<std::string>());
      auto aal = identity::ParseAal(entry.at("max_aal").get<std::string>());
      if (!kind || !aal) return MakeError(ErrorCode::kSchemaError, "bad register entry");
      return RegisterEntity(PrincipalId(entry.at("admin").get<std::string>()),
                            PrincipalId(entry.at("entity").get<std::string>()), *kind, *aal);
    }
    if (op == "link_user") {
      return LinkUser(PrincipalId(entry.at("user").get<std::string>()),
                      PrincipalId(entry.at("entity").get<std::string>()));
    }
    if (op == "lock_state") {
      const PrincipalId user(entry.at("user").get<std::string>());
      if (entry.at("state").is_null()) {
        locks_.Clear(user);
      } else {
        AUTHSIM_ASSIGN_OR_RETURN(LockState s, LockStateFromJson(entry.at("state")));
        locks_.Put(s);
      }
      journal_.push_back(entry);
      return absl::OkStatus();
    }
    if (op == "disclose") {
      AUTHSIM_ASSIGN_OR_RETURN(risk::DisclosureEntry e, risk::EntryFromJson(entry.at("entry")));
      RecordDisclosure(std::move(e));
      return absl::OkStatus();
    }
    if (op == "backup") {
      AUTHSIM_ASSIGN_OR_RETURN(pabac::CredentialBackup b,
                               pabac::BackupFromJson(entry.at("backup")));
      AUTHSIM_RETURN_IF_ERROR(backups_.Put(std::move(b), identity::Aal::kAal3));
      journal_.push_back(entry);
      return absl::OkStatus();
    }
    return MakeError(ErrorCode::kSchemaError, "unknown journal op " + op);
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kSchemaError, e.what());
  }
}

}  // namespace authsim::idc

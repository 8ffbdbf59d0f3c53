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

#ifndef AUTHSIM_IDC_CONSOLIDATOR_H_
#define AUTHSIM_IDC_CONSOLIDATOR_H_

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/baa/authority.h"
#include "authsim/baa/password_vault.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/crypto/drbg.h"
#include "authsim/crypto/primitives.h"
#include "authsim/federation/idp.h"
#include "authsim/federation/token.h"
#include "authsim/identity/attributes.h"
#include "authsim/identity/consent.h"
#include "authsim/idc/locks.h"
#include "authsim/idc/mno.h"
#include "authsim/idc/recovery.h"
#include "authsim/idc/registry.h"
#include "authsim/pabac/backup.h"
#include "authsim/risk/ledger.h"
#include "authsim/risk/population.h"
#include "authsim/risk/risk.h"

namespace authsim::idc {

struct IdcConfig {
  // A single backup password guards recovery, so it must be strong.
  std::size_t min_backup_password = 12;
  LockConfig locks;
  crypto::PasswordHashParams password_params = crypto::PasswordHashParams::Minimal();
  SimDuration token_lifetime = std::chrono::seconds(600);
};

struct IdcSession {
  std::string session_id;
  PrincipalId user;
  // Fixed AAL for ordinary sessions. Recovery sessions follow the ladder.
  identity::Aal aal = identity::Aal::kNone;
  bool recovery = false;
};

// Sent to every linked entity when a lock changes.
struct LockNotification {
  PrincipalId entity;
  PrincipalId user;
  bool locked = false;
  friend bool operator==(const LockNotification&, const LockNotification&) = default;
};

struct TentativeView {
  std::vector<std::pair<PrincipalId, identity::Aal>> trusted_idps;
  std::vector<baa::StoredPassword> backup_passwords;
};

struct AudienceView {
  PrincipalId audience;
  std::vector<std::string> attributes;
  // Highest inference risk over the population columns this audience has
  // not been told. Empty without a population or when none is defined.
  std::optional<risk::RiskIndicator> top_risk;
};

struct ProfileView {
  PrincipalId user;
  std::vector<identity::IdentityAttribute> attributes;
  std::vector<AudienceView> audiences;
  bool editable = false;
};

struct McProxyStart {
  std::string proxy_id;
  // Travels to the user's handset; never to the SP.
  SmsDispatch sms;
};

// The Identity Consolidator. One actor; recovery sessions are per-user
// sub-state so concurrent recoveries of different users do not interact.
class IdentityConsolidator {
 public:
  IdentityConsolidator(PrincipalId id, IdcConfig config, crypto::SigningKey key,
                       crypto::Drbg rng, const risk::PopulationTable* population = nullptr);

  const PrincipalId& id() const { return id_; }
  const crypto::VerifyKey& verify_key() const { return issuer_.verify_key(); }
  const EntityRegistry& registry() const { return registry_; }
  const LockManager& locks() const { return locks_; }
  const risk::DisclosureLedger& ledger() const { return ledger_; }
  const pabac::CredentialBackupStore& backups() const { return backups_; }
  // Source tag for attributes read from identity documents.
  PrincipalId DocumentSource() const { return PrincipalId(id_.value() + "/document"); }

  // Setup.
  void AddAdmin(const PrincipalId& admin);
  absl::Status RegisterEntity(const PrincipalId& admin, const PrincipalId& entity,
                              EntityKind kind, identity::Aal max_aal);
  absl::Status LinkUser(const PrincipalId& user, const PrincipalId& entity);
  void TrustEntityKey(const PrincipalId& entity, const crypto::VerifyKey& key);
  void TrustDocumentAuthority(const crypto::VerifyKey& key) { document_authority_ = key; }
  // The MNO must outlive the consolidator.
  void AttachMno(MnoIdp* mno);
  // Which MNO can attest `attribute`. Only the IDC holds this mapping.
  void MapMcAttribute(const std::string& attribute, const PrincipalId& mno);

  // WeakPassword below the configured length; AlreadyExists for a repeat.
  absl::Status EnrollUser(const PrincipalId& user, std::string_view backup_password,
                          std::vector<identity::IdentityAttribute> identity);
  const std::vector<identity::IdentityAttribute>* Identity(const PrincipalId& user) const;

  // Opened after the user authenticated to the IDC's own IdP role.
  IdcSession OpenSession(const PrincipalId& user, identity::Aal aal);
  // Current AAL; NotFound for unknown sessions.
  absl::StatusOr<identity::Aal> SessionAal(const std::string& session_id) const;
  absl::StatusOr<IdcSession> Session(const std::string& session_id) const;

  // Identity intake from a simulated e-passport. Needs a non-tentative
  // session: the document is fused into the stored identity.
  absl::StatusOr<std::vector<identity::IdentityAttribute>> AcquireIdentityDocument(
      const std::string& session_id, std::string_view document, SimTime now);

  absl::StatusOr<PrincipalId> DiscoverBaa(const PrincipalId& sp,
                                          const PrincipalId& user) const;

  // Locks. SetLock works from any session including a tentative one.
  absl::StatusOr<LockState> SetLock(const std::string& session_id, const LockScope& scope,
                                    SimTime now);
  absl::StatusOr<std::optional<LockState>> ReleaseLock(const std::string& session_id,
                                                       const LockScope& scope);
  // Risk engine input: a failed authentication seen anywhere for `user`.
  std::optional<LockState> ReportAuthFailure(const PrincipalId& user, SimTime now);
  bool IsLocked(const PrincipalId& user, const PrincipalId& entity) const {
    return locks_.IsLocked(user, entity);
  }
  std::vector<LockNotification> DrainNotifications();

  // Mobile Connect proxy. NoVerifier when no mapped MNO can attest every
  // requested attribute for the user; AccountLocked while the SP is locked
  // for the user; TentativeAccessDenied during an unfinished recovery.
  absl::StatusOr<McProxyStart> BeginMcProxy(const PrincipalId& sp, const PrincipalId& user,
                                            std::vector<std::string> attributes,
                                            SimTime now);
  // AuthenticationFailed on a wrong code. The token is IDC-issued.
  absl::StatusOr<federation::AccessToken> CompleteMcProxy(const std::string& proxy_id,
                                                          const std::string& code,
                                                          SimTime now);

  // Recovery ladder. Each step validates its evidence and then advances.
  // RecoveryDenied when neither the password nor the document checks out.
  absl::StatusOr<IdcSession> StartRecovery(const PrincipalId& user,
                                           std::optional<std::string> backup_password,
                                           std::optional<std::string> document, SimTime now);
  // NoVerifier if the user has no linked MNO.
  absl::StatusOr<SmsDispatch> RecoveryBeginMc(const PrincipalId& user, SimTime now);
  // McCheckFailed (state kept) without a loss report and replacement SIM.
  absl::StatusOr<RecoverySession> RecoveryCompleteMc(const PrincipalId& user,
                                                     const std::string& challenge_id,
                                                     const std::string& code, SimTime now);
  absl::StatusOr<RecoverySession> RecoveryBaaLogin(const PrincipalId& user,
                                                   const baa::BaaAccess& access,
                                                   SimTime now);
  absl::StatusOr<RecoverySession> RecoveryRecordsStreaming(const PrincipalId& user);
  // The request the IDC sends to the discovered BAA. Records before the BAA
  // login instant are excluded.
  absl::StatusOr<baa::VerdictRequest> RecoveryVerdictRequest(const PrincipalId& user) const;
  absl::StatusOr<RecoverySession> RecoveryVerdict(const PrincipalId& user,
                                                  const federation::AccessToken& token,
                                                  SimTime now);
  absl::StatusOr<RecoverySession> RecoveryGrantFullAccess(const PrincipalId& user);
  // Raw transition for callers that already validated the evidence.
  absl::StatusOr<RecoverySession> AdvanceRecovery(const PrincipalId& user,
                                                  RecoveryEvent event);
  const RecoverySession* Recovery(const PrincipalId& user) const;

  // Gate for enrolling a replacement device at the user's IdPs.
  absl::Status AuthorizeNewDevice(const std::string& session_id) const;

  // What a tentative session may see.
  absl::StatusOr<TentativeView> ViewTrusted(const std::string& session_id) const;
  absl::Status StoreBackupPasswords(const std::string& session_id,
                                    std::vector<baa::StoredPassword> entries);

  // Consent and profile surface.
  absl::StatusOr<ProfileView> ViewProfile(const std::string& session_id) const;
  absl::Status EditConsent(const std::string& session_id, identity::ConsentGrant grant);
  absl::Status RevokeConsent(const std::string& session_id, const std::string& attribute,
                             const PrincipalId& audience);
  // The consent answers a user agent feeds into an IdP login.
  federation::ConsentDecisions ConsentFor(const PrincipalId& user, const PrincipalId& sp,
                                          const std::vector<std::string>& attributes,
                                          SimTime now) const;
  void RecordDisclosure(risk::DisclosureEntry entry);

  // PABAC credential backups held opaquely for the user.
  absl::Status StoreCredentialBackup(const std::string& session_id,
                                     pabac::CredentialBackup backup);
  absl::StatusOr<std::uint64_t> ViewPabac(const std::string& session_id) const;
  absl::StatusOr<std::vector<pabac::AttributeCredential>> RestoreCredentials(
      const std::string& session_id, std::string_view password) const;

  // Persistent state: registry, locks, disclosure ledger, credential backups.
  Json Checkpoint() const;
  // Every persistent mutation as it happened; replaying it through
  // ApplyJournal on a fresh consolidator reproduces Checkpoint().
  const std::vector<Json>& journal() const { return journal_; }
  absl::Status ApplyJournal(const Json& entry);

 private:
  struct UserRecord {
    crypto::PasswordRecord backup_password;
    std::vector<identity::IdentityAttribute> identity;
    identity::ConsentPolicy consent;
  };
  struct McProxyRequest {
    PrincipalId sp;
    PrincipalId user;
    PrincipalId mno;
    std::string challenge_id;
  };

  absl::StatusOr<IdcSession> RequireSession(const std::string& session_id) const;
  absl::StatusOr<IdcSession> RequireOperation(const std::string& session_id,
                                              IdcOperation op) const;
  RecoveryState StateOf(const IdcSession& session) const;
  void Notify(const PrincipalId& user, bool locked, const LockScope& scope);
  void JournalLock(const PrincipalId& user);
  absl::StatusOr<MnoIdp*> McCapable(const PrincipalId& user,
                                    const std::vector<std::string>& attributes) const;
  absl::StatusOr<federation::TokenValidation> ValidateFrom(
      const PrincipalId& issuer, const federation::AccessToken& token, SimTime now) const;

  PrincipalId id_;
  IdcConfig config_;
  crypto::Drbg rng_;
  federation::TokenIssuer issuer_;
  const risk::PopulationTable* population_;
  identity::AttributeSchema schema_ = identity::AttributeSchema::Default();
  identity::TrustTable trust_;

  EntityRegistry registry_;
  LockManager locks_;
  risk::DisclosureLedger ledger_;
  pabac::CredentialBackupStore backups_;
  baa::BackupPasswordVault vault_;

  std::map<PrincipalId, UserRecord> users_;
  std::map<std::string, IdcSession> sessions_;
  std::map<PrincipalId, RecoverySession> recoveries_;
  std::map<PrincipalId, SimTime> baa_boundaries_;
  std::map<PrincipalId, crypto::VerifyKey> entity_keys_;
  std::optional<crypto::VerifyKey> document_authority_;
  std::map<PrincipalId, MnoIdp*> mnos_;
  std::map<std::string, std::set<PrincipalId>> mc_attributes_;
  std::map<std::string, McProxyRequest> mc_requests_;
  // Pending recovery OTP per user: (MNO, challenge id).
  std::map<PrincipalId, std::pair<PrincipalId, std::string>> recovery_mc_;
  std::vector<LockNotification> outbox_;
  std::vector<Json> journal_;
};

}  // namespace authsim::idc

#endif  // AUTHSIM_IDC_CONSOLIDATOR_H_

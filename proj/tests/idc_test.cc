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

#include "authsim/baa/authority.h"
#include "authsim/common/status.h"
#include "authsim/device/behavior.h"
#include "authsim/idc/consolidator.h"
#include "authsim/idc/documents.h"
#include "authsim/idc/recovery.h"
#include "authsim/idc/registry.h"

namespace authsim::idc {
namespace {

using identity::Aal;
using std::chrono::seconds;

const PrincipalId kAdmin("admin");
const PrincipalId kSp1("sp.shop");
const PrincipalId kIdp1("idp.mail");
const PrincipalId kBaa1("baa.one");
const PrincipalId kMno1("mno.tel");
const PrincipalId kAlice("alice");
const PrincipalId kBob("bob");
constexpr char kAlicePassword[] = "correct horse battery";

TEST(RegistryTest, DiscoveryPicksHighestAalThenEarliest) {
  EntityRegistry r;
  r.AddAdmin(kAdmin);
  ASSERT_TRUE(r.RegisterEntity(kAdmin, kSp1, EntityKind::kSp, Aal::kNone).ok());
  ASSERT_TRUE(r.RegisterEntity(kAdmin, PrincipalId("baa.a"), EntityKind::kBaa, Aal::kAal2).ok());
  ASSERT_TRUE(r.RegisterEntity(kAdmin, PrincipalId("baa.b"), EntityKind::kBaa, Aal::kAal3).ok());
  ASSERT_TRUE(r.RegisterEntity(kAdmin, PrincipalId("baa.c"), EntityKind::kBaa, Aal::kAal3).ok());

  EXPECT_TRUE(HasErrorCode(r.DiscoverBaa(kSp1, kAlice).status(), ErrorCode::kNoBaaRegistered));
  ASSERT_TRUE(r.LinkUser(kAlice, PrincipalId("baa.a")).ok());
  EXPECT_EQ(*r.DiscoverBaa(kSp1, kAlice), PrincipalId("baa.a"));
  ASSERT_TRUE(r.LinkUser(kAlice, PrincipalId("baa.c")).ok());
  ASSERT_TRUE(r.LinkUser(kAlice, PrincipalId("baa.b")).ok());
  // b and c tie on AAL3; b registered first.
  EXPECT_EQ(*r.DiscoverBaa(kSp1, kAlice), PrincipalId("baa.b"));
  EXPECT_TRUE(HasErrorCode(r.DiscoverBaa(PrincipalId("sp.nobody"), kAlice).status(),
                           ErrorCode::kUnknownClient));
}

TEST(RegistryTest, OnlyAdminsRegister) {
  EntityRegistry r;
  r.AddAdmin(kAdmin);
  EXPECT_TRUE(HasErrorCode(r.RegisterEntity(kAlice, kSp1, EntityKind::kSp, Aal::kNone),
                           ErrorCode::kUnauthorized));
  ASSERT_TRUE(r.RegisterEntity(kAdmin, kSp1, EntityKind::kSp, Aal::kNone).ok());
  EXPECT_TRUE(HasErrorCode(r.RegisterEntity(kAdmin, kSp1, EntityKind::kSp, Aal::kNone),
                           ErrorCode::kAlreadyExists));
  EXPECT_TRUE(HasErrorCode(r.LinkUser(kAlice, kIdp1), ErrorCode::kNotFound));
  auto back = EntityRegistry::FromJson(r.ToJson());
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, r);
}

TEST(LockManagerTest, AutoLockAfterTenFailuresInFiveMinutes) {
  LockManager locks;
  const SimTime t0 = FromMillis(0);
  for (int i = 0; i < 9; ++i) EXPECT_FALSE(locks.ReportFailure(kAlice, t0 + seconds(20 * i)));
  auto lock = locks.ReportFailure(kAlice, t0 + seconds(200));
  ASSERT_TRUE(lock);
  EXPECT_EQ(lock->reason, LockReason::kRiskAutoLock);
  EXPECT_TRUE(locks.IsLocked(kAlice, kSp1));
  EXPECT_FALSE(locks.IsLocked(kBob, kSp1));
}

TEST(LockManagerTest, SlowFailuresDoNotLock) {
  LockManager locks;
  for (int i = 0; i < 30; ++i) {
    EXPECT_FALSE(locks.ReportFailure(kAlice, FromMillis(0) + seconds(34 * i)));
  }
}

TEST(LockManagerTest, UnlockNeedsAal2) {
  LockManager locks;
  locks.Lock(kAlice, LockScope::All(), LockReason::kUserInitiated, FromMillis(0));
  EXPECT_TRUE(HasErrorCode(locks.Unlock(kAlice, LockScope::All(), Aal::kAal1).status(),
                           ErrorCode::kTentativeAccessDenied));
  EXPECT_TRUE(HasErrorCode(locks.Unlock(kAlice, LockScope::Of(kSp1), Aal::kAal3).status(),
                           ErrorCode::kInvalidArgument));
  auto rest = locks.Unlock(kAlice, LockScope::All(), Aal::kAal3);
  ASSERT_TRUE(rest.ok());
  EXPECT_FALSE(rest->has_value());
  EXPECT_FALSE(locks.IsLocked(kAlice, kSp1));
}

TEST(MnoTest, OtpAttemptsAndExpiry) {
  crypto::Drbg rng(5);
  MnoIdp mno(kMno1, crypto::SigningKey::Generate(rng), rng.Fork("m"));
  mno.AddSubscriber(kAlice, "+4915100000", {});
  const SimTime t0 = FromMillis(1000);
  auto sms = mno.StartOtp(PrincipalId("idc"), kAlice, {"msisdn"}, t0);
  ASSERT_TRUE(sms.ok());
  EXPECT_EQ(sms->code.size(), 6u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(HasErrorCode(mno.VerifyOtp(sms->challenge_id, "xxxxxx", t0).status(),
                             ErrorCode::kAuthenticationFailed));
  }
  // Third miss burned the challenge.
  EXPECT_TRUE(HasErrorCode(mno.VerifyOtp(sms->challenge_id, sms->code, t0).status(),
                           ErrorCode::kInvalidGrant));

  auto late = mno.StartOtp(PrincipalId("idc"), kAlice, {}, t0);
  EXPECT_TRUE(HasErrorCode(mno.VerifyOtp(late->challenge_id, late->code, t0 + seconds(120))
                               .status(),
                           ErrorCode::kExpired));
  EXPECT_TRUE(HasErrorCode(mno.StartOtp(PrincipalId("idc"), kAlice, {"email"}, t0).status(),
                           ErrorCode::kNoSuchAttribute));
}

TEST(MnoTest, LossNeedsReportAndReplacementSim) {
  crypto::Drbg rng(5);
  MnoIdp mno(kMno1, crypto::SigningKey::Generate(rng), rng.Fork("m"));
  mno.AddSubscriber(kAlice, "+4915100000", {});
  EXPECT_FALSE(mno.ConfirmLost(kAlice));
  mno.ReportLost(kAlice, DeviceId("phone"), FromMillis(0));
  EXPECT_FALSE(mno.ConfirmLost(kAlice));
  mno.IssueReplacementSim(kAlice);
  EXPECT_TRUE(mno.ConfirmLost(kAlice));
}

TEST(DocumentTest, PassportYieldsThreeNormalizedAttributes) {
  crypto::Drbg rng(6);
  DocumentAuthority office(PrincipalId("passport.office"), rng);
  const IdentityDocument doc = office.Issue("P123", "Alice Example", "12.04.1990", "Germany");
  auto attrs = AcquireDocument(DocumentToText(doc), office.verify_key(),
                               identity::AttributeSchema::Default(), PrincipalId("idc/document"),
                               FromMillis(0));
  ASSERT_TRUE(attrs.ok()) << attrs.status();
  ASSERT_EQ(attrs->size(), 3u);
  EXPECT_EQ((*attrs)[0].value, identity::AttributeValue(std::string("alice example")));
  EXPECT_EQ((*attrs)[1].value, identity::AttributeValue(std::string("1990-04-12")));
  EXPECT_EQ((*attrs)[2].value, identity::AttributeValue(std::string("DE")));
}

TEST(DocumentTest, CorruptedOrForgedRecordsAreRejected) {
  crypto::Drbg rng(6);
  DocumentAuthority office(PrincipalId("passport.office"), rng);
  DocumentAuthority forger(PrincipalId("forger"), rng);
  const auto schema = identity::AttributeSchema::Default();
  auto acquire = [&](const std::string& text) {
    return AcquireDocument(text, office.verify_key(), schema, PrincipalId("s"), FromMillis(0))
        .status();
  };
  std::string text = DocumentToText(office.Issue("P1", "Alice", "1990-04-12", "DE"));
  EXPECT_TRUE(HasErrorCode(acquire(text.substr(0, text.size() / 2)),
                           ErrorCode::kDocumentParseError));
  EXPECT_TRUE(HasErrorCode(acquire(R"({"document_id":"P1","name":"Alice"})"),
                           ErrorCode::kDocumentParseError));
  EXPECT_TRUE(HasErrorCode(acquire(DocumentToText(forger.Issue("P1", "Alice", "1990-04-12", "DE"))),
                           ErrorCode::kDocumentParseError));
  IdentityDocument doc = office.Issue("P1", "Alice", "1990-04-12", "DE");
  doc.country = "FR";
  EXPECT_TRUE(HasErrorCode(acquire(DocumentToText(doc)), ErrorCode::kDocumentParseError));
}

TEST(RecoveryFsmTest, ExhaustiveLadderAdmitsOnlyTheFullChain) {
  const LadderReport report = CheckRecoveryLadder(8);
  EXPECT_TRUE(report.ok()) << report.first_violation.value_or("");
  // sum of 10^k for k = 0..8
  EXPECT_EQ(report.sequences, 111'111'111u);
  // Frozen from an independent count: six accepted events along the chain
  // (two credential choices at Start) with refused events interleaved.
  EXPECT_EQ(report.full_access_sequences, 4522u);
}

TEST(RecoveryFsmTest, OutOfOrderEventsAreIllegal) {
  using S = RecoveryState;
  using E = RecoveryEvent;
  EXPECT_TRUE(HasErrorCode(NextState(S::kStart, E::kVerdictMatch).status(),
                           ErrorCode::kIllegalTransition));
  EXPECT_TRUE(HasErrorCode(NextState(S::kTentativeIdc, E::kBaaLogin).status(),
                           ErrorCode::kIllegalTransition));
  EXPECT_TRUE(HasErrorCode(NextState(S::kMcVerified, E::kVerdictMatch).status(),
                           ErrorCode::kIllegalTransition));
  EXPECT_TRUE(HasErrorCode(NextState(S::kTentativeIdc, E::kMcLostUnconfirmed).status(),
                           ErrorCode::kMcCheckFailed));
  EXPECT_TRUE(HasErrorCode(NextState(S::kStart, E::kCredentialRejected).status(),
                           ErrorCode::kRecoveryDenied));
  EXPECT_EQ(*NextState(S::kCollectingRecords, E::kVerdictNoMatch), S::kFailed);
  EXPECT_EQ(GrantedAal(S::kVerdictReceived), Aal::kAal1);
  EXPECT_EQ(GrantedAal(S::kFullAccess), Aal::kAal3);
  EXPECT_EQ(GrantedAal(S::kFailed), Aal::kNone);
}

// IDC with one SP, IdP, BAA and MNO linked for alice and bob.
class IdcTest : public ::testing::Test {
 protected:
  IdcTest()
      : rng_(77),
        office_(PrincipalId("passport.office"), rng_),
        mno_(kMno1, crypto::SigningKey::Generate(rng_), rng_.Fork("mno")),
        baa_(kBaa1, baa::BaaConfig{}, crypto::SigningKey::Generate(rng_), rng_.Fork("baa")),
        population_(*risk::PopulationTable::FromRows(
            {"gender", "age_band", "country"},
            {{"f", "25-34", "DE"}, {"f", "25-34", "DE"}, {"m", "25-34", "DE"},
             {"m", "35-44", "FR"}})),
        idc_(PrincipalId("idc"), IdcConfig{}, crypto::SigningKey::Generate(rng_),
             rng_.Fork("idc"), &population_) {
    idc_.AddAdmin(kAdmin);
    EXPECT_TRUE(idc_.RegisterEntity(kAdmin, kSp1, EntityKind::kSp, Aal::kNone).ok());
    EXPECT_TRUE(idc_.RegisterEntity(kAdmin, kIdp1, EntityKind::kIdp, Aal::kAal2).ok());
    EXPECT_TRUE(idc_.RegisterEntity(kAdmin, kBaa1, EntityKind::kBaa, Aal::kAal2).ok());
    EXPECT_TRUE(idc_.RegisterEntity(kAdmin, kMno1, EntityKind::kMno, Aal::kAal1).ok());
    idc_.AttachMno(&mno_);
    idc_.MapMcAttribute("msisdn", kMno1);
    idc_.TrustEntityKey(kBaa1, baa_.verify_key());
    idc_.TrustDocumentAuthority(office_.verify_key());
    for (const PrincipalId& user : {kAlice, kBob}) {
      for (const PrincipalId& e : {kSp1, kIdp1, kBaa1, kMno1}) {
        EXPECT_TRUE(idc_.LinkUser(user, e).ok());
      }
      mno_.AddSubscriber(user, "+49151" + user.value(), {});
      baa_.EnrollUser(user, "cat");
      for (int i = 0; i < 50; ++i) {
        device::BehavioralRecord r{DeviceId("old-" + user.value()), user, t0_ - seconds(1000 - i),
                                   owner_.Sample(rng_)};
        EXPECT_TRUE(baa_.Ingest(r, baa::AccessMode::kFull).ok());
      }
    }
    const auto schema = identity::AttributeSchema::Default();
    auto stored = AcquireDocument(DocumentToText(Passport()), office_.verify_key(), schema,
                                  idc_.DocumentSource(), t0_);
    EXPECT_TRUE(idc_.EnrollUser(kAlice, kAlicePassword, *stored).ok());
    EXPECT_TRUE(idc_.EnrollUser(kBob, "bob's long backup phrase", {}).ok());
  }

  IdentityDocument Passport() const {
    return office_.Issue("P42", "Alice Example", "1990-04-12", "DE");
  }

  void ReportLoss(const PrincipalId& user) {
    mno_.ReportLost(user, DeviceId("old-" + user.value()), t0_);
    mno_.IssueReplacementSim(user);
  }

  absl::StatusOr<RecoverySession> PassMc(const PrincipalId& user, SimTime now) {
    AUTHSIM_ASSIGN_OR_RETURN(SmsDispatch sms, idc_.RecoveryBeginMc(user, now));
    return idc_.RecoveryCompleteMc(user, sms.challenge_id, sms.code, now);
  }

  // BAA login, streaming and verdict for `user` from `device`.
  absl::StatusOr<RecoverySession> PassBaa(const PrincipalId& user, const DeviceId& device,
                                          const device::BehaviorGenerator& gen, SimTime now) {
    AUTHSIM_ASSIGN_OR_RETURN(baa::BaaAccess access, baa_.Login(user, "cat", now));
    AUTHSIM_RETURN_IF_ERROR(idc_.RecoveryBaaLogin(user, access, now).status());
    AUTHSIM_RETURN_IF_ERROR(idc_.RecoveryRecordsStreaming(user).status());
    for (int i = 1; i <= 20; ++i) {
      AUTHSIM_RETURN_IF_ERROR(baa_.Ingest({device, user, now + seconds(i), gen.Sample(rng_)},
                                          baa::AccessMode::kTentative));
    }
    AUTHSIM_ASSIGN_OR_RETURN(baa::VerdictRequest request, idc_.RecoveryVerdictRequest(user));
    AUTHSIM_ASSIGN_OR_RETURN(federation::AccessToken token,
                             baa_.FederatedAssertion(request, device, true, now + seconds(30)));
    return idc_.RecoveryVerdict(user, token, now + seconds(31));
  }

  SimTime t0_ = FromMillis(10'000'000);
  crypto::Drbg rng_;
  DocumentAuthority office_;
  MnoIdp mno_;
  baa::BehavioralAuthority baa_;
  device::BehaviorGenerator owner_ = device::FixtureOwnerGenerator();
  risk::PopulationTable population_;
  IdentityConsolidator idc_;
};

TEST_F(IdcTest, WeakBackupPasswordIsRefused) {
  EXPECT_TRUE(HasErrorCode(idc_.EnrollUser(PrincipalId("carol"), "short", {}),
                           ErrorCode::kWeakPassword));
}

TEST_F(IdcTest, LockAllFromTentativeSessionNotifiesEveryEntity) {
  auto tentative = idc_.StartRecovery(kAlice, kAlicePassword, std::nullopt, t0_);
  ASSERT_TRUE(tentative.ok());
  auto lock = idc_.SetLock(tentative->session_id, LockScope::All(), t0_);
  ASSERT_TRUE(lock.ok());
  EXPECT_EQ(lock->reason, LockReason::kUserInitiated);
  const auto sent = idc_.DrainNotifications();
  ASSERT_EQ(sent.size(), 4u);
  for (const auto& n : sent) EXPECT_TRUE(n.locked);
  EXPECT_TRUE(idc_.IsLocked(kAlice, kSp1));
  EXPECT_FALSE(idc_.IsLocked(kBob, kSp1));

  EXPECT_TRUE(HasErrorCode(idc_.ReleaseLock(tentative->session_id, LockScope::All()).status(),
                           ErrorCode::kTentativeAccessDenied));
  const IdcSession full = idc_.OpenSession(kAlice, Aal::kAal3);
  ASSERT_TRUE(idc_.ReleaseLock(full.session_id, LockScope::All()).ok());
  EXPECT_FALSE(idc_.IsLocked(kAlice, kSp1));
  EXPECT_EQ(idc_.DrainNotifications().size(), 4u);
}

TEST_F(IdcTest, RiskEngineAutoLocks) {
  for (int i = 0; i < 10; ++i) idc_.ReportAuthFailure(kBob, t0_ + seconds(i));
  ASSERT_NE(idc_.locks().State(kBob), nullptr);
  EXPECT_EQ(idc_.locks().State(kBob)->reason, LockReason::kRiskAutoLock);
  EXPECT_TRUE(idc_.IsLocked(kBob, kIdp1));
}

TEST_F(IdcTest, McProxyIssuesIdcTokenWithMnoAttribute) {
  auto start = idc_.BeginMcProxy(kSp1, kAlice, {"msisdn"}, t0_);
  ASSERT_TRUE(start.ok()) << start.status();
  auto token = idc_.CompleteMcProxy(start->proxy_id, start->sms.code, t0_ + seconds(5));
  ASSERT_TRUE(token.ok()) << token.status();
  EXPECT_EQ(token->issuer, idc_.id());
  auto v = federation::ValidateToken(*token, idc_.verify_key(), kSp1, t0_ + seconds(6));
  ASSERT_TRUE(v.valid);
  EXPECT_EQ(std::get<std::string>(v.scope.at("msisdn")), "+49151alice");
}

TEST_F(IdcTest, McProxyFailures) {
  auto start = idc_.BeginMcProxy(kSp1, kAlice, {"msisdn"}, t0_);
  ASSERT_TRUE(start.ok());
  EXPECT_TRUE(HasErrorCode(idc_.CompleteMcProxy(start->proxy_id, "999999x", t0_).status(),
                           ErrorCode::kAuthenticationFailed));
  EXPECT_TRUE(HasErrorCode(idc_.BeginMcProxy(kSp1, kAlice, {"email"}, t0_).status(),
                           ErrorCode::kNoVerifier));
  const IdcSession s = idc_.OpenSession(kAlice, Aal::kAal2);
  ASSERT_TRUE(idc_.SetLock(s.session_id, LockScope::Of(kSp1), t0_).ok());
  EXPECT_TRUE(HasErrorCode(idc_.BeginMcProxy(kSp1, kAlice, {"msisdn"}, t0_).status(),
                           ErrorCode::kAccountLocked));
}

TEST_F(IdcTest, WrongCredentialsDenyRecovery) {
  EXPECT_TRUE(HasErrorCode(
      idc_.StartRecovery(kAlice, std::string("guess guess guess"), std::nullopt, t0_).status(),
      ErrorCode::kRecoveryDenied));
  IdentityDocument other = office_.Issue("P9", "Mallory", "1980-01-01", "FR");
  EXPECT_TRUE(HasErrorCode(
      idc_.StartRecovery(kAlice, std::nullopt, DocumentToText(other), t0_).status(),
      ErrorCode::kRecoveryDenied));
  EXPECT_TRUE(HasErrorCode(
      idc_.StartRecovery(PrincipalId("nobody"), kAlicePassword, std::nullopt, t0_).status(),
      ErrorCode::kRecoveryDenied));
}

TEST_F(IdcTest, MatchingPassportOpensTentativeSession) {
  auto s = idc_.StartRecovery(kAlice, std::nullopt, DocumentToText(Passport()), t0_);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->aal, Aal::kAal1);
  EXPECT_EQ(idc_.Recovery(kAlice)->state, RecoveryState::kTentativeIdc);
}

TEST_F(IdcTest, TentativeSessionSeesOnlyTheRestrictedSubset) {
  const IdcSession full = idc_.OpenSession(kAlice, Aal::kAal3);
  ASSERT_TRUE(idc_.StoreBackupPasswords(full.session_id, {{kBaa1, "cat"}}).ok());
  auto s = idc_.StartRecovery(kAlice, kAlicePassword, std::nullopt, t0_);
  ASSERT_TRUE(s.ok());

  auto view = idc_.ViewTrusted(s->session_id);
  ASSERT_TRUE(view.ok());
  EXPECT_EQ(view->trusted_idps.size(), 3u);
  ASSERT_EQ(view->backup_passwords.size(), 1u);
  EXPECT_EQ(view->backup_passwords[0].password, "cat");

  const auto denied = ErrorCode::kTentativeAccessDenied;
  EXPECT_TRUE(HasErrorCode(idc_.RestoreCredentials(s->session_id, "pw").status(), denied));
  EXPECT_TRUE(HasErrorCode(idc_.ViewPabac(s->session_id).status(), denied));
  EXPECT_TRUE(HasErrorCode(idc_.RevokeConsent(s->session_id, "age", kSp1), denied));
  EXPECT_TRUE(HasErrorCode(idc_.AuthorizeNewDevice(s->session_id), denied));
  EXPECT_TRUE(HasErrorCode(
      idc_.AcquireIdentityDocument(s->session_id, DocumentToText(Passport()), t0_).status(),
      denied));
  EXPECT_TRUE(HasErrorCode(idc_.StoreBackupPasswords(s->session_id, {}), denied));
  EXPECT_TRUE(HasErrorCode(idc_.BeginMcProxy(kSp1, kAlice, {"msisdn"}, t0_).status(), denied));
  EXPECT_FALSE(idc_.ViewProfile(s->session_id)->editable);
}

TEST_F(IdcTest, FullRecoveryReachesAal3) {
  ReportLoss(kAlice);
  auto s = idc_.StartRecovery(kAlice, kAlicePassword, std::nullopt, t0_);
  ASSERT_TRUE(s.ok());
  ASSERT_EQ(PassMc(kAlice, t0_ + seconds(10))->state, RecoveryState::kMcVerified);
  auto verdict = PassBaa(kAlice, DeviceId("new-phone"), owner_, t0_ + seconds(20));
  ASSERT_TRUE(verdict.ok()) << verdict.status();
  EXPECT_EQ(verdict->state, RecoveryState::kVerdictReceived);
  EXPECT_EQ(*idc_.SessionAal(s->session_id), Aal::kAal1);
  ASSERT_TRUE(idc_.RecoveryGrantFullAccess(kAlice).ok());
  EXPECT_EQ(*idc_.SessionAal(s->session_id), Aal::kAal3);
  EXPECT_TRUE(idc_.AuthorizeNewDevice(s->session_id).ok());
  EXPECT_EQ(idc_.Recovery(kAlice)->evidence,
            (std::vector<std::string>{"backup_password_accepted", "mc_lost_confirmed",
                                      "baa_login", "records_streaming", "verdict_match",
                                      "grant_full_access"}));
  // SP-bound issuance resumes.
  EXPECT_TRUE(idc_.BeginMcProxy(kSp1, kAlice, {"msisdn"}, t0_ + seconds(60)).ok());
}

TEST_F(IdcTest, McWithoutLossReportStaysTentative) {
  ASSERT_TRUE(idc_.StartRecovery(kAlice, kAlicePassword, std::nullopt, t0_).ok());
  EXPECT_TRUE(HasErrorCode(PassMc(kAlice, t0_).status(), ErrorCode::kMcCheckFailed));
  EXPECT_EQ(idc_.Recovery(kAlice)->state, RecoveryState::kTentativeIdc);
}

TEST_F(IdcTest, ImpostorVerdictFailsAndLocksDeviceOut) {
  ReportLoss(kAlice);
  ASSERT_TRUE(idc_.StartRecovery(kAlice, kAlicePassword, std::nullopt, t0_).ok());
  ASSERT_TRUE(PassMc(kAlice, t0_).ok());
  auto result = PassBaa(kAlice, DeviceId("thief-phone"), device::ShiftedGenerator(owner_, 5.0),
                        t0_ + seconds(20));
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->state, RecoveryState::kFailed);
  EXPECT_TRUE(baa_.IsLockedOut(DeviceId("thief-phone")));
  EXPECT_TRUE(HasErrorCode(idc_.RecoveryGrantFullAccess(kAlice).status(),
                           ErrorCode::kIllegalTransition));
}

TEST_F(IdcTest, SkippingMcIsIllegal) {
  ASSERT_TRUE(idc_.StartRecovery(kAlice, kAlicePassword, std::nullopt, t0_).ok());
  auto access = baa_.Login(kAlice, "cat", t0_);
  EXPECT_TRUE(HasErrorCode(idc_.RecoveryBaaLogin(kAlice, *access, t0_).status(),
                           ErrorCode::kIllegalTransition));
}

TEST_F(IdcTest, InterleavedRecoveriesDoNotInterfere) {
  ReportLoss(kAlice);
  ReportLoss(kBob);
  ASSERT_TRUE(idc_.StartRecovery(kAlice, kAlicePassword, std::nullopt, t0_).ok());
  ASSERT_TRUE(idc_.StartRecovery(kBob, std::string("bob's long backup phrase"), std::nullopt, t0_)
                  .ok());
  auto alice_sms = idc_.RecoveryBeginMc(kAlice, t0_);
  auto bob_sms = idc_.RecoveryBeginMc(kBob, t0_);
  // Bob's code does not advance alice.
  EXPECT_FALSE(idc_.RecoveryCompleteMc(kAlice, bob_sms->challenge_id, bob_sms->code, t0_).ok());
  ASSERT_TRUE(idc_.RecoveryCompleteMc(kBob, bob_sms->challenge_id, bob_sms->code, t0_).ok());
  ASSERT_TRUE(
      idc_.RecoveryCompleteMc(kAlice, alice_sms->challenge_id, alice_sms->code, t0_).ok());
  auto bob = PassBaa(kBob, DeviceId("bob-new"), device::ShiftedGenerator(owner_, 5.0),
                     t0_ + seconds(100));
  auto alice = PassBaa(kAlice, DeviceId("alice-new"), owner_, t0_ + seconds(200));
  ASSERT_TRUE(bob.ok() && alice.ok());
  EXPECT_EQ(bob->state, RecoveryState::kFailed);
  EXPECT_EQ(alice->state, RecoveryState::kVerdictReceived);
}

TEST_F(IdcTest, ProfileViewReflectsDisclosuresWithRisk) {
  idc_.RecordDisclosure({kAlice, kSp1, "age_band", "25-34", "s1",
                         risk::DisclosureProtocol::kFederated, t0_});
  const IdcSession s = idc_.OpenSession(kAlice, Aal::kAal2);
  auto view = idc_.ViewProfile(s.session_id);
  ASSERT_TRUE(view.ok());
  EXPECT_TRUE(view->editable);
  ASSERT_EQ(view->audiences.size(), 1u);
  EXPECT_EQ(view->audiences[0].audience, kSp1);
  EXPECT_EQ(view->audiences[0].attributes, std::vector<std::string>{"age_band"});
  ASSERT_TRUE(view->audiences[0].top_risk);
  // Three rows share 25-34, all three in DE.
  EXPECT_EQ(view->audiences[0].top_risk->target, "country");
  EXPECT_DOUBLE_EQ(view->audiences[0].top_risk->score, 1.0);
}

TEST_F(IdcTest, RevokedConsentPropagates) {
  const IdcSession s = idc_.OpenSession(kAlice, Aal::kAal2);
  ASSERT_TRUE(idc_.EditConsent(s.session_id, {"age", kSp1, identity::ConsentDecision::kAllow,
                                              std::nullopt})
                  .ok());
  EXPECT_EQ(idc_.ConsentFor(kAlice, kSp1, {"age"}, t0_).at("age"),
            identity::ConsentDecision::kAllow);
  ASSERT_TRUE(idc_.RevokeConsent(s.session_id, "age", kSp1).ok());
  EXPECT_EQ(idc_.ConsentFor(kAlice, kSp1, {"age"}, t0_).at("age"),
            identity::ConsentDecision::kDeny);
}

TEST_F(IdcTest, JournalReplayRebuildsCheckpoint) {
  const IdcSession s = idc_.OpenSession(kAlice, Aal::kAal3);
  ASSERT_TRUE(idc_.SetLock(s.session_id, LockScope::Of(kSp1), t0_).ok());
  idc_.RecordDisclosure({kAlice, kSp1, "country", "DE", "s1",
                         risk::DisclosureProtocol::kFederated, t0_});
  for (int i = 0; i < 10; ++i) idc_.ReportAuthFailure(kBob, t0_);
  ASSERT_TRUE(idc_.ReleaseLock(s.session_id, LockScope::Of(kSp1)).ok());

  crypto::Drbg other(1);
  IdentityConsolidator replica(PrincipalId("idc"), IdcConfig{},
                               crypto::SigningKey::Generate(other), other.Fork("r"));
  for (const Json& entry : idc_.journal()) ASSERT_TRUE(replica.ApplyJournal(entry).ok());
  EXPECT_EQ(CanonicalJson(replica.Checkpoint()), CanonicalJson(idc_.Checkpoint()));
  EXPECT_TRUE(replica.IsLocked(kBob, kSp1));
}

}  // namespace
}  // namespace authsim::idc

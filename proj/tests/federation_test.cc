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

#include <set>
#include <string>

#include "authsim/common/status.h"
#include "authsim/crypto/byte_scan.h"
#include "authsim/device/device.h"
#include "authsim/federation/idp.h"
#include "authsim/federation/sp.h"
#include "authsim/federation/token.h"

namespace authsim::federation {
namespace {

using identity::ConsentDecision;
using std::chrono::seconds;

constexpr char kOrigin[] = "https://idp.example";

class FederationTest : public ::testing::Test {
 protected:
  FederationTest()
      : rng_(7),
        idp_(PrincipalId("idp.example"), IdpConfig{.origin = kOrigin},
             crypto::SigningKey::Generate(rng_), rng_.Fork("idp")),
        device_(DeviceId("dev-alice"), PrincipalId("alice"), device::DeviceConfig{},
                rng_.Fork("device")),
        sp_(PrincipalId("sp.shop"), kOrigin, idp_.verify_key(), rng_.Fork("sp")) {
    idp_.RegisterClient(sp_.id());
    idp_.UpsertAccount(
        "alice", {{"age", std::int64_t{34}, idp_.id(), t0_},
                  {"country", std::string("de"), idp_.id(), t0_},
                  {"email", std::string("alice.unique@example.org"), idp_.id(), t0_}});
    auto challenge = idp_.BeginRegistration("alice", t0_);
    EXPECT_TRUE(device_.UnlockGate(true, t0_).ok());
    auto reg = device_.EnrollKey("idp.example", "alice", *challenge, t0_);
    EXPECT_TRUE(idp_.CompleteRegistration(*reg, t0_).ok());
  }

  device::Assertion Assert(const std::string& challenge,
                           const std::string& binding = kOrigin) {
    EXPECT_TRUE(device_.UnlockGate(true, now_).ok());
    return *device_.SignAssertion("idp.example", "alice", challenge, binding, now_);
  }

  static ConsentDecisions AllowAll(const std::vector<std::string>& names) {
    ConsentDecisions d;
    for (const auto& n : names) d[n] = ConsentDecision::kAllow;
    return d;
  }

  // Runs the whole flow and returns the token the SP received.
  AccessToken Login(const std::vector<std::string>& attrs) {
    std::string sid = sp_.BeginLogin(attrs);
    auto req = idp_.BeginAuthorization(sp_.id(), sid, attrs, now_);
    EXPECT_TRUE(req.ok());
    auto code = idp_.CompleteFidoAuthentication("alice", Assert(req->nonce),
                                                AllowAll(attrs), now_);
    EXPECT_TRUE(code.ok()) << code.status();
    EXPECT_TRUE(sp_.OnAuthnResponse(*code, kOrigin).ok());
    auto token = idp_.ExchangeCode(code->code, sp_.id(), sid, code->csrf, now_);
    EXPECT_TRUE(token.ok()) << token.status();
    auto v = sp_.OnToken(sid, *token, now_);
    EXPECT_TRUE(v.ok() && v->valid);
    return *token;
  }

  SimTime t0_ = FromMillis(5'000'000);
  SimTime now_ = t0_ + seconds(1);
  crypto::Drbg rng_;
  IdentityProvider idp_;
  device::Device device_;
  ServiceProvider sp_;
};

TEST_F(FederationTest, UnregisteredSpIsUnknownClient) {
  EXPECT_TRUE(HasErrorCode(
      idp_.BeginAuthorization(PrincipalId("sp.rogue"), "s", {"age"}, now_).status(),
      ErrorCode::kUnknownClient));
}

TEST_F(FederationTest, RequestsCarryFreshNonceAndCsrf) {
  auto a = idp_.BeginAuthorization(sp_.id(), "s1", {"age"}, now_);
  auto b = idp_.BeginAuthorization(sp_.id(), "s1", {"age"}, now_);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->attributes, std::vector<std::string>{"age"});
  EXPECT_NE(a->nonce, b->nonce);
  EXPECT_NE(a->csrf, b->csrf);
  EXPECT_EQ(a->origin, kOrigin);
  EXPECT_EQ(a->expires_at, now_ + seconds(120));
}

TEST_F(FederationTest, HappyPathTokenCarriesRequestedValues) {
  AccessToken token = Login({"age", "country"});
  EXPECT_EQ(std::get<std::int64_t>(token.scope.at("age")), 34);
  EXPECT_EQ(std::get<std::string>(token.scope.at("country")), "de");
  EXPECT_FALSE(token.scope.contains("email"));
  EXPECT_EQ(token.aal, identity::Aal::kAal2);
  EXPECT_EQ(token.audience, sp_.id());
}

TEST_F(FederationTest, SameAssertionTwiceIsReplay) {
  auto req = idp_.BeginAuthorization(sp_.id(), "s", {"age"}, now_);
  device::Assertion a = Assert(req->nonce);
  ASSERT_TRUE(
      idp_.CompleteFidoAuthentication("alice", a, AllowAll({"age"}), now_).ok());
  EXPECT_TRUE(HasErrorCode(
      idp_.CompleteFidoAuthentication("alice", a, AllowAll({"age"}), now_).status(),
      ErrorCode::kReplayDetected));
}

TEST_F(FederationTest, ConsentDenyOnOneAttributeYieldsNoCode) {
  auto req = idp_.BeginAuthorization(sp_.id(), "s", {"age", "country"}, now_);
  ConsentDecisions c = AllowAll({"age"});
  c["country"] = ConsentDecision::kDeny;
  EXPECT_TRUE(HasErrorCode(
      idp_.CompleteFidoAuthentication("alice", Assert(req->nonce), c, now_).status(),
      ErrorCode::kConsentDenied));
  // Missing decision is a deny too.
  EXPECT_TRUE(HasErrorCode(idp_.CompleteFidoAuthentication(
                                   "alice", Assert(req->nonce), AllowAll({"age"}), now_)
                               .status(),
                           ErrorCode::kConsentDenied));
  EXPECT_EQ(idp_.consumed_nonce_count(), 0u);
}

TEST_F(FederationTest, TamperedAssertionsFailAuthentication) {
  auto req = idp_.BeginAuthorization(sp_.id(), "s", {"age"}, now_);
  device::Assertion a = Assert(req->nonce);
  device::Assertion bad_sig = a;
  bad_sig.signature[0] ^= 1;
  EXPECT_TRUE(HasErrorCode(
      idp_.CompleteFidoAuthentication("alice", bad_sig, AllowAll({"age"}), now_).status(),
      ErrorCode::kAuthenticationFailed));
  // Bound to a phishing origin.
  device::Assertion phished = Assert(req->nonce, "https://idp.example.evil");
  EXPECT_TRUE(HasErrorCode(
      idp_.CompleteFidoAuthentication("alice", phished, AllowAll({"age"}), now_).status(),
      ErrorCode::kAuthenticationFailed));
  ASSERT_TRUE(
      idp_.CompleteFidoAuthentication("alice", a, AllowAll({"age"}), now_).ok());
  // Stale counter on a fresh request.
  auto req2 = idp_.BeginAuthorization(sp_.id(), "s", {"age"}, now_);
  device::Assertion stale = a;
  stale.challenge = req2->nonce;
  EXPECT_TRUE(HasErrorCode(
      idp_.CompleteFidoAuthentication("alice", stale, AllowAll({"age"}), now_).status(),
      ErrorCode::kAuthenticationFailed));
}

TEST_F(FederationTest, ExpiredRequestIsRejected) {
  auto req = idp_.BeginAuthorization(sp_.id(), "s", {"age"}, now_);
  now_ += seconds(121);
  EXPECT_TRUE(HasErrorCode(idp_.CompleteFidoAuthentication(
                                   "alice", Assert(req->nonce), AllowAll({"age"}), now_)
                               .status(),
                           ErrorCode::kExpired));
}

TEST_F(FederationTest, CodeExchangeDefenses) {
  std::string sid = sp_.BeginLogin({"age"});
  auto req = idp_.BeginAuthorization(sp_.id(), sid, {"age"}, now_);
  auto code = idp_.CompleteFidoAuthentication("alice", Assert(req->nonce),
                                              AllowAll({"age"}), now_);
  ASSERT_TRUE(code.ok());
  idp_.RegisterClient(PrincipalId("sp.other"));
  EXPECT_TRUE(HasErrorCode(
      idp_.ExchangeCode(code->code, PrincipalId("sp.other"), sid, code->csrf, now_)
          .status(),
      ErrorCode::kAudienceMismatch));
  EXPECT_TRUE(HasErrorCode(
      idp_.ExchangeCode(code->code, sp_.id(), sid, "", now_).status(),
      ErrorCode::kCsrfRejected));
  EXPECT_TRUE(HasErrorCode(
      idp_.ExchangeCode(code->code, sp_.id(), sid, req->nonce, now_).status(),
      ErrorCode::kCsrfRejected));
  EXPECT_TRUE(HasErrorCode(
      idp_.ExchangeCode(code->code, sp_.id(), "attacker-session", code->csrf, now_)
          .status(),
      ErrorCode::kCsrfRejected));
  ASSERT_TRUE(idp_.ExchangeCode(code->code, sp_.id(), sid, code->csrf, now_).ok());
  EXPECT_TRUE(HasErrorCode(
      idp_.ExchangeCode(code->code, sp_.id(), sid, code->csrf, now_).status(),
      ErrorCode::kReplayDetected));
  EXPECT_TRUE(HasErrorCode(
      idp_.ExchangeCode("nope", sp_.id(), sid, code->csrf, now_).status(),
      ErrorCode::kInvalidGrant));
}

TEST_F(FederationTest, SpRejectsResponseFromForeignOrigin) {
  std::string sid = sp_.BeginLogin({"age"});
  IssuedCode forged{"c", sp_.id(), sid, "x"};
  EXPECT_TRUE(HasErrorCode(sp_.OnAuthnResponse(forged, "https://evil.example"),
                           ErrorCode::kCsrfRejected));
  EXPECT_TRUE(sp_.OnAuthnResponse(forged, kOrigin).ok());
}

TEST_F(FederationTest, TokenValidation) {
  AccessToken token = Login({"age"});
  EXPECT_TRUE(ValidateToken(token, idp_.verify_key(), sp_.id(), now_).valid);
  TokenValidation wrong = ValidateToken(token, idp_.verify_key(), PrincipalId("sp.x"), now_);
  EXPECT_FALSE(wrong.valid);
  EXPECT_EQ(wrong.reason, ErrorCode::kAudienceMismatch);
  TokenValidation late =
      ValidateToken(token, idp_.verify_key(), sp_.id(), token.expires_at);
  EXPECT_EQ(late.reason, ErrorCode::kExpired);
  AccessToken widened = token;
  widened.scope["email"] = std::string("x");
  EXPECT_EQ(ValidateToken(widened, idp_.verify_key(), sp_.id(), now_).reason,
            ErrorCode::kAuthenticationFailed);
  auto round = TokenFromJson(TokenToJson(token));
  ASSERT_TRUE(round.ok());
  EXPECT_TRUE(ValidateToken(*round, idp_.verify_key(), sp_.id(), now_).valid);
}

TEST_F(FederationTest, LockedAccountIsRefused) {
  std::string sid = sp_.BeginLogin({"age"});
  auto req = idp_.BeginAuthorization(sp_.id(), sid, {"age"}, now_);
  auto code = idp_.CompleteFidoAuthentication("alice", Assert(req->nonce),
                                              AllowAll({"age"}), now_);
  ASSERT_TRUE(code.ok());
  idp_.SetAccountLocked("alice", true);
  EXPECT_TRUE(HasErrorCode(
      idp_.ExchangeCode(code->code, sp_.id(), sid, code->csrf, now_).status(),
      ErrorCode::kAccountLocked));
  auto req2 = idp_.BeginAuthorization(sp_.id(), sid, {"age"}, now_);
  EXPECT_TRUE(HasErrorCode(idp_.CompleteFidoAuthentication(
                                   "alice", Assert(req2->nonce), AllowAll({"age"}), now_)
                               .status(),
                           ErrorCode::kAccountLocked));
}

TEST_F(FederationTest, SubjectsArePairwiseDistinctAndCarryNoStableId) {
  std::set<std::string> subjects;
  for (int i = 0; i < 20; ++i) {
    subjects.insert(Login({"age"}).subject);
    now_ += seconds(1);
  }
  EXPECT_EQ(subjects.size(), 20u);
  const std::string storage = sp_.StorageBytes();
  EXPECT_FALSE(crypto::ContainsEncoded(storage, crypto::AsBytes("alice")));
  EXPECT_FALSE(crypto::ContainsEncoded(storage,
                                       crypto::AsBytes("dev-alice")));
}

// Longest common substring between two subjects stays near what random hex
// strings share.
TEST_F(FederationTest, PseudonymsShareNoLongSubstring) {
  auto lcs = [](const std::string& a, const std::string& b) {
    std::size_t best = 0;
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t i = 1; i <= a.size(); ++i) {
      for (std::size_t j = 1; j <= b.size(); ++j) {
        cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
        best = std::max(best, cur[j]);
      }
      std::swap(prev, cur);
    }
    return best;
  };
  Pseudonym a = idp_.issuer().IssuePseudonym("s1");
  Pseudonym b = idp_.issuer().IssuePseudonym("s2");
  // P(common run >= 8 hex chars) is below 32*32/16^8.
  EXPECT_LT(lcs(a.value, b.value), 8u);
}

TEST_F(FederationTest, TenThousandPseudonymsNeverCollide) {
  std::set<std::string> seen;
  for (int i = 0; i < 10'000; ++i) {
    seen.insert(idp_.issuer().IssuePseudonym("s").value);
  }
  EXPECT_EQ(seen.size(), 10'000u);
  EXPECT_EQ(idp_.issuer().pseudonyms_issued(), 10'000u);
}

TEST_F(FederationTest, PseudonymCannotBackTwoTokens) {
  Pseudonym p = idp_.issuer().IssuePseudonym("s");
  ASSERT_TRUE(idp_.issuer().Mint(p, sp_.id(), {}, identity::Aal::kAal2, now_).ok());
  EXPECT_TRUE(HasErrorCode(
      idp_.issuer().Mint(p, sp_.id(), {}, identity::Aal::kAal2, now_).status(),
      ErrorCode::kPseudonymReused));
  EXPECT_TRUE(HasErrorCode(idp_.issuer()
                               .Mint({"forged", "s"}, sp_.id(), {},
                                     identity::Aal::kAal2, now_)
                               .status(),
                           ErrorCode::kPseudonymReused));
}

TEST_F(FederationTest, QrBridgeCompletesTheDesktopSession) {
  std::string desktop = sp_.BeginLogin({"age"});
  auto qr = idp_.BeginQr(sp_.id(), desktop, {"age"}, now_);
  ASSERT_TRUE(qr.ok());
  EXPECT_EQ(qr->payload.at("endpoint"), std::string(kOrigin) + "/qr");
  device::Assertion a = Assert(qr->payload.at("challenge").get<std::string>());
  auto code = idp_.ClaimQr(qr->qr_id, "alice", a, AllowAll({"age"}), now_);
  ASSERT_TRUE(code.ok()) << code.status();
  EXPECT_EQ(code->redirect_session, desktop);
  EXPECT_EQ(idp_.QrStatus(qr->qr_id, now_), QrState::kCompleted);
  EXPECT_TRUE(HasErrorCode(
      idp_.ClaimQr(qr->qr_id, "alice", a, AllowAll({"age"}), now_).status(),
      ErrorCode::kAlreadyClaimed));
  ASSERT_TRUE(sp_.OnAuthnResponse(*code, kOrigin).ok());
  auto token = idp_.ExchangeCode(code->code, sp_.id(), desktop, code->csrf, now_);
  ASSERT_TRUE(token.ok());
  EXPECT_TRUE(sp_.OnToken(desktop, *token, now_)->valid);
}

TEST_F(FederationTest, QrExpiresAfterTtl) {
  auto qr = idp_.BeginQr(sp_.id(), "desk", {"age"}, now_);
  now_ += seconds(120);
  device::Assertion a = Assert(qr->payload.at("challenge").get<std::string>());
  EXPECT_TRUE(HasErrorCode(
      idp_.ClaimQr(qr->qr_id, "alice", a, AllowAll({"age"}), now_).status(),
      ErrorCode::kExpired));
  EXPECT_EQ(idp_.QrStatus(qr->qr_id, now_), QrState::kExpired);
}

TEST_F(FederationTest, PasswordBaselineYieldsAal1) {
  idp_.SetPassword("alice", "correct horse battery");
  std::string sid = sp_.BeginLogin({"age"});
  auto req = idp_.BeginAuthorization(sp_.id(), sid, {"age"}, now_);
  EXPECT_TRUE(HasErrorCode(idp_.CompletePasswordAuthentication(
                                   "alice", "wrong", req->nonce, AllowAll({"age"}), now_)
                               .status(),
                           ErrorCode::kAuthenticationFailed));
  auto code = idp_.CompletePasswordAuthentication(
      "alice", "correct horse battery", req->nonce, AllowAll({"age"}), now_);
  ASSERT_TRUE(code.ok());
  auto token = idp_.ExchangeCode(code->code, sp_.id(), sid, code->csrf, now_);
  ASSERT_TRUE(token.ok());
  EXPECT_EQ(token->aal, identity::Aal::kAal1);
}

class FixedModule : public CredentialAuthModule {
 public:
  absl::StatusOr<Scope> VerifyPresentation(const Json& p, const std::string& nonce,
                                           SimTime) override {
    if (p.value("nonce", "") != nonce) {
      return MakeError(ErrorCode::kAuthenticationFailed, "nonce");
    }
    return Scope{{"over18", true}};
  }
};

TEST_F(FederationTest, CredentialModuleLoginIsAnonymous) {
  std::string sid = sp_.BeginLogin({"over18"});
  auto req = idp_.BeginAuthorization(sp_.id(), sid, {"over18"}, now_);
  EXPECT_TRUE(HasErrorCode(
      idp_.CompleteCredentialAuthentication({{"nonce", req->nonce}}, req->nonce, now_)
          .status(),
      ErrorCode::kNoVerifier));
  idp_.SetCredentialModule(std::make_unique<FixedModule>());
  auto code =
      idp_.CompleteCredentialAuthentication({{"nonce", req->nonce}}, req->nonce, now_);
  ASSERT_TRUE(code.ok());
  EXPECT_EQ(idp_.CodeAccount(code->code), std::nullopt);
  auto token = idp_.ExchangeCode(code->code, sp_.id(), sid, code->csrf, now_);
  ASSERT_TRUE(token.ok());
  EXPECT_EQ(token->scope, (Scope{{"over18", true}}));
  EXPECT_EQ(token->aal, identity::Aal::kNone);
}

TEST_F(FederationTest, RegistrationNeedsAFreshChallenge) {
  auto challenge = idp_.BeginRegistration("alice", now_);
  ASSERT_TRUE(device_.UnlockGate(true, now_).ok());
  auto reg = device_.EnrollKey("idp.example", "alice-2", *challenge, now_);
  ASSERT_TRUE(reg.ok());
  // Challenge was issued for another account.
  EXPECT_TRUE(HasErrorCode(idp_.CompleteRegistration(*reg, now_),
                           ErrorCode::kAuthenticationFailed));
  EXPECT_EQ(idp_.Authenticators("alice").size(), 1u);
}

}  // namespace
}  // namespace authsim::federation

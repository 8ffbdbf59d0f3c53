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

#include <cmath>

#include "authsim/baa/authority.h"
#include "authsim/baa/password_vault.h"
#include "authsim/baa/profile.h"
#include "authsim/common/status.h"
#include "authsim/device/behavior.h"

namespace authsim::baa {

namespace {

using std::chrono::seconds;

class BaaTest : public ::testing::Test {
 protected:
  BaaTest()
      : rng_(21),
        baa_(PrincipalId("baa.one"), BaaConfig{}, crypto::SigningKey::Generate(rng_),
             rng_.Fork("baa")),
        owner_gen_(device::FixtureOwnerGenerator()),
        impostor_gen_(device::ShiftedGenerator(owner_gen_, 5.0)) {
    baa_.EnrollUser(alice_, "cat");
  }

  void Stream(const device::BehaviorGenerator& gen, std::size_t n, SimTime start,
              AccessMode mode, const DeviceId& dev = DeviceId("d1")) {
    for (std::size_t i = 0; i < n; ++i) {
      device::BehavioralRecord r{dev, alice_, start + seconds(i), gen.Sample(rng_)};
      ASSERT_TRUE(baa_.Ingest(r, mode).ok());
    }
  }

  void Train() { Stream(owner_gen_, 50, t0_, AccessMode::kFull); }

  PrincipalId alice_{"alice"};
  SimTime t0_ = FromMillis(10'000);
  crypto::Drbg rng_;
  BehavioralAuthority baa_;
  device::BehaviorGenerator owner_gen_;
  device::BehaviorGenerator impostor_gen_;
};

// Welford against a two-pass textbook mean/variance.
TEST(ProfileTest, RunningStatsMatchTwoPassOracle) {
  crypto::Drbg rng(4);
  device::BehaviorGenerator gen = device::FixtureOwnerGenerator(3);
  std::vector<std::vector<double>> samples;
  BehavioralProfile p(PrincipalId("u"), 3);
  for (int i = 0; i < 200; ++i) {
    samples.push_back(gen.Sample(rng));
    ASSERT_TRUE(p.Update(samples.back()).ok());
  }
  for (std::size_t f = 0; f < 3; ++f) {
    double sum = 0;
    for (const auto& s : samples) sum += s[f];
    const double mean = sum / samples.size();
    double ss = 0;
    for (const auto& s : samples) ss += (s[f] - mean) * (s[f] - mean);
    EXPECT_NEAR(p.mean(f), mean, 1e-9);
    EXPECT_NEAR(p.variance(f), ss / samples.size(), 1e-7);
    EXPECT_GE(p.variance(f), 0.0);
  }
  EXPECT_EQ(p.count(), 200u);
}

TEST(ProfileTest, TrainedFlipsAtTheMinimum) {
  BehavioralProfile p(PrincipalId("u"), 1);
  for (int i = 0; i < 49; ++i) ASSERT_TRUE(p.Update(std::vector<double>{1.0 * i}).ok());
  EXPECT_FALSE(p.trained(50));
  ASSERT_TRUE(p.Update(std::vector<double>{0.0}).ok());
  EXPECT_TRUE(p.trained(50));
}

TEST_F(BaaTest, FullModeRecordTrainsTheProfile) {
  Stream(owner_gen_, 1, t0_, AccessMode::kFull);
  EXPECT_EQ(baa_.Profile(alice_)->count(), 1u);
}

TEST_F(BaaTest, TentativeRecordsAreScoredNotLearned) {
  Train();
  const BehavioralProfile before = *baa_.Profile(alice_);
  Stream(impostor_gen_, 30, t0_ + seconds(1000), AccessMode::kTentative);
  EXPECT_EQ(*baa_.Profile(alice_), before);
  EXPECT_EQ(baa_.WindowSize(alice_), 80u);
  auto v = baa_.ComputeVerdict({PrincipalId("idc"), alice_, t0_ + seconds(1000)});
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(*v, Verdict::kNoMatch);
}

TEST_F(BaaTest, WrongDimensionIsRejected) {
  device::BehavioralRecord r{DeviceId("d1"), alice_, t0_, {1.0, 2.0}};
  EXPECT_TRUE(HasErrorCode(baa_.Ingest(r, AccessMode::kFull),
                           ErrorCode::kFeatureDimensionError));
}

TEST_F(BaaTest, OwnerMatchesImpostorDoesNot) {
  Train();
  const SimTime boundary = t0_ + seconds(1000);
  Stream(owner_gen_, 20, boundary, AccessMode::kTentative);
  EXPECT_EQ(*baa_.ComputeVerdict({PrincipalId("idc"), alice_, boundary}), Verdict::kMatch);
  const SimTime later = boundary + seconds(1000);
  Stream(impostor_gen_, 20, later, AccessMode::kTentative);
  EXPECT_EQ(*baa_.ComputeVerdict({PrincipalId("idc"), alice_, later}), Verdict::kNoMatch);
}

TEST_F(BaaTest, FewRecordsAreInsufficient) {
  Train();
  const SimTime boundary = t0_ + seconds(1000);
  Stream(owner_gen_, 5, boundary, AccessMode::kTentative);
  EXPECT_EQ(*baa_.ComputeVerdict({PrincipalId("idc"), alice_, boundary}),
            Verdict::kInsufficientData);
}

TEST_F(BaaTest, UntrainedProfileHasNoVerdict) {
  Stream(owner_gen_, 20, t0_, AccessMode::kFull);
  EXPECT_TRUE(HasErrorCode(
      baa_.ComputeVerdict({PrincipalId("idc"), alice_, t0_}).status(),
      ErrorCode::kProfileNotTrained));
}

// Adversarial pre-boundary records do not move the verdict.
TEST_F(BaaTest, PreBoundaryRecordsAreIgnored) {
  Train();
  const SimTime boundary = t0_ + seconds(5000);
  Stream(owner_gen_, 25, boundary, AccessMode::kTentative);
  const Verdict clean = *baa_.ComputeVerdict({PrincipalId("idc"), alice_, boundary});
  Stream(impostor_gen_, 200, boundary - seconds(300), AccessMode::kTentative);
  EXPECT_EQ(*baa_.ComputeVerdict({PrincipalId("idc"), alice_, boundary}), clean);
  EXPECT_EQ(clean, Verdict::kMatch);
}

TEST_F(BaaTest, VerdictIsDeterministic) {
  Train();
  Stream(owner_gen_, 30, t0_ + seconds(100), AccessMode::kTentative);
  VerdictRequest req{PrincipalId("idc"), alice_, t0_ + seconds(100)};
  EXPECT_EQ(*baa_.ComputeVerdict(req), *baa_.ComputeVerdict(req));
}

// Over 100 seeded trials the owner matches and the 5-sigma impostor does not.
TEST(BaaSeparationTest, SeededTrialsSeparateOwnerAndImpostor) {
  const auto owner = device::FixtureOwnerGenerator();
  const auto impostor = device::ShiftedGenerator(owner, 5.0);
  BaaConfig config;
  int owner_matches = 0, impostor_matches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    crypto::Drbg rng(1000 + trial);
    BehavioralProfile p(PrincipalId("u"), config.dimension);
    for (std::size_t i = 0; i < config.training_min; ++i) {
      ASSERT_TRUE(p.Update(owner.Sample(rng)).ok());
    }
    std::vector<std::vector<double>> mine, theirs;
    for (std::size_t i = 0; i < config.n_min; ++i) {
      mine.push_back(owner.Sample(rng));
      theirs.push_back(impostor.Sample(rng));
    }
    owner_matches += ScoreWindow(p, mine, config) == Verdict::kMatch;
    impostor_matches += ScoreWindow(p, theirs, config) == Verdict::kMatch;
  }
  EXPECT_GE(owner_matches, 95);
  EXPECT_LE(impostor_matches, 5);
}

TEST_F(BaaTest, LoginGrantsTentativeAccess) {
  auto access = baa_.Login(alice_, "cat", t0_);
  ASSERT_TRUE(access.ok());
  EXPECT_EQ(access->mode, AccessMode::kTentative);
  EXPECT_TRUE(HasErrorCode(baa_.Login(alice_, "dog", t0_).status(), ErrorCode::kAccessDenied));
}

TEST_F(BaaTest, RapidWrongAttemptsAreRateLimited) {
  int denied = 0, limited = 0;
  for (int i = 0; i < 10; ++i) {
    absl::Status s = baa_.Login(alice_, "nope", t0_ + seconds(i)).status();
    denied += HasErrorCode(s, ErrorCode::kAccessDenied);
    limited += HasErrorCode(s, ErrorCode::kRateLimited);
  }
  EXPECT_EQ(denied, 5);
  EXPECT_EQ(limited, 5);
  // Even the right password waits for the window to pass.
  EXPECT_TRUE(HasErrorCode(baa_.Login(alice_, "cat", t0_ + seconds(30)).status(),
                           ErrorCode::kRateLimited));
  EXPECT_TRUE(baa_.Login(alice_, "cat", t0_ + seconds(65)).ok());
}

TEST_F(BaaTest, TentativeAccessCannotManageTheProfile) {
  Train();
  auto access = baa_.Login(alice_, "cat", t0_);
  EXPECT_TRUE(HasErrorCode(baa_.ResetProfile(*access), ErrorCode::kTentativeAccessDenied));
  EXPECT_EQ(baa_.Profile(alice_)->count(), 50u);
  EXPECT_TRUE(baa_.ResetProfile({alice_, AccessMode::kFull}).ok());
  EXPECT_EQ(baa_.Profile(alice_)->count(), 0u);
}

TEST_F(BaaTest, FederatedAssertionReleasesTheVerdict) {
  Train();
  const SimTime boundary = t0_ + seconds(1000);
  VerdictRequest req{PrincipalId("idc"), alice_, boundary};
  EXPECT_TRUE(HasErrorCode(
      baa_.FederatedAssertion(req, DeviceId("new"), true, boundary).status(),
      ErrorCode::kVerdictPending));
  Stream(owner_gen_, 20, boundary, AccessMode::kTentative, DeviceId("new"));
  auto token = baa_.FederatedAssertion(req, DeviceId("new"), true, boundary + seconds(30));
  ASSERT_TRUE(token.ok());
  EXPECT_EQ(token->audience, PrincipalId("idc"));
  EXPECT_EQ(std::get<std::string>(token->scope.at("behavior")), "match");
  EXPECT_TRUE(federation::ValidateToken(*token, baa_.verify_key(), PrincipalId("idc"),
                                        boundary + seconds(31))
                  .valid);
  EXPECT_FALSE(baa_.IsLockedOut(DeviceId("new")));
}

TEST_F(BaaTest, RecoveryNoMatchLocksTheDeviceOut) {
  Train();
  const SimTime boundary = t0_ + seconds(1000);
  Stream(impostor_gen_, 20, boundary, AccessMode::kTentative, DeviceId("thief"));
  VerdictRequest req{PrincipalId("idc"), alice_, boundary};
  auto token = baa_.FederatedAssertion(req, DeviceId("thief"), true, boundary + seconds(30));
  ASSERT_TRUE(token.ok());
  EXPECT_EQ(std::get<std::string>(token->scope.at("behavior")), "no-match");
  EXPECT_TRUE(baa_.IsLockedOut(DeviceId("thief")));
  EXPECT_TRUE(HasErrorCode(
      baa_.FederatedAssertion(req, DeviceId("thief"), true, boundary + seconds(31)).status(),
      ErrorCode::kAccountLocked));
}

TEST_F(BaaTest, ContinuousNoMatchDoesNotLockOut) {
  Train();
  const SimTime boundary = t0_ + seconds(1000);
  Stream(impostor_gen_, 20, boundary, AccessMode::kTentative, DeviceId("d1"));
  auto token = baa_.FederatedAssertion({PrincipalId("sp.bank"), alice_, boundary},
                                       DeviceId("d1"), false, boundary + seconds(30));
  ASSERT_TRUE(token.ok());
  EXPECT_EQ(std::get<std::string>(token->scope.at("behavior")), "no-match");
  EXPECT_FALSE(baa_.IsLockedOut(DeviceId("d1")));
}

TEST(PasswordVaultTest, TentativeReadsButCannotWrite) {
  BackupPasswordVault vault{crypto::Drbg(8)};
  PrincipalId u("alice");
  EXPECT_TRUE(vault.List(u, identity::Aal::kAal1)->empty());
  std::vector<StoredPassword> list{{PrincipalId("baa.one"), "cat"},
                                   {PrincipalId("idp.forum"), "hunter2"}};
  EXPECT_TRUE(HasErrorCode(vault.Store(u, list, identity::Aal::kAal1),
                           ErrorCode::kTentativeAccessDenied));
  ASSERT_TRUE(vault.Store(u, list, identity::Aal::kAal3).ok());
  EXPECT_EQ(*vault.List(u, identity::Aal::kAal1), list);
  EXPECT_TRUE(HasErrorCode(vault.List(u, identity::Aal::kNone).status(),
                           ErrorCode::kAccessDenied));
}

}  // namespace
}  // namespace authsim::baa

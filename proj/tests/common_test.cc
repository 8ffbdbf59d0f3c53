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

#include <unordered_set>

#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/common/status.h"

namespace authsim {
namespace {

TEST(StatusTest, ErrorCodeTravelsAsPayload) {
  absl::Status s = MakeError(ErrorCode::kReplayDetected, "nonce reused");
  EXPECT_FALSE(s.ok());
  EXPECT_TRUE(HasErrorCode(s, ErrorCode::kReplayDetected));
  EXPECT_FALSE(HasErrorCode(s, ErrorCode::kExpired));
  EXPECT_EQ(StatusLabel(s), "ReplayDetected");
  EXPECT_EQ(StatusLabel(absl::OkStatus()), "OK");
  EXPECT_EQ(StatusLabel(absl::InternalError("x")), "INTERNAL");
}

TEST(StatusTest, NamesRoundTripForEveryCode) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kAlreadyExists); ++i) {
    auto code = static_cast<ErrorCode>(i);
    std::optional<ErrorCode> back = ErrorCodeFromName(ErrorCodeName(code));
    ASSERT_TRUE(back.has_value()) << i;
    EXPECT_EQ(*back, code);
  }
}

absl::StatusOr<int> Half(int v) {
  if (v % 2 != 0) return MakeError(ErrorCode::kInvalidArgument, "odd");
  return v / 2;
}

absl::StatusOr<int> Quarter(int v) {
  AUTHSIM_ASSIGN_OR_RETURN(int h, Half(v));
  AUTHSIM_ASSIGN_OR_RETURN(int q, Half(h));
  return q;
}

TEST(StatusTest, MacrosPropagate) {
  EXPECT_EQ(*Quarter(8), 2);
  EXPECT_TRUE(HasErrorCode(Quarter(6).status(), ErrorCode::kInvalidArgument));
}

TEST(IdsTest, StrongIdsCompareAndHash) {
  PrincipalId a("alice"), b("bob");
  EXPECT_LT(a, b);
  EXPECT_EQ(a, PrincipalId("alice"));
  std::unordered_set<PrincipalId> set{a, b, PrincipalId("alice")};
  EXPECT_EQ(set.size(), 2u);
}

TEST(JsonTest, CanonicalFormSortsKeys) {
  Json j = {{"b", 1}, {"a", {{"d", true}, {"c", "x"}}}};
  EXPECT_EQ(CanonicalJson(j), R"({"a":{"c":"x","d":true},"b":1})");
}

TEST(SimTimeTest, MillisRoundTrip) {
  SimTime t = FromMillis(1500);
  EXPECT_EQ(ToMillis(t + std::chrono::seconds(2)), 3500);
  EXPECT_EQ(ToMillis(SimEpoch()), 0);
}

}  // namespace
}  // namespace authsim

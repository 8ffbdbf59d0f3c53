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

#include <cstdlib>
#include <map>
#include <string>

#include "authsim/common/status.h"
#include "authsim/crypto/drbg.h"
#include "authsim/risk/ledger.h"
#include "authsim/risk/population.h"
#include "authsim/risk/risk.h"

namespace authsim::risk {
namespace {

std::string SourceDir() {
  const char* dir = std::getenv("AUTHSIM_SOURCE_DIR");
  return dir == nullptr ? "." : dir;
}

const PopulationTable& Fixture() {
  static const PopulationTable table = [] {
    auto t = PopulationTable::LoadCsv(SourceDir() + "/data/population.csv");
    if (!t.ok()) std::abort();
    return *std::move(t);
  }();
  return table;
}

// Flat-scan oracle, independent of the bitset index.
bool RowMatches(const PopulationTable& t, const std::vector<std::string>& row,
                const AttributeAssignment& filter) {
  for (const auto& [name, value] : filter) {
    std::size_t c = *t.ColumnIndex(name);
    if (row[c] != value) return false;
  }
  return true;
}

std::optional<double> OracleInference(const PopulationTable& t,
                                      const AttributeAssignment& r,
                                      const std::string& hidden) {
  std::size_t hidden_col = *t.ColumnIndex(hidden);
  std::size_t total = 0;
  std::map<std::string, std::size_t> by_value;
  for (const auto& row : t.rows()) {
    if (!RowMatches(t, row, r)) continue;
    ++total;
    ++by_value[row[hidden_col]];
  }
  if (total == 0) return std::nullopt;
  std::size_t best = 0;
  for (const auto& [v, n] : by_value) best = std::max(best, n);
  return static_cast<double>(best) / static_cast<double>(total);
}

std::optional<double> OracleRarity(const PopulationTable& t,
                                   const AttributeAssignment& d) {
  std::size_t k = 0;
  for (const auto& row : t.rows()) k += RowMatches(t, row, d) ? 1 : 0;
  if (k == 0) return std::nullopt;
  return 1.0 / static_cast<double>(k);
}

AttributeAssignment RandomAssignment(const PopulationTable& t, crypto::Drbg& rng,
                                     std::size_t max_size,
                                     const std::string& exclude = "") {
  AttributeAssignment out;
  // Draw values from a real row half of the time so most queries are
  // satisfiable, otherwise mix values across rows.
  const auto& anchor = t.rows()[rng.UniformInt(t.size())];
  std::size_t want = rng.UniformInt(max_size + 1);
  for (std::size_t i = 0; i < want; ++i) {
    std::size_t c = rng.UniformInt(t.columns().size());
    if (t.columns()[c] == exclude) continue;
    const std::string& value =
        rng.UniformInt(2) == 0 ? anchor[c] : t.rows()[rng.UniformInt(t.size())][c];
    out[t.columns()[c]] = value;
  }
  return out;
}

TEST(PopulationTest, FixtureShape) {
  const PopulationTable& t = Fixture();
  EXPECT_EQ(t.size(), 10000u);
  EXPECT_EQ(t.columns().size(), 6u);
  EXPECT_EQ(t.CountMatching({{"gender", "f"}}), 6000u);
}

TEST(PopulationTest, CsvErrors) {
  EXPECT_FALSE(PopulationTable::FromCsv("a,b\n1\n").ok());
  EXPECT_FALSE(PopulationTable::FromCsv("a,b\n").ok());
  EXPECT_FALSE(PopulationTable::FromCsv("a,a\n1,2\n").ok());
  auto quoted = PopulationTable::FromCsv("a,b\n\"x,y\",z\n");
  ASSERT_TRUE(quoted.ok());
  EXPECT_EQ(quoted->rows()[0][0], "x,y");
}

TEST(InferenceRiskTest, EmptyRevealedSetGivesMarginal) {
  // Oracle: 6000 of 10000 rows have gender f.
  ASSERT_DOUBLE_EQ(*OracleInference(Fixture(), {}, "gender"), 0.60);
  auto risk = InferenceRisk({}, "gender", Fixture());
  ASSERT_TRUE(risk.ok());
  EXPECT_DOUBLE_EQ(risk->score, 0.60);
  EXPECT_EQ(risk->numerator, 6000u);
  EXPECT_EQ(risk->denominator, 10000u);
  EXPECT_EQ(risk->best_value, "f");
}

TEST(InferenceRiskTest, SingletonRevealedSetGivesCertainty) {
  auto table = PopulationTable::FromRows(
      {"gender", "age_band", "country"},
      {{"f", "18-24", "CY"}, {"m", "18-24", "CY"}, {"m", "25-34", "GR"}});
  ASSERT_TRUE(table.ok());
  AttributeAssignment unique = {{"age_band", "25-34"}};
  for (const char* hidden : {"gender", "country"}) {
    EXPECT_DOUBLE_EQ(InferenceRisk(unique, hidden, *table)->score, 1.0);
  }
}

TEST(InferenceRiskTest, ZeroMatchesIsUndefined) {
  auto risk = InferenceRisk({{"country", "ZZ"}}, "gender", Fixture());
  EXPECT_TRUE(HasErrorCode(risk.status(), ErrorCode::kUndefined));
  EXPECT_TRUE(HasErrorCode(InferenceRisk({}, "shoe", Fixture()).status(),
                           ErrorCode::kSchemaError));
  EXPECT_TRUE(HasErrorCode(
      InferenceRisk({{"gender", "f"}}, "gender", Fixture()).status(),
      ErrorCode::kInvalidArgument));
}

TEST(InferenceRiskTest, NonPopulationAttributesAreIgnored) {
  auto risk = InferenceRisk({{"email", "a@b"}}, "gender", Fixture());
  ASSERT_TRUE(risk.ok());
  EXPECT_DOUBLE_EQ(risk->score, 0.60);
  EXPECT_EQ(risk->ignored, std::vector<std::string>{"email"});
}

TEST(RarityRiskTest, UniqueAndFullSets) {
  auto table = PopulationTable::FromRows(
      {"gender", "country"}, {{"f", "CY"}, {"m", "CY"}, {"m", "GR"}, {"f", "CY"}});
  EXPECT_DOUBLE_EQ(
      PabacCombinationRisk({{"gender", "m"}, {"country", "GR"}}, *table)->score,
      1.0);
  // Every row has one of the two genders; no single value covers all rows of
  // the fixture, so use a one-column table for the maximal anonymity set.
  auto flat = PopulationTable::FromRows({"over18"},
                                        {{"true"}, {"true"}, {"true"}, {"true"}});
  EXPECT_DOUBLE_EQ(PabacCombinationRisk({{"over18", "true"}}, *flat)->score,
                   1.0 / 4.0);
  EXPECT_TRUE(HasErrorCode(
      PabacCombinationRisk({{"country", "ZZ"}}, *table).status(),
      ErrorCode::kUndefined));
  EXPECT_TRUE(HasErrorCode(PabacCombinationRisk({}, *table).status(),
                           ErrorCode::kInvalidArgument));
}

TEST(RarityRiskTest, IndependentOfLedger) {
  AttributeAssignment d = {{"age_band", "25-34"}, {"country", "CY"}};
  double before = PabacCombinationRisk(d, Fixture())->score;
  DisclosureLedger ledger;
  ledger.Record({PrincipalId("u"), PrincipalId("sp"), "education", "master", "s1",
                 DisclosureProtocol::kFederated, FromMillis(0)});
  double after = PabacCombinationRisk(d, Fixture())->score;
  EXPECT_EQ(before, after);
}

TEST(OracleEquivalenceTest, ThousandRandomQueriesOnFixture) {
  const PopulationTable& t = Fixture();
  crypto::Drbg rng(2024);
  int defined_inference = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string hidden = t.columns()[rng.UniformInt(t.columns().size())];
    AttributeAssignment r = RandomAssignment(t, rng, 3, hidden);
    auto got = InferenceRisk(r, hidden, t);
    std::optional<double> want = OracleInference(t, r, hidden);
    ASSERT_EQ(got.ok(), want.has_value());
    if (want) {
      ++defined_inference;
      EXPECT_EQ(got->score, *want);
    } else {
      EXPECT_TRUE(HasErrorCode(got.status(), ErrorCode::kUndefined));
    }

    AttributeAssignment d = RandomAssignment(t, rng, 4);
    if (d.empty()) d[t.columns()[0]] = t.rows()[0][0];
    auto rarity = PabacCombinationRisk(d, t);
    std::optional<double> want_rarity = OracleRarity(t, d);
    ASSERT_EQ(rarity.ok(), want_rarity.has_value());
    if (want_rarity) {
      EXPECT_EQ(rarity->score, *want_rarity);
    }
  }
  EXPECT_GT(defined_inference, 500);
}

// A hidden attribute's best guess can get worse after conditioning: here
// P(f) = 3/5 overall, but among engineers it is 1/2.
TEST(MonotonicityTest, ConditioningCanLowerTheMaxPosterior) {
  auto table = PopulationTable::FromRows(
      {"gender", "occupation"},
      {{"f", "engineer"}, {"m", "engineer"}, {"f", "nurse"}, {"f", "nurse"},
       {"m", "clerk"}});
  ASSERT_TRUE(table.ok());
  EXPECT_DOUBLE_EQ(InferenceRisk({}, "gender", *table)->score, 0.6);
  EXPECT_DOUBLE_EQ(
      InferenceRisk({{"occupation", "engineer"}}, "gender", *table)->score, 0.5);
}

// What does hold: averaged over the values the added attribute can take,
// the SP's chance of guessing right never drops. In counts,
// sum_v numerator(R + {b = v}) >= numerator(R).
TEST(MonotonicityTest, ExpectedGuessAccuracyNeverDrops) {
  const PopulationTable& t = Fixture();
  crypto::Drbg rng(77);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string hidden = t.columns()[rng.UniformInt(t.columns().size())];
    AttributeAssignment r = RandomAssignment(t, rng, 2, hidden);
    auto base = InferenceRisk(r, hidden, t);
    if (!base.ok()) continue;
    std::string added;
    for (const std::string& c : t.columns()) {
      if (c != hidden && !r.contains(c)) added = c;
    }
    if (added.empty()) continue;
    std::size_t sum = 0;
    for (const std::string& v : t.Values(added)) {
      AttributeAssignment extended = r;
      extended[added] = v;
      auto part = InferenceRisk(extended, hidden, t);
      if (part.ok()) sum += part->numerator;
    }
    EXPECT_GE(sum, base->numerator);
    ++checked;
  }
  EXPECT_GT(checked, 500);
}

TEST(MonotonicityTest, RaritySupersetsNeverLowerTheScore) {
  const PopulationTable& t = Fixture();
  crypto::Drbg rng(78);
  for (int i = 0; i < 1000; ++i) {
    AttributeAssignment d = RandomAssignment(t, rng, 3);
    if (d.empty()) continue;
    AttributeAssignment bigger = d;
    std::size_t c = rng.UniformInt(t.columns().size());
    if (d.contains(t.columns()[c])) continue;
    bigger[t.columns()[c]] = t.rows()[rng.UniformInt(t.size())][c];
    auto small_rarity = PabacCombinationRisk(d, t);
    auto big_rarity = PabacCombinationRisk(bigger, t);
    if (small_rarity.ok() && big_rarity.ok()) {
      EXPECT_GE(big_rarity->score, small_rarity->score);
    }
    // k can only shrink, down to zero.
    EXPECT_LE(t.CountMatching(bigger), t.CountMatching(d));
  }
}

TEST(LedgerTest, PabacEntriesNeverFeedInference) {
  DisclosureLedger ledger;
  PrincipalId u("alice"), sp("sp1");
  ledger.Record({u, sp, "age_band", "25-34", "s1", DisclosureProtocol::kFederated,
                 FromMillis(1)});
  ledger.Record({u, sp, "education", "doctorate", "s2", DisclosureProtocol::kPabac,
                 FromMillis(2)});
  AttributeAssignment revealed = ledger.LinkableRevealed(u, sp);
  EXPECT_EQ(revealed, (AttributeAssignment{{"age_band", "25-34"}}));
  auto with_ledger = FederatedInferenceRisk(ledger, u, sp, "occupation", Fixture());
  auto direct = InferenceRisk({{"age_band", "25-34"}}, "occupation", Fixture());
  EXPECT_EQ(with_ledger->score, direct->score);
}

TEST(LedgerTest, ReplayFromJsonIsIdentical) {
  DisclosureLedger ledger;
  ledger.Record({PrincipalId("a"), PrincipalId("sp"), "age", "34", "s1",
                 DisclosureProtocol::kFederated, FromMillis(5)});
  ledger.Record({PrincipalId("a"), PrincipalId("sp2"), "over18", "true", "s2",
                 DisclosureProtocol::kPabac, FromMillis(6)});
  auto back = DisclosureLedger::FromJson(Json::parse(CanonicalJson(ledger.ToJson())));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, ledger);
  auto by_sp = ledger.DisclosuresByAudience(PrincipalId("a"));
  EXPECT_EQ(by_sp.size(), 2u);
  EXPECT_EQ(by_sp[PrincipalId("sp")], std::vector<std::string>{"age"});
}

}  // namespace
}  // namespace authsim::risk

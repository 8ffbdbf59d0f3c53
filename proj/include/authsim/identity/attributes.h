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

#ifndef AUTHSIM_IDENTITY_ATTRIBUTES_H_
#define AUTHSIM_IDENTITY_ATTRIBUTES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"

namespace authsim::identity {

enum class ValueType { kText, kInteger, kDate, kBoolean };

// Dates are carried as canonical ISO-8601 (YYYY-MM-DD) text.
using AttributeValue = std::variant<std::string, std::int64_t, bool>;

std::string ValueToString(const AttributeValue& value);
Json ValueToJson(const AttributeValue& value);
absl::StatusOr<AttributeValue> ValueFromJson(const Json& json);

enum class NormalizationRule { kNone, kDate, kCountryCode, kCaseFold };
enum class DateOrder { kDayFirst, kMonthFirst };

struct AttributeSchemaEntry {
  std::string name;
  ValueType value_type = ValueType::kText;
  NormalizationRule rule = NormalizationRule::kNone;
  // Only consulted by the date rule for slash/dot-separated input.
  DateOrder date_order = DateOrder::kDayFirst;
};

// One entry per attribute name.
class AttributeSchema {
 public:
  AttributeSchema() = default;

  absl::Status Add(AttributeSchemaEntry entry);
  const AttributeSchemaEntry* Find(std::string_view name) const;
  bool Contains(std::string_view name) const { return Find(name) != nullptr; }
  const std::map<std::string, AttributeSchemaEntry, std::less<>>& entries()
      const {
    return entries_;
  }

  static absl::StatusOr<AttributeSchema> FromJson(const Json& json);
  Json ToJson() const;

  // Schema used by the bundled scenarios and tests.
  static AttributeSchema Default();

 private:
  std::map<std::string, AttributeSchemaEntry, std::less<>> entries_;
};

struct IdentityAttribute {
  std::string name;
  AttributeValue value;
  PrincipalId source;
  SimTime verified_at;

  friend bool operator==(const IdentityAttribute&,
                         const IdentityAttribute&) = default;
};

Json AttributeToJson(const IdentityAttribute& attribute);
absl::StatusOr<IdentityAttribute> AttributeFromJson(const Json& json);

// Canonicalizes a raw textual value per the schema entry for `name`.
// Errors: SchemaError for unknown names, NormalizationError for unparseable
// values.
absl::StatusOr<IdentityAttribute> NormalizeAttribute(
    const AttributeSchema& schema, std::string_view name,
    std::string_view raw_value, PrincipalId source, SimTime verified_at);

// Maps an English short name (or an alpha-2 code) to its ISO 3166-1 alpha-2
// code.
std::optional<std::string> LookupCountryCode(std::string_view name_or_code);

// Per-IdP trust scores used to resolve conflicting attribute values. Unknown
// sources score 0.
class TrustTable {
 public:
  void Set(const PrincipalId& source, int score) { scores_[source] = score; }
  int Score(const PrincipalId& source) const;

 private:
  std::map<PrincipalId, int> scores_;
};

// Merges `incoming` into `existing`. For a name already present the higher
// trust source wins; equal trust goes to the newer verified_at; a full tie
// keeps the existing value. The output never holds two attributes with the
// same name.
std::vector<IdentityAttribute> FuseAttributes(
    const std::vector<IdentityAttribute>& existing,
    const IdentityAttribute& incoming, const TrustTable& trust);

}  // namespace authsim::identity

#endif  // AUTHSIM_IDENTITY_ATTRIBUTES_H_

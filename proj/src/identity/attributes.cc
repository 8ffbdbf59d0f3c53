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

#include "authsim/identity/attributes.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <utility>

#include "authsim/common/status.h"

namespace authsim::identity {
namespace {

struct CountryEntry {
  std::string_view code;
  std::string_view name;
};

constexpr CountryEntry kCountries[] = {
#include "iso3166_table.inc"
};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Fold(std::string_view s) {
  std::string out(Trim(s));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<int> ParseInt(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::string> FormatDate(int y, int m, int d) {
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || y < 1 || y > 9999) return std::nullopt;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return std::string(buf);
}

// Accepts YYYY-MM-DD, or three numeric fields separated by '/', '.' or '-'
// with a four-digit year last, interpreted per `order`.
std::optional<std::string> NormalizeDate(std::string_view raw,
                                         DateOrder order) {
  raw = Trim(raw);
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == '/' || raw[i] == '.' || raw[i] == '-') {
      parts.push_back(raw.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 3) return std::nullopt;
  std::optional<int> a = ParseInt(parts[0]);
  std::optional<int> b = ParseInt(parts[1]);
  std::optional<int> c = ParseInt(parts[2]);
  if (!a || !b || !c) return std::nullopt;
  if (parts[0].size() == 4) return FormatDate(*a, *b, *c);
  if (parts[2].size() != 4) return std::nullopt;
  return order == DateOrder::kDayFirst ? FormatDate(*c, *b, *a)
                                       : FormatDate(*c, *a, *b);
}

std::string_view TypeName(ValueType type) {
  switch (type) {
    case ValueType::kText:
      return "text";
    case ValueType::kInteger:
      return "integer";
    case ValueType::kDate:
      return "date";
    case ValueType::kBoolean:
      return "boolean";
  }
  return "text";
}

std::string_view RuleName(NormalizationRule rule) {
  switch (rule) {
    case NormalizationRule::kNone:
      return "none";
    case NormalizationRule::kDate:
      return "date";
    case NormalizationRule::kCountryCode:
      return "country-code";
    case NormalizationRule::kCaseFold:
      return "case-fold";
  }
  return "none";
}

}  // namespace

std::string ValueToString(const AttributeValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  return std::get<bool>(value) ? "true" : "false";
}

Json ValueToJson(const AttributeValue& value) {
  return std::visit([](const auto& v) { return Json(v); }, value);
}

absl::StatusOr<AttributeValue> ValueFromJson(const Json& json) {
  if (json.is_string()) return AttributeValue(json.get<std::string>());
  if (json.is_boolean()) return AttributeValue(json.get<bool>());
  if (json.is_number_integer()) return AttributeValue(json.get<std::int64_t>());
  return MakeError(ErrorCode::kInvalidArgument,
                   "attribute value must be string, integer or boolean");
}

absl::Status AttributeSchema::Add(AttributeSchemaEntry entry) {
  if (entries_.contains(entry.name)) {
    return MakeError(ErrorCode::kSchemaError,
                     "duplicate schema entry " + entry.name);
  }
  std::string name = entry.name;
  entries_.emplace(std::move(name), std::move(entry));
  return absl::OkStatus();
}

const AttributeSchemaEntry* AttributeSchema::Find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

absl::StatusOr<AttributeSchema> AttributeSchema::FromJson(const Json& json) {
  if (!json.is_array()) {
    return MakeError(ErrorCode::kSchemaError, "schema must be an array");
  }
  AttributeSchema schema;
  for (const Json& item : json) {
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string()) {
      return MakeError(ErrorCode::kSchemaError, "schema entry needs a name");
    }
    AttributeSchemaEntry entry;
    entry.name = item["name"].get<std::string>();
    const std::string type = item.value("type", "text");
    if (type == "text") {
      entry.value_type = ValueType::kText;
    } else if (type == "integer") {
      entry.value_type = ValueType::kInteger;
    } else if (type == "date") {
      entry.value_type = ValueType::kDate;
      entry.rule = NormalizationRule::kDate;
    } else if (type == "boolean") {
      entry.value_type = ValueType::kBoolean;
    } else {
      return MakeError(ErrorCode::kSchemaError, "unknown value type " + type);
    }
    const std::string rule = item.value("rule", std::string(RuleName(entry.rule)));
    if (rule == "none") {
      entry.rule = NormalizationRule::kNone;
    } else if (rule == "date") {
      entry.rule = NormalizationRule::kDate;
    } else if (rule == "country-code") {
      entry.rule = NormalizationRule::kCountryCode;
    } else if (rule == "case-fold") {
      entry.rule = NormalizationRule::kCaseFold;
    } else {
      return MakeError(ErrorCode::kSchemaError, "unknown rule " + rule);
    }
    if ((entry.rule == NormalizationRule::kDate) !=
        (entry.value_type == ValueType::kDate)) {
      return MakeError(ErrorCode::kSchemaError,
                       "date rule and date type go together: " + entry.name);
    }
    const std::string order = item.value("date_order", "day_first");
    entry.date_order =
        order == "month_first" ? DateOrder::kMonthFirst : DateOrder::kDayFirst;
    AUTHSIM_RETURN_IF_ERROR(schema.Add(std::move(entry)));
  }
  return schema;
}

Json AttributeSchema::ToJson() const {
  Json out = Json::array();
  for (const auto& [name, entry] : entries_) {
    Json item = {{"name", name},
                 {"type", TypeName(entry.value_type)},
                 {"rule", RuleName(entry.rule)}};
    if (entry.value_type == ValueType::kDate) {
      item["date_order"] = entry.date_order == DateOrder::kDayFirst
                               ? "day_first"
                               : "month_first";
    }
    out.push_back(std::move(item));
  }
  return out;
}

AttributeSchema AttributeSchema::Default() {
  AttributeSchema schema;
  auto add = [&](std::string name, ValueType type, NormalizationRule rule) {
    (void)schema.Add({std::move(name), type, rule, DateOrder::kDayFirst});
  };
  add("name", ValueType::kText, NormalizationRule::kCaseFold);
  add("birthdate", ValueType::kDate, NormalizationRule::kDate);
  add("country", ValueType::kText, NormalizationRule::kCountryCode);
  add("age", ValueType::kInteger, NormalizationRule::kNone);
  add("over18", ValueType::kBoolean, NormalizationRule::kNone);
  add("email", ValueType::kText, NormalizationRule::kCaseFold);
  add("msisdn", ValueType::kText, NormalizationRule::kNone);
  add("phone_verified", ValueType::kBoolean, NormalizationRule::kNone);
  add("gender", ValueType::kText, NormalizationRule::kCaseFold);
  add("age_band", ValueType::kText, NormalizationRule::kCaseFold);
  add("occupation", ValueType::kText, NormalizationRule::kCaseFold);
  add("marital_status", ValueType::kText, NormalizationRule::kCaseFold);
  add("education", ValueType::kText, NormalizationRule::kCaseFold);
  add("behavior", ValueType::kText, NormalizationRule::kCaseFold);
  return schema;
}

Json AttributeToJson(const IdentityAttribute& attribute) {
  return {{"name", attribute.name},
          {"value", ValueToJson(attribute.value)},
          {"source", attribute.source.value()},
          {"verified_at", ToMillis(attribute.verified_at)}};
}

absl::StatusOr<IdentityAttribute> AttributeFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("name") || !json.contains("value")) {
    return MakeError(ErrorCode::kInvalidArgument, "malformed attribute");
  }
  IdentityAttribute out;
  out.name = json["name"].get<std::string>();
  AUTHSIM_ASSIGN_OR_RETURN(out.value, ValueFromJson(json["value"]));
  out.source = PrincipalId(json.value("source", ""));
  out.verified_at = FromMillis(json.value("verified_at", std::int64_t{0}));
  return out;
}

std::optional<std::string> LookupCountryCode(std::string_view name_or_code) {
  const std::string folded = Fold(name_or_code);
  if (folded.size() == 2) {
    for (const auto& entry : kCountries) {
      if (Fold(entry.code) == folded) return std::string(entry.code);
    }
  }
  for (const auto& entry : kCountries) {
    if (Fold(entry.name) == folded) return std::string(entry.code);
  }
  return std::nullopt;
}

absl::StatusOr<IdentityAttribute> NormalizeAttribute(
    const AttributeSchema& schema, std::string_view name,
    std::string_view raw_value, PrincipalId source, SimTime verified_at) {
  const AttributeSchemaEntry* entry = schema.Find(name);
  if (entry == nullptr) {
    return MakeError(ErrorCode::kSchemaError,
                     "no schema entry for " + std::string(name));
  }
  auto fail = [&](std::string_view why) {
    return MakeError(ErrorCode::kNormalizationError,
                     std::string(name) + ": " + std::string(why) + " '" +
                         std::string(raw_value) + "'");
  };

  IdentityAttribute out;
  out.name = std::string(name);
  out.source = std::move(source);
  out.verified_at = verified_at;

  switch (entry->value_type) {
    case ValueType::kInteger: {
      std::string_view t = Trim(raw_value);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        return fail("not an integer");
      }
      out.value = v;
      return out;
    }
    case ValueType::kBoolean: {
      const std::string f = Fold(raw_value);
      if (f == "true" || f == "yes" || f == "1") {
        out.value = true;
      } else if (f == "false" || f == "no" || f == "0") {
        out.value = false;
      } else {
        return fail("not a boolean");
      }
      return out;
    }
    case ValueType::kDate: {
      std::optional<std::string> iso = NormalizeDate(raw_value, entry->date_order);
      if (!iso) return fail("not a date");
      out.value = *iso;
      return out;
    }
    case ValueType::kText:
      break;
  }

  switch (entry->rule) {
    case NormalizationRule::kCountryCode: {
      std::optional<std::string> code = LookupCountryCode(raw_value);
      if (!code) return fail("unknown country");
      out.value = *code;
      break;
    }
    case NormalizationRule::kCaseFold:
      out.value = Fold(raw_value);
      break;
    case NormalizationRule::kNone:
    case NormalizationRule::kDate:
      out.value = std::string(Trim(raw_value));
      break;
  }
  if (std::get<std::string>(out.value).empty()) return fail("empty value");
  return out;
}

int TrustTable::Score(const PrincipalId& source) const {
  auto it = scores_.find(source);
  return it == scores_.end() ? 0 : it->second;
}

std::vector<IdentityAttribute> FuseAttributes(
    const std::vector<IdentityAttribute>& existing,
    const IdentityAttribute& incoming, const TrustTable& trust) {
  std::vector<IdentityAttribute> out = existing;
  auto it = std::find_if(out.begin(), out.end(), [&](const IdentityAttribute& a) {
    return a.name == incoming.name;
  });
  if (it == out.end()) {
    out.push_back(incoming);
    return out;
  }
  const int current = trust.Score(it->source);
  const int candidate = trust.Score(incoming.source);
  if (candidate > current ||
      (candidate == current && incoming.verified_at > it->verified_at)) {
    *it = incoming;
  }
  return out;
}

}  // namespace authsim::identity

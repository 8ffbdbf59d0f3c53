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

#include "authsim/sim/scenario.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "authsim/common/status.h"

namespace authsim::sim {
namespace {

struct Problem {
  std::size_t line;
  std::string message;
};

std::size_t LineAt(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of every object element inside each top-level array, keyed by the
// array's member name. nlohmann keeps no positions, so this is a small
// structural scan of its own.
std::map<std::string, std::vector<std::size_t>> ElementLines(std::string_view text) {
  std::map<std::string, std::vector<std::size_t>> out;
  std::vector<char> stack;
  std::string last_string, current_key;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') ++line;
    if (c == '"') {
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\') ++i;
        if (i < text.size()) s += text[i];
      }
      last_string = std::move(s);
      continue;
    }
    if (c == ':' && stack.size() == 1) current_key = last_string;
    if (c == '{' || c == '[') {
      if (c == '{' && stack.size() == 2 && stack[0] == '{' && stack[1] == '[') {
        out[current_key].push_back(line);
      }
      stack.push_back(c);
    } else if ((c == '}' || c == ']') && !stack.empty()) {
      stack.pop_back();
    }
  }
  return out;
}

class Reader {
 public:
  Reader(const Json& root, std::map<std::string, std::vector<std::size_t>> lines)
      : root_(root), lines_(std::move(lines)) {}

  Scenario Read() {
    if (!root_.is_object()) throw Problem{1, "scenario must be a JSON object"};
    Scenario s;
    s.name = root_.value("name", std::string("unnamed"));
    if (root_.contains("seed")) {
      if (!root_.at("seed").is_number_unsigned()) throw Problem{1, "seed must be a non-negative integer"};
      s.seed = root_.at("seed").get<std::uint64_t>();
    }
    ForEach("principals", [&](const Json& p, std::size_t line) {
      s.principals.push_back(ReadPrincipal(p, line));
    });
    ForEach("adversaries", [&](const Json& a, std::size_t line) {
      s.adversaries.push_back(ReadAdversary(a, line));
    });
    std::set<std::string> seen;
    for (const PrincipalSpec& p : s.principals) {
      if (!seen.insert(p.id.value()).second) {
        throw Problem{p.line, absl::StrCat("principal ", p.id.value(), " declared twice")};
      }
    }
    for (const AdversarySpec& a : s.adversaries) {
      if (!seen.insert(a.id.value()).second) {
        throw Problem{a.line, absl::StrCat("principal ", a.id.value(), " declared twice")};
      }
    }
    scenario_ = &s;
    for (const PrincipalSpec& p : s.principals) {
      if (p.role == identity::Role::kSp) RequireRole(p.idp.value(), p.line, "sp.idp",
                                                     {identity::Role::kIdp, identity::Role::kIdc});
    }
    ForEach("schedule", [&](const Json& a, std::size_t line) {
      s.schedule.push_back(ReadAction(a, line));
    });
    std::stable_sort(s.schedule.begin(), s.schedule.end(),
                     [](const ActionSpec& a, const ActionSpec& b) { return a.at < b.at; });
    ForEach("assertions", [&](const Json& a, std::size_t line) {
      s.assertions.push_back(ReadAssertion(a, line));
    });
    return s;
  }

 private:
  template <typename F>
  void ForEach(const std::string& key, F f) {
    if (!root_.contains(key)) return;
    const Json& arr = root_.at(key);
    if (!arr.is_array()) throw Problem{1, absl::StrCat(key, " must be an array")};
    const std::vector<std::size_t>& lines = lines_[key];
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::size_t line = i < lines.size() ? lines[i] : 1;
      if (!arr[i].is_object()) throw Problem{line, absl::StrCat(key, "[", i, "] must be an object")};
      try {
        f(arr[i], line);
      } catch (const Json::exception& ex) {
        throw Problem{line, absl::StrCat(key, "[", i, "]: ", ex.what())};
      }
    }
  }

  static std::string Text(const Json& j, const char* key, std::size_t line) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw Problem{line, absl::StrCat("missing text field \"", key, "\"")};
    }
    return j.at(key).get<std::string>();
  }

  PrincipalSpec ReadPrincipal(const Json& p, std::size_t line) {
    PrincipalSpec out;
    out.line = line;
    out.id = PrincipalId(Text(p, "id", line));
    const std::string role = Text(p, "role", line);
    std::optional<identity::Role> r;
    for (identity::Role candidate :
         {identity::Role::kUser, identity::Role::kSp, identity::Role::kIdp, identity::Role::kIdc,
          identity::Role::kBaa, identity::Role::kMno}) {
      std::string name(identity::RoleName(candidate));
      std::transform(name.begin(), name.end(), name.begin(), ::tolower);
      if (name == role) r = candidate;
    }
    if (!r) throw Problem{line, absl::StrCat("unknown role ", role)};
    out.role = *r;
    out.origin = p.value("origin", absl::StrCat("https://", out.id.value()));
    out.credentials = p.value("credentials", false);
    if (out.role == identity::Role::kSp) out.idp = PrincipalId(Text(p, "idp", line));
    out.attributes = p.value("attributes", Json::object());
    if (!out.attributes.is_object()) throw Problem{line, "attributes must be an object"};
    for (const Json& d : p.value("devices", Json::array())) {
      DeviceSpec spec{DeviceId(Text(d, "id", line))};
      const std::string tee = d.value("tee", std::string("Tee"));
      auto grade = device::ParseTeeGrade(tee);
      if (!grade) throw Problem{line, absl::StrCat("unknown tee grade ", tee)};
      spec.tee = *grade;
      out.devices.push_back(spec);
    }
    out.password = p.value("password", std::string());
    out.backup_password = p.value("backup_password", std::string());
    out.baa_password = p.value("baa_password", std::string());
    out.msisdn = p.value("msisdn", std::string());
    out.refuse = p.value("refuse", std::vector<std::string>{});
    out.document = p.value("document", Json());
    return out;
  }

  AdversarySpec ReadAdversary(const Json& a, std::size_t line) {
    AdversarySpec out;
    out.line = line;
    out.id = PrincipalId(Text(a, "id", line));
    auto caps = CapabilitySet::FromNames(a.value("capabilities", std::vector<std::string>{}));
    if (!caps.ok()) throw Problem{line, std::string(caps.status().message())};
    out.capabilities = *caps;
    const std::string strategy = a.value("strategy", std::string("passive"));
    auto st = ParseStrategy(strategy);
    if (!st) throw Problem{line, absl::StrCat("unknown strategy ", strategy)};
    out.strategy = *st;
    return out;
  }

  const PrincipalSpec& RequireRole(const std::string& id, std::size_t line, const char* field,
                                   std::set<identity::Role> roles) {
    const PrincipalSpec* p = scenario_->Find(PrincipalId(id));
    if (p == nullptr) {
      throw Problem{line, absl::StrCat("undeclared principal ", id, " in ", field)};
    }
    if (!roles.contains(p->role)) {
      throw Problem{line, absl::StrCat(field, " ", id, " has role ", std::string(identity::RoleName(p->role)))};
    }
    return *p;
  }

  const PrincipalSpec& User(const Json& a, const char* field, std::size_t line) {
    return RequireRole(Text(a, field, line), line, field, {identity::Role::kUser});
  }

  void Adversary(const Json& a, const char* field, std::size_t line) {
    const std::string id = Text(a, field, line);
    if (scenario_->FindAdversary(PrincipalId(id)) == nullptr) {
      throw Problem{line, absl::StrCat("undeclared adversary ", id, " in ", field)};
    }
  }

  void DeviceOf(const Json& a, const PrincipalSpec* owner, std::size_t line) {
    const DeviceId id(Text(a, "device", line));
    for (const PrincipalSpec& p : scenario_->principals) {
      if (owner != nullptr && &p != owner) continue;
      for (const DeviceSpec& d : p.devices) {
        if (d.id == id) return;
      }
    }
    throw Problem{line, absl::StrCat("undeclared device ", id.value())};
  }

  void Scope(const Json& a, std::size_t line) {
    if (!a.contains("scope")) throw Problem{line, "missing scope"};
    const Json& scope = a.at("scope");
    if (scope.is_string() && scope.get<std::string>() == "all") return;
    if (!scope.is_array()) throw Problem{line, "scope must be \"all\" or a list of entities"};
    for (const Json& e : scope) {
      const PrincipalSpec* p = scenario_->Find(PrincipalId(e.get<std::string>()));
      if (p == nullptr || p->role == identity::Role::kUser) {
        throw Problem{line, absl::StrCat("undeclared entity ", e.dump(), " in scope")};
      }
    }
  }

  ActionSpec ReadAction(const Json& a, std::size_t line) {
    ActionSpec out;
    out.line = line;
    if (!a.contains("at") || !a.at("at").is_number_integer() || a.at("at").get<std::int64_t>() < 0) {
      throw Problem{line, "action needs a non-negative integer \"at\" (milliseconds)"};
    }
    out.at = FromMillis(a.at("at").get<std::int64_t>());
    out.action = Text(a, "action", line);
    out.args = a;
    const std::string& act = out.action;
    if (act == "enroll") {
      DeviceOf(a, &User(a, "user", line), line);
      RequireRole(Text(a, "idp", line), line, "idp", {identity::Role::kIdp});
    } else if (act == "login") {
      User(a, "user", line);
      RequireRole(Text(a, "sp", line), line, "sp", {identity::Role::kSp});
      const std::string method = a.value("method", std::string("fido"));
      if (method != "fido" && method != "password" && method != "credential" && method != "mc") {
        throw Problem{line, absl::StrCat("unknown login method ", method)};
      }
    } else if (act == "issue_credentials") {
      User(a, "user", line);
      const PrincipalSpec& idp = RequireRole(Text(a, "idp", line), line, "idp", {identity::Role::kIdp});
      if (!idp.credentials) throw Problem{line, absl::StrCat(idp.id.value(), " issues no credentials")};
    } else if (act == "steal") {
      DeviceOf(a, nullptr, line);
      Adversary(a, "by", line);
    } else if (act == "attack") {
      Adversary(a, "by", line);
      RequireRole(Text(a, "sp", line), line, "sp", {identity::Role::kSp});
      if (a.contains("victim")) User(a, "victim", line);
    } else if (act == "lock" || act == "unlock") {
      User(a, "user", line);
      Scope(a, line);
    } else if (act == "report_loss") {
      DeviceOf(a, &User(a, "user", line), line);
    } else if (act == "recover") {
      User(a, "user", line);
      const std::string credential = a.value("credential", std::string("password"));
      if (credential != "password" && credential != "document") {
        throw Problem{line, absl::StrCat("unknown recovery credential ", credential)};
      }
      const std::string behavior = a.value("behavior", std::string("owner"));
      if (behavior != "owner" && behavior != "impostor") {
        throw Problem{line, absl::StrCat("unknown behavior ", behavior)};
      }
      Text(a, "new_device", line);
    } else if (act == "set_biometric") {
      User(a, "user", line);
    } else {
      throw Problem{line, absl::StrCat("unknown action ", act)};
    }
    return out;
  }

  AssertionSpec ReadAssertion(const Json& a, std::size_t line) {
    AssertionSpec out{Text(a, "type", line), a, line};
    const std::string& t = out.type;
    if (t == "granted" || t == "denied") {
      User(a, "user", line);
      if (a.contains("sp")) RequireRole(Text(a, "sp", line), line, "sp", {identity::Role::kSp});
    } else if (t == "adversary_breaches") {
      Adversary(a, "by", line);
    } else if (t == "locked") {
      User(a, "user", line);
      if (!scenario_->Find(PrincipalId(Text(a, "entity", line)))) {
        throw Problem{line, absl::StrCat("undeclared entity ", Text(a, "entity", line))};
      }
    } else if (t == "recovery_state") {
      User(a, "user", line);
      Text(a, "state", line);
    } else if (t != "flow_conformance" && t != "invariants") {
      throw Problem{line, absl::StrCat("unknown assertion ", t)};
    }
    return out;
  }

  const Json& root_;
  std::map<std::string, std::vector<std::size_t>> lines_;
  const Scenario* scenario_ = nullptr;
};

}  // namespace

const PrincipalSpec* Scenario::Find(const PrincipalId& id) const {
  for (const PrincipalSpec& p : principals) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const AdversarySpec* Scenario::FindAdversary(const PrincipalId& id) const {
  for (const AdversarySpec& a : adversaries) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

absl::StatusOr<Scenario> ParseScenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& ex) {
    return MakeError(ErrorCode::kScenarioError,
                     absl::StrCat("line ", LineAt(text, ex.byte == 0 ? 0 : ex.byte - 1), ": ",
                                  ex.what()));
  }
  try {
    return Reader(root, ElementLines(text)).Read();
  } catch (const Problem& p) {
    return MakeError(ErrorCode::kScenarioError, absl::StrCat("line ", p.line, ": ", p.message));
  } catch (const Json::exception& ex) {
    return MakeError(ErrorCode::kScenarioError, absl::StrCat("line 1: ", ex.what()));
  }
}

absl::StatusOr<Scenario> LoadScenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

}  // namespace authsim::sim

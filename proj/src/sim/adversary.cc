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

#include "authsim/sim/adversary.h"

#include <array>
#include <utility>

#include "absl/strings/str_cat.h"
#include "authsim/common/status.h"
#include "authsim/federation/idp.h"

namespace authsim::sim {
namespace {

constexpr std::array<std::pair<Capability, std::string_view>, 8> kCapabilities = {{
    {Capability::kStealDevice, "StealDevice"},
    {Capability::kSoftwareAttack, "SoftwareAttack"},
    {Capability::kHardwareAttack, "HardwareAttack"},
    {Capability::kMitM, "MitM"},
    {Capability::kReplay, "Replay"},
    {Capability::kCsrf, "Csrf"},
    {Capability::kSessionHijack, "SessionHijack"},
    {Capability::kColludeSpIdp, "ColludeSpIdp"},
}};

constexpr std::array<std::pair<Strategy, std::string_view>, 5> kStrategies = {{
    {Strategy::kPassive, "passive"},
    {Strategy::kReplay, "replay"},
    {Strategy::kCsrf, "csrf"},
    {Strategy::kAudienceSubstitution, "audience_substitution"},
    {Strategy::kStolenDevice, "stolen_device"},
}};

std::optional<Capability> Requires(Strategy s) {
  switch (s) {
    case Strategy::kPassive: return std::nullopt;
    case Strategy::kReplay: return Capability::kReplay;
    case Strategy::kCsrf: return Capability::kCsrf;
    case Strategy::kAudienceSubstitution: return Capability::kMitM;
    case Strategy::kStolenDevice: return Capability::kStealDevice;
  }
  return std::nullopt;
}

}  // namespace

std::string_view CapabilityName(Capability c) {
  for (const auto& [cap, name] : kCapabilities) {
    if (cap == c) return name;
  }
  return "?";
}

std::optional<Capability> ParseCapability(std::string_view name) {
  for (const auto& [cap, n] : kCapabilities) {
    if (n == name) return cap;
  }
  return std::nullopt;
}

CapabilitySet::CapabilitySet(std::initializer_list<Capability> caps) {
  for (Capability c : caps) Add(c);
}

void CapabilitySet::Add(Capability c) {
  caps_.insert(c);
  if (c == Capability::kHardwareAttack) caps_.insert(Capability::kSoftwareAttack);
}

std::vector<std::string> CapabilitySet::Names() const {
  std::vector<std::string> out;
  for (Capability c : caps_) out.emplace_back(CapabilityName(c));
  return out;
}

absl::StatusOr<CapabilitySet> CapabilitySet::FromNames(const std::vector<std::string>& names) {
  CapabilitySet out;
  for (const std::string& n : names) {
    auto c = ParseCapability(n);
    if (!c) return MakeError(ErrorCode::kInvalidArgument, absl::StrCat("unknown capability ", n));
    out.Add(*c);
  }
  return out;
}

std::string_view StrategyName(Strategy s) {
  for (const auto& [st, name] : kStrategies) {
    if (st == s) return name;
  }
  return "?";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  for (const auto& [st, n] : kStrategies) {
    if (n == name) return st;
  }
  return std::nullopt;
}

absl::StatusOr<std::unique_ptr<Adversary>> Adversary::Create(PrincipalId id, CapabilitySet caps,
                                                             Strategy strategy,
                                                             crypto::Drbg rng) {
  if (auto need = Requires(strategy); need && !caps.Has(*need)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     absl::StrCat("strategy ", std::string(StrategyName(strategy)), " needs ",
                                  std::string(CapabilityName(*need))));
  }
  return std::unique_ptr<Adversary>(
      new Adversary(std::move(id), std::move(caps), strategy, std::move(rng)));
}

Adversary::Adversary(PrincipalId id, CapabilitySet caps, Strategy strategy, crypto::Drbg rng)
    : id_(std::move(id)), caps_(std::move(caps)), strategy_(strategy), rng_(std::move(rng)) {}

Envelope Adversary::Forge(const PrincipalId& to, std::string_view type, Json payload) const {
  Envelope e;
  e.from = id_;
  e.to = to;
  e.type = std::string(type);
  e.payload = std::move(payload);
  e.injected_by = id_;
  return e;
}

bool Adversary::OnReadable(Envelope& e, Bus& bus) {
  if (caps_.Has(Capability::kReplay)) readable_.push_back(e);
  if (caps_.Has(Capability::kMitM) && e.type == msg::kTokenResponse &&
      e.payload.contains("token")) {
    auto token = federation::TokenFromJson(e.payload.at("token"));
    if (token.ok()) {
      tokens_.push_back(*token);
      bus.RecordOp(id_, "adversary.capture_token", absl::OkStatus(),
                   {{"msg_id", e.msg_id}, {"audience", token->audience.value()}});
    }
  }
  return true;
}

void Adversary::OnSealed(const SealedEnvelope& sealed, Bus& /*bus*/) {
  if (caps_.Has(Capability::kReplay)) sealed_.push_back(sealed);
}

absl::Status Adversary::TakeDevice(std::unique_ptr<device::Device> d, Bus& bus) {
  if (!caps_.Has(Capability::kStealDevice)) {
    return MakeError(ErrorCode::kUnauthorized, "adversary cannot steal devices");
  }
  d->set_stolen(true);
  Json detail = {{"device", d->id().value()}, {"owner", d->owner().value()}};
  if (caps_.Has(Capability::kSoftwareAttack)) {
    // Storage is readable, but the keys come out still sealed.
    detail["software_dump_bytes"] = CanonicalJson(d->Export()).size();
  }
  if (caps_.Has(Capability::kHardwareAttack)) {
    keys_ = d->HardwareExtract();
    detail["extracted_keys"] = keys_.size();
  }
  device_ = std::move(d);
  bus.RecordOp(id_, "adversary.steal", absl::OkStatus(), std::move(detail));
  return absl::OkStatus();
}

void Adversary::Attack(Bus& bus, const PrincipalId& sp,
                       const std::optional<std::string>& victim_session,
                       const std::vector<std::string>& attributes) {
  const std::string flow = absl::StrCat(id_.value(), "#", next_flow_++);
  switch (strategy_) {
    case Strategy::kPassive:
      return;
    case Strategy::kReplay: {
      bus.RecordOp(id_, "adversary.replay", absl::OkStatus(),
                   {{"sealed", sealed_.size()}, {"readable", readable_.size()}});
      for (const SealedEnvelope& s : sealed_) bus.Resend(s, id_);
      for (Envelope e : readable_) {
        e.replay_of = e.msg_id;
        e.injected_by = id_;
        bus.Send(std::move(e));
      }
      sealed_.clear();
      readable_.clear();
      return;
    }
    case Strategy::kCsrf: {
      // Cross-site requests carry the attacker page's origin and a code
      // the attacker made up; the browser attaches the victim's session.
      const std::string origin = absl::StrCat("https://", id_.value(), ".invalid");
      const std::string code = rng_.RandomHex(16);
      bus.Send(Forge(sp, msg::kAuthnCode,
                     {{"flow", flow},
                      {"code", code},
                      {"sp", sp.value()},
                      {"session", victim_session.value_or(rng_.RandomHex(16))},
                      {"csrf", rng_.RandomHex(16)},
                      {"origin", origin}}));
      bus.RecordOp(id_, "adversary.forge", absl::OkStatus(),
                   {{"flow", flow}, {"target", sp.value()}, {"origin", origin}});
      return;
    }
    case Strategy::kAudienceSubstitution: {
      bus.RecordOp(id_, "adversary.substitute", absl::OkStatus(),
                   {{"flow", flow}, {"target", sp.value()}, {"tokens", tokens_.size()}});
      for (const federation::AccessToken& t : tokens_) {
        // As captured, then with the audience rewritten to the target.
        bus.Send(Forge(sp, msg::kPresentToken, {{"flow", flow}, {"token", federation::TokenToJson(t)}}));
        federation::AccessToken rewritten = t;
        rewritten.audience = sp;
        bus.Send(Forge(sp, msg::kPresentToken,
                       {{"flow", flow}, {"token", federation::TokenToJson(rewritten)}}));
      }
      return;
    }
    case Strategy::kStolenDevice: {
      bus.RecordOp(id_, "adversary.login", absl::OkStatus(),
                   {{"flow", flow}, {"sp", sp.value()}, {"keys", keys_.size()}});
      bus.Send(Forge(sp, msg::kLoginStart,
                     {{"flow", flow},
                      {"attributes", Json(attributes)},
                      {"method", "fido"}}));
      return;
    }
  }
}

void Adversary::Handle(const Envelope& e, Bus& bus) {
  try {
    if (e.type == msg::kAuthnChallenge) {
      OnChallenge(e, bus);
    } else if (e.type == msg::kLoginGranted) {
      ++granted_;
    }
  } catch (const Json::exception& ex) {
    bus.RecordOp(id_, "adversary.handle", MakeError(ErrorCode::kSchemaError, ex.what()), {});
  }
}

void Adversary::OnChallenge(const Envelope& e, Bus& bus) {
  const std::string flow = e.payload.at("flow").get<std::string>();
  auto request = federation::RequestFromJson(e.payload.at("request"));
  if (!request.ok() || device_ == nullptr) return;
  const std::string rp = e.from.value();
  const std::string victim = device_->owner().value();
  absl::StatusOr<device::Assertion> assertion =
      MakeError(ErrorCode::kNoCredential, "no usable key");
  for (device::ExtractedKey& k : keys_) {
    if (k.rp_id != rp || k.account != victim) continue;
    // Signs outside the device, so the gate never gets a say.
    device::Assertion a{rp, k.credential_id, request->nonce, request->origin, ++k.counter, {}};
    a.signature = k.key.Sign(crypto::AsBytes(device::AssertionSignedBytes(a)));
    assertion = a;
  }
  if (keys_.empty()) {
    // Without extracted keys the thief must get past the owner's gate.
    auto gate = device_->UnlockGate(false, bus.Now());
    assertion = gate.ok() ? device_->SignAssertion(rp, victim, request->nonce, request->origin,
                                                   bus.Now())
                          : absl::StatusOr<device::Assertion>(gate.status());
  }
  bus.RecordOp(id_, "device.assert", assertion.status(),
               {{"flow", flow}, {"device", device_->id().value()}});
  if (!assertion.ok()) return;
  federation::ConsentDecisions consent;
  for (const std::string& a : request->attributes) consent[a] = identity::ConsentDecision::kAllow;
  bus.Send(Forge(e.from, msg::kAuthnResponse,
                 {{"flow", flow},
                  {"method", "fido"},
                  {"account", victim},
                  {"nonce", request->nonce},
                  {"consent", federation::ConsentDecisionsToJson(consent)},
                  {"assertion", device::AssertionToJson(*assertion)}}));
}

}  // namespace authsim::sim

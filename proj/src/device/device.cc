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

#include "authsim/device/device.h"

#include <sodium.h>

#include "authsim/common/status.h"

namespace authsim::device {
namespace {

std::string SealId(const std::string& credential_id) {
  return "key:" + credential_id;
}

absl::StatusOr<crypto::Signature> SignatureFromBase64(const Json& json) {
  if (!json.is_string()) {
    return MakeError(ErrorCode::kInvalidArgument, "signature must be base64");
  }
  std::optional<crypto::Bytes> raw = crypto::Base64Decode(json.get<std::string>());
  if (!raw || raw->size() != crypto::Signature{}.size()) {
    return MakeError(ErrorCode::kInvalidArgument, "bad signature encoding");
  }
  crypto::Signature sig;
  std::copy(raw->begin(), raw->end(), sig.begin());
  return sig;
}

}  // namespace

std::string_view TeeGradeName(TeeGrade grade) {
  return grade == TeeGrade::kTee ? "Tee" : "Software";
}

std::optional<TeeGrade> ParseTeeGrade(std::string_view name) {
  if (name == "Tee") return TeeGrade::kTee;
  if (name == "Software") return TeeGrade::kSoftware;
  return std::nullopt;
}

std::string RegistrationSignedBytes(const Registration& r) {
  return CanonicalJson({{"ctx", "authsim.registration.v1"},
                        {"rp_id", r.rp_id},
                        {"account", r.account},
                        {"credential_id", r.credential_id},
                        {"public_key", r.public_key.ToBase64()},
                        {"tee_grade", TeeGradeName(r.tee_grade)},
                        {"challenge", r.challenge}});
}

bool VerifyRegistration(const Registration& r) {
  return r.public_key.Verify(crypto::AsBytes(RegistrationSignedBytes(r)),
                             r.signature);
}

Json RegistrationToJson(const Registration& r) {
  return {{"rp_id", r.rp_id},
          {"account", r.account},
          {"credential_id", r.credential_id},
          {"device_id", r.device_id.value()},
          {"public_key", r.public_key.ToBase64()},
          {"tee_grade", TeeGradeName(r.tee_grade)},
          {"challenge", r.challenge},
          {"signature", crypto::Base64Encode(r.signature)}};
}

absl::StatusOr<Registration> RegistrationFromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorCode::kInvalidArgument, "registration not an object");
  }
  Registration r;
  try {
    r.rp_id = json.at("rp_id").get<std::string>();
    r.account = json.at("account").get<std::string>();
    r.credential_id = json.at("credential_id").get<std::string>();
    r.device_id = DeviceId(json.at("device_id").get<std::string>());
    r.challenge = json.at("challenge").get<std::string>();
    std::optional<TeeGrade> grade =
        ParseTeeGrade(json.at("tee_grade").get<std::string>());
    if (!grade) return MakeError(ErrorCode::kInvalidArgument, "bad tee_grade");
    r.tee_grade = *grade;
    AUTHSIM_ASSIGN_OR_RETURN(
        r.public_key,
        crypto::VerifyKey::FromBase64(json.at("public_key").get<std::string>()));
    AUTHSIM_ASSIGN_OR_RETURN(r.signature, SignatureFromBase64(json.at("signature")));
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return r;
}

std::string AssertionSignedBytes(const Assertion& a) {
  return CanonicalJson({{"ctx", "authsim.assertion.v1"},
                        {"rp_id", a.rp_id},
                        {"credential_id", a.credential_id},
                        {"challenge", a.challenge},
                        {"channel_binding", a.channel_binding},
                        {"counter", a.counter}});
}

bool VerifyAssertionSignature(const Assertion& a, const crypto::VerifyKey& key) {
  return key.Verify(crypto::AsBytes(AssertionSignedBytes(a)), a.signature);
}

Json AssertionToJson(const Assertion& a) {
  return {{"rp_id", a.rp_id},
          {"credential_id", a.credential_id},
          {"challenge", a.challenge},
          {"channel_binding", a.channel_binding},
          {"counter", a.counter},
          {"signature", crypto::Base64Encode(a.signature)}};
}

absl::StatusOr<Assertion> AssertionFromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorCode::kInvalidArgument, "assertion not an object");
  }
  Assertion a;
  try {
    a.rp_id = json.at("rp_id").get<std::string>();
    a.credential_id = json.at("credential_id").get<std::string>();
    a.challenge = json.at("challenge").get<std::string>();
    a.channel_binding = json.at("channel_binding").get<std::string>();
    a.counter = json.at("counter").get<std::uint64_t>();
    AUTHSIM_ASSIGN_OR_RETURN(a.signature, SignatureFromBase64(json.at("signature")));
  } catch (const Json::exception& e) {
    return MakeError(ErrorCode::kInvalidArgument, e.what());
  }
  return a;
}

Device::Device(DeviceId id, PrincipalId owner, DeviceConfig config,
               crypto::Drbg rng)
    : id_(std::move(id)),
      owner_(std::move(owner)),
      config_(config),
      rng_(std::move(rng)),
      gate_(config.gate),
      store_(crypto::RandomAeadKey(rng_), rng_.Fork("sealed-store")) {}

absl::StatusOr<GateStatus> Device::UnlockGate(bool biometric_match,
                                              SimTime now) {
  if (amm_locked_) {
    return MakeError(ErrorCode::kAccountLocked,
                     "device locked through the consolidator");
  }
  return gate_.Present(biometric_match, now);
}

absl::Status Device::RequireUnlocked(SimTime now) const {
  if (amm_locked_) {
    return MakeError(ErrorCode::kAccountLocked,
                     "device locked through the consolidator");
  }
  if (gate_.locked_out()) {
    return MakeError(ErrorCode::kGateLockout, "biometric lockout");
  }
  if (!gate_.IsUnlocked(now)) {
    return MakeError(ErrorCode::kGateLocked, "biometric gate is locked");
  }
  return absl::OkStatus();
}

absl::StatusOr<Registration> Device::EnrollKey(const std::string& rp_id,
                                               const std::string& account,
                                               const std::string& challenge,
                                               SimTime now) {
  AUTHSIM_RETURN_IF_ERROR(RequireUnlocked(now));
  crypto::SigningKey key = crypto::SigningKey::Generate(rng_);

  Registration r;
  r.rp_id = rp_id;
  r.account = account;
  r.credential_id = rng_.RandomHex(16);
  r.device_id = id_;
  r.public_key = key.verify_key();
  r.tee_grade = config_.tee_grade;
  r.challenge = challenge;
  r.signature = key.Sign(crypto::AsBytes(RegistrationSignedBytes(r)));

  store_.Seal(SealId(r.credential_id), key.seed());
  KeyIndex index{rp_id, account};
  if (auto it = keys_.find(index); it != keys_.end()) {
    store_.Erase(SealId(it->second.credential_id));
  }
  keys_[index] = KeyEntry{r.credential_id, r.public_key, 0};
  return r;
}

absl::StatusOr<Assertion> Device::SignAssertion(
    const std::string& rp_id, const std::string& account,
    const std::string& challenge, const std::string& channel_binding,
    SimTime now) {
  AUTHSIM_RETURN_IF_ERROR(RequireUnlocked(now));
  auto it = keys_.find(KeyIndex{rp_id, account});
  if (it == keys_.end()) {
    return MakeError(ErrorCode::kNoCredential,
                     "no key for " + rp_id + "/" + account);
  }
  AUTHSIM_ASSIGN_OR_RETURN(crypto::Bytes seed,
                           store_.Unseal(SealId(it->second.credential_id)));
  if (seed.size() != crypto::SigningKey::kSeedSize) {
    sodium_memzero(seed.data(), seed.size());
    return MakeError(ErrorCode::kIntegrityError, "sealed key has wrong size");
  }
  crypto::SigningKey key = crypto::SigningKey::FromSeed(
      std::span<const std::uint8_t, crypto::SigningKey::kSeedSize>(seed.data(),
                                                                  seed.size()));
  sodium_memzero(seed.data(), seed.size());

  Assertion a;
  a.rp_id = rp_id;
  a.credential_id = it->second.credential_id;
  a.challenge = challenge;
  a.channel_binding = channel_binding;
  a.counter = ++it->second.counter;
  a.signature = key.Sign(crypto::AsBytes(AssertionSignedBytes(a)));
  return a;
}

bool Device::HasKey(const std::string& rp_id, const std::string& account) const {
  return keys_.contains(KeyIndex{rp_id, account});
}

std::optional<std::string> Device::CredentialId(const std::string& rp_id,
                                                const std::string& account) const {
  auto it = keys_.find(KeyIndex{rp_id, account});
  if (it == keys_.end()) return std::nullopt;
  return it->second.credential_id;
}

void Device::RemoveKey(const std::string& rp_id, const std::string& account) {
  auto it = keys_.find(KeyIndex{rp_id, account});
  if (it == keys_.end()) return;
  store_.Erase(SealId(it->second.credential_id));
  keys_.erase(it);
}

std::vector<BehavioralRecord> Device::EmitBehavior(
    const BehaviorGenerator& generator, std::size_t count, SimTime start,
    SimDuration interval) {
  std::vector<BehavioralRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({id_, owner_, start + interval * static_cast<std::int64_t>(i),
                   generator.Sample(rng_)});
  }
  return out;
}

void Device::ApplyAmmLock() {
  amm_locked_ = true;
  gate_.Relock();
}

void Device::ReleaseAmmLock() { amm_locked_ = false; }

Json Device::Export() const {
  Json keys = Json::array();
  for (const auto& [index, entry] : keys_) {
    keys.push_back({{"rp_id", index.first},
                    {"account", index.second},
                    {"credential_id", entry.credential_id},
                    {"public_key", entry.public_key.ToBase64()},
                    {"counter", entry.counter}});
  }
  Json sealed = Json::object();
  for (const auto& [id, blob] : store_.entries()) {
    sealed[id] = crypto::Base64Encode(blob);
  }
  return {{"device_id", id_.value()},
          {"owner", owner_.value()},
          {"tee_grade", TeeGradeName(config_.tee_grade)},
          {"keys", std::move(keys)},
          {"sealed", std::move(sealed)}};
}

std::vector<ExtractedKey> Device::HardwareExtract() const {
  std::vector<ExtractedKey> out;
  const crypto::AeadKey& seal_key = store_.seal_key_for_hardware_attack();
  for (const auto& [index, entry] : keys_) {
    const std::string id = SealId(entry.credential_id);
    auto blob = store_.entries().find(id);
    if (blob == store_.entries().end()) continue;
    std::optional<crypto::Bytes> seed =
        crypto::AeadOpen(seal_key, blob->second, crypto::AsBytes(id));
    if (!seed || seed->size() != crypto::SigningKey::kSeedSize) continue;
    out.push_back(
        {index.first, index.second, entry.credential_id, entry.counter,
         crypto::SigningKey::FromSeed(
             std::span<const std::uint8_t, crypto::SigningKey::kSeedSize>(
                 seed->data(), seed->size()))});
    sodium_memzero(seed->data(), seed->size());
  }
  return out;
}

}  // namespace authsim::device

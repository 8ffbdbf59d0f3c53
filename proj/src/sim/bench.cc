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

#include "authsim/sim/bench.h"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "authsim/common/status.h"
#include "authsim/crypto/drbg.h"
#include "authsim/federation/idp.h"
#include "authsim/federation/sp.h"
#include "authsim/identity/attributes.h"
#include "authsim/pabac/blind_rsa.h"
#include "authsim/pabac/issuer.h"
#include "authsim/pabac/verifier.h"
#include "authsim/sim/actors.h"
#include "authsim/sim/concurrent_runtime.h"
#include "boost/math/distributions/students_t.hpp"

namespace authsim::sim {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kRsaBits = 2048;
const PrincipalId kIdp("bench.idp");
const PrincipalId kSp("bench.sp");
const char* const kAttribute = "over18";
// The vanilla comparator's password length.
constexpr std::size_t kPasswordLength = 20;

FlowMethod MethodFor(BenchFlow flow) {
  switch (flow) {
    case BenchFlow::kPlainPassword: return FlowMethod::kPassword;
    case BenchFlow::kFidoFederated: return FlowMethod::kFido;
    case BenchFlow::kPabacFederated: return FlowMethod::kCredential;
  }
  return FlowMethod::kPassword;
}

// One IdP, one SP and enough user agents for the largest batch. Agents are
// reused across batches; each login is a fresh flow with fresh nonces.
class BenchWorld {
 public:
  BenchWorld(BenchFlow flow, std::size_t agents, const BenchOptions& options)
      : flow_(flow),
        rng_(options.seed),
        log_(options.log),
        runtime_(options.workers, FromMillis(1'000'000'000), options.log) {
    crypto::Drbg idp_rng = rng_.Fork("idp");
    federation::IdpConfig config;
    config.origin = "https://bench.idp";
    config.password_params = crypto::PasswordHashParams::Minimal();
    auto idp = std::make_unique<federation::IdentityProvider>(
        kIdp, config, crypto::SigningKey::Generate(idp_rng), idp_rng.Fork("run"));
    idp->RegisterClient(kSp);
    auto sp = std::make_unique<federation::ServiceProvider>(kSp, config.origin, idp->verify_key(),
                                                            rng_.Fork("sp"));
    idp_ = std::make_unique<IdpActor>(std::move(idp));
    sp_ = std::make_unique<SpActor>(std::move(sp), kIdp);
    sp_->set_grant_hook([this](const std::string& flow, const PrincipalId&,
                               const federation::TokenValidation&) { done_[flow] = Clock::now(); });
    runtime_.AddActor(idp_.get());
    runtime_.AddActor(sp_.get());
    for (std::size_t i = 0; i < agents; ++i) {
      const PrincipalId user(absl::StrCat("bench.user", i));
      agents_.push_back(std::make_unique<UserAgentActor>(user, rng_.Fork(user.value())));
      runtime_.AddActor(agents_.back().get());
    }
  }

  absl::Status Setup() {
    auto& idp = idp_->idp();
    const auto schema = identity::AttributeSchema::Default();
    for (auto& agent : agents_) {
      const std::string account = agent->address().value();
      AUTHSIM_ASSIGN_OR_RETURN(auto attr, identity::NormalizeAttribute(schema, kAttribute, "true",
                                                                       kIdp, runtime_.Now()));
      idp.UpsertAccount(account, {attr});
      if (flow_ == BenchFlow::kPlainPassword) {
        const std::string password = rng_.Fork(account).RandomHex(kPasswordLength / 2);
        agent->set_password(password);
        idp.SetPassword(account, password);
      } else if (flow_ == BenchFlow::kFidoFederated) {
        const DeviceId id(absl::StrCat(account, "/phone"));
        agent->AddDevice(std::make_unique<device::Device>(id, agent->address(),
                                                          device::DeviceConfig{},
                                                          rng_.Fork(id.value())));
        AUTHSIM_ASSIGN_OR_RETURN(std::string challenge,
                                 idp.BeginRegistration(account, runtime_.Now()));
        AUTHSIM_RETURN_IF_ERROR(agent->FindDevice(id)->UnlockGate(true, runtime_.Now()).status());
        AUTHSIM_ASSIGN_OR_RETURN(device::Registration reg,
                                 agent->FindDevice(id)->EnrollKey(kIdp.value(), account, challenge,
                                                                  runtime_.Now()));
        AUTHSIM_RETURN_IF_ERROR(idp.CompleteRegistration(reg, runtime_.Now()));
      }
    }
    if (flow_ == BenchFlow::kPabacFederated) {
      crypto::Drbg key_rng = rng_.Fork("rsa");
      federation::IdentityProvider* raw = &idp;
      issuer_ = std::make_unique<pabac::CredentialIssuer>(
          kIdp, pabac::GenerateRsaKey(kRsaBits, key_rng), rng_.Fork("issuer"),
          [raw](const std::string& account) { return raw->Attributes(account); });
      // Issued once; every repetition starts from these unspent tokens and a
      // verifier with an empty double-spend set.
      crypto::Drbg issue_rng = rng_.Fork("issue");
      for (auto& agent : agents_) {
        AUTHSIM_RETURN_IF_ERROR(pabac::IssueCredentials(*issuer_, agent->wallet(),
                                                        agent->address().value(),
                                                        {{kAttribute, true}}, 1, issue_rng));
        wallets_.push_back(agent->wallet());
      }
    }
    return absl::OkStatus();
  }

  // Mean seconds from injection to grant over one batch of `n` logins.
  absl::StatusOr<double> RunBatch(std::size_t n) {
    if (flow_ == BenchFlow::kPabacFederated) {
      verifier_ = std::make_unique<pabac::CredentialVerifier>();
      verifier_->TrustIssuer(kIdp, issuer_->public_key());
      idp_->idp().SetCredentialModule(std::make_unique<pabac::PabacAuthModule>(verifier_.get()));
      for (std::size_t i = 0; i < n; ++i) agents_[i]->wallet() = wallets_[i];
    }
    done_.clear();
    std::vector<std::pair<std::string, Clock::time_point>> started;
    started.reserve(n);
    std::vector<std::size_t> granted_before;
    for (std::size_t i = 0; i < n; ++i) granted_before.push_back(agents_[i]->granted_count());
    const std::uint64_t failed_before = runtime_.failed_ops();
    for (std::size_t i = 0; i < n; ++i) {
      const Clock::time_point t = Clock::now();
      started.emplace_back(agents_[i]->StartLogin(runtime_, kSp, {kAttribute}, MethodFor(flow_)),
                           t);
    }
    runtime_.WaitIdle();
    std::size_t successes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      successes += agents_[i]->granted_count() - granted_before[i];
    }
    if (log_ != nullptr) {
      log_->Append({{"kind", "bench_batch"},
                    {"flow", BenchFlowName(flow_)},
                    {"size", n},
                    {"successes", successes},
                    {"at", ToMillis(runtime_.Now())}});
    }
    if (successes != n || done_.size() != n || runtime_.failed_ops() != failed_before) {
      return MakeError(ErrorCode::kBenchmarkInvalid,
                       absl::StrCat(std::string(BenchFlowName(flow_)), " batch of ", n, ": ", successes,
                                    " logins succeeded, ", runtime_.failed_ops() - failed_before,
                                    " operations failed"));
    }
    double total = 0;
    for (const auto& [flow, t0] : started) {
      total += std::chrono::duration<double>(done_.at(flow) - t0).count();
    }
    return total / static_cast<double>(n);
  }

 private:
  BenchFlow flow_;
  crypto::Drbg rng_;
  EventLog* log_;
  ConcurrentRuntime runtime_;
  std::unique_ptr<IdpActor> idp_;
  std::unique_ptr<SpActor> sp_;
  std::vector<std::unique_ptr<UserAgentActor>> agents_;
  std::unique_ptr<pabac::CredentialIssuer> issuer_;
  std::unique_ptr<pabac::CredentialVerifier> verifier_;
  std::vector<pabac::Wallet> wallets_;
  // Written by the SP's handler only; read after WaitIdle.
  std::map<std::string, Clock::time_point> done_;
};

}  // namespace

std::string_view BenchFlowName(BenchFlow flow) {
  switch (flow) {
    case BenchFlow::kPlainPassword: return "PlainPassword";
    case BenchFlow::kFidoFederated: return "FidoFederated";
    case BenchFlow::kPabacFederated: return "PabacFederated";
  }
  return "?";
}

std::optional<BenchFlow> ParseBenchFlow(std::string_view name) {
  for (BenchFlow f : {BenchFlow::kPlainPassword, BenchFlow::kFidoFederated,
                      BenchFlow::kPabacFederated}) {
    if (BenchFlowName(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<std::size_t> BenchReport::batch_sizes() const {
  std::vector<std::size_t> out;
  for (const BenchRow& r : rows) out.push_back(r.batch_size);
  return out;
}

Json BenchReport::ToJson() const {
  Json rows_json = Json::array();
  for (const BenchRow& r : rows) {
    rows_json.push_back({{"batch_size", r.batch_size},
                         {"mean_s", r.mean},
                         {"ci95_low_s", r.ci_low},
                         {"ci95_high_s", r.ci_high},
                         {"samples_s", r.samples}});
  }
  return {{"flow", std::string(BenchFlowName(flow))},
          {"repetitions", repetitions},
          {"workers", workers},
          {"batch_sizes", batch_sizes()},
          {"rows", rows_json}};
}

double ConfidenceHalfWidth(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1));
  const boost::math::students_t dist(n - 1);
  return boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n);
}

absl::StatusOr<BenchReport> RunLoadBenchmark(BenchFlow flow, const std::vector<std::size_t>& sizes,
                                             std::size_t repetitions, BenchOptions options) {
  if (repetitions < 2) {
    return MakeError(ErrorCode::kBenchmarkInvalid, "a confidence interval needs two repetitions");
  }
  if (sizes.empty()) return MakeError(ErrorCode::kBenchmarkInvalid, "no batch sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      return MakeError(ErrorCode::kBenchmarkInvalid, "batch sizes must be positive and ascending");
    }
  }
  BenchWorld world(flow, sizes.back(), options);
  AUTHSIM_RETURN_IF_ERROR(world.Setup());
  BenchReport report;
  report.flow = flow;
  report.repetitions = repetitions;
  report.workers = options.workers;
  for (std::size_t size : sizes) {
    BenchRow row;
    row.batch_size = size;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      AUTHSIM_ASSIGN_OR_RETURN(double mean, world.RunBatch(size));
      row.samples.push_back(mean);
    }
    row.mean = std::accumulate(row.samples.begin(), row.samples.end(), 0.0) /
               static_cast<double>(repetitions);
    const double h = ConfidenceHalfWidth(row.samples);
    row.ci_low = row.mean - h;
    row.ci_high = row.mean + h;
    report.rows.push_back(std::move(row));
  }
  return report;
}

absl::StatusOr<std::vector<double>> OverheadRatios(const BenchReport& flow,
                                                   const BenchReport& baseline) {
  if (flow.batch_sizes() != baseline.batch_sizes()) {
    return MakeError(ErrorCode::kInvalidArgument, "reports cover different batch sizes");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < flow.rows.size(); ++i) {
    out.push_back(flow.rows[i].mean / baseline.rows[i].mean);
  }
  return out;
}

absl::StatusOr<std::vector<std::size_t>> ParseBatchSizes(std::string_view view) {
  const std::string text(view);
  std::vector<std::size_t> out;
  const std::vector<std::string> range = absl::StrSplit(text, ':');
  if (range.size() == 3) {
    std::size_t start = 0, stop = 0, step = 0;
    if (!absl::SimpleAtoi(range[0], &start) || !absl::SimpleAtoi(range[1], &stop) ||
        !absl::SimpleAtoi(range[2], &step) || step == 0 || start == 0 || stop < start) {
      return MakeError(ErrorCode::kInvalidArgument, absl::StrCat("bad batch range ", text));
    }
    for (std::size_t n = start; n <= stop; n += step) out.push_back(n);
    return out;
  }
  for (const std::string& part : std::vector<std::string>(absl::StrSplit(text, ','))) {
    std::size_t n = 0;
    if (!absl::SimpleAtoi(part, &n)) {
      return MakeError(ErrorCode::kInvalidArgument, absl::StrCat("bad batch size ", part));
    }
    out.push_back(n);
  }
  return out;
}

}  // namespace authsim::sim

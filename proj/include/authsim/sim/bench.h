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

#ifndef AUTHSIM_SIM_BENCH_H_
#define AUTHSIM_SIM_BENCH_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/json.h"
#include "authsim/sim/event_log.h"

namespace authsim::sim {

enum class BenchFlow { kPlainPassword, kFidoFederated, kPabacFederated };
std::string_view BenchFlowName(BenchFlow flow);
std::optional<BenchFlow> ParseBenchFlow(std::string_view name);

struct BenchRow {
  std::size_t batch_size = 0;
  // Seconds. One sample per repetition: the mean response time of that
  // repetition's batch.
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::vector<double> samples;
};

struct BenchReport {
  BenchFlow flow = BenchFlow::kPlainPassword;
  std::size_t repetitions = 0;
  std::size_t workers = 0;
  std::vector<BenchRow> rows;

  std::vector<std::size_t> batch_sizes() const;
  Json ToJson() const;
};

struct BenchOptions {
  std::size_t workers = 4;
  std::uint64_t seed = 7;
  // Full message trace plus one bench_batch event per batch. Logging costs
  // time, so timed runs leave it unset.
  EventLog* log = nullptr;
};

// Drives each batch as concurrent complete logins injected in one tick and
// measures the wall-clock time from injection to the SP's grant.
// BenchmarkInvalid for fewer than two repetitions, sizes that are not
// strictly ascending, or any failed login.
absl::StatusOr<BenchReport> RunLoadBenchmark(BenchFlow flow, const std::vector<std::size_t>& sizes,
                                             std::size_t repetitions, BenchOptions options = {});

// mean(flow) / mean(baseline) per batch size. InvalidArgument unless both
// reports cover the same sizes.
absl::StatusOr<std::vector<double>> OverheadRatios(const BenchReport& flow,
                                                   const BenchReport& baseline);

// Half-width of the two-sided 95% Student-t interval of the mean.
double ConfidenceHalfWidth(const std::vector<double>& samples);

// "start:stop:step" or a comma list.
absl::StatusOr<std::vector<std::size_t>> ParseBatchSizes(std::string_view text);

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_BENCH_H_

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

// authsim: run scenarios, drive the load benchmark, verify event logs.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "authsim/common/status.h"
#include "authsim/risk/population.h"
#include "authsim/sim/bench.h"
#include "authsim/sim/event_log.h"
#include "authsim/sim/scenario.h"
#include "authsim/sim/trace_validator.h"
#include "authsim/sim/world.h"

namespace {

namespace fs = std::filesystem;
using namespace authsim;

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s.message() << "\n";
  return 2;
}

int Run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
        const std::string& population_path, const std::string& out) {
  auto scenario = sim::LoadScenario(scenario_path);
  if (!scenario.ok()) return Fail(scenario.status());
  std::optional<risk::PopulationTable> population;
  if (!population_path.empty()) {
    auto table = risk::PopulationTable::LoadCsv(population_path);
    if (!table.ok()) return Fail(table.status());
    population = std::move(*table);
  }
  std::error_code ec;
  fs::create_directories(out, ec);
  auto log = sim::EventLog::OpenPersistent((fs::path(out) / "events.jsonl").string());
  if (!log.ok()) return Fail(log.status());
  sim::WorldOptions options;
  options.seed = seed;
  options.population = population ? &*population : nullptr;
  auto result = sim::RunScenario(*scenario, options, log->get());
  if (!result.ok()) return Fail(result.status());
  for (const sim::AssertionResult& a : result->assertions) {
    std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << ": " << a.detail << "\n";
  }
  for (const sim::Violation& v : result->trace.violations) {
    std::cout << "VIOLATION " << v.invariant << " at seq " << v.seq << ": " << v.detail << "\n";
  }
  std::ofstream((fs::path(out) / "trace_report.json").string())
      << result->trace.ToJson().dump(2) << "\n";
  std::cout << (result->ok() ? "ok" : "failed") << " (" << result->trace.events << " events)\n";
  return result->ok() ? 0 : 1;
}

int Bench(const std::vector<std::string>& flows, const std::string& batches, std::size_t reps,
          std::size_t workers, bool trace, const std::string& out) {
  auto sizes = sim::ParseBatchSizes(batches);
  if (!sizes.ok()) return Fail(sizes.status());
  std::error_code ec;
  fs::create_directories(out, ec);
  std::optional<sim::BenchReport> baseline;
  for (const std::string& name : flows) {
    auto flow = sim::ParseBenchFlow(name);
    if (!flow) return Fail(MakeError(ErrorCode::kInvalidArgument, "unknown flow " + name));
    std::unique_ptr<sim::EventLog> log;
    if (trace) {
      auto opened = sim::EventLog::OpenPersistent((fs::path(out) / ("bench_" + name + ".jsonl")).string());
      if (!opened.ok()) return Fail(opened.status());
      log = std::move(*opened);
    }
    auto report = sim::RunLoadBenchmark(*flow, *sizes, reps,
                                        {.workers = workers, .log = log.get()});
    if (log) {
      if (absl::Status s = log->Sync(); !s.ok()) return Fail(s);
    }
    if (!report.ok()) return Fail(report.status());
    std::ofstream((fs::path(out) / ("bench_" + name + ".json")).string())
        << report->ToJson().dump(2) << "\n";
    std::optional<std::vector<double>> ratios;
    if (baseline && *flow != sim::BenchFlow::kPlainPassword) {
      if (auto r = sim::OverheadRatios(*report, *baseline); r.ok()) ratios = *r;
    }
    for (std::size_t i = 0; i < report->rows.size(); ++i) {
      const sim::BenchRow& row = report->rows[i];
      std::printf("%-15s n=%-5zu mean=%.4fs ci95=[%.4f, %.4f]", name.c_str(), row.batch_size,
                  row.mean, row.ci_low, row.ci_high);
      if (ratios) std::printf(" vs PlainPassword x%.2f", (*ratios)[i]);
      std::printf("\n");
    }
    if (*flow == sim::BenchFlow::kPlainPassword) baseline = *report;
  }
  return 0;
}

// One log, or every *.jsonl below a directory.
int Verify(const std::string& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      return Fail(MakeError(ErrorCode::kInvalidArgument, "no .jsonl logs under " + path));
    }
  } else {
    files.push_back(path);
  }
  std::size_t failed = 0, events = 0, flows = 0, grants = 0;
  for (const fs::path& file : files) {
    auto parsed = sim::EventLog::ReadFile(file.string());
    if (!parsed.ok()) return Fail(parsed.status());
    const sim::TraceReport report = sim::ValidateTrace(*parsed);
    for (const sim::Violation& v : report.violations) {
      std::cout << "VIOLATION " << file.string() << ": " << v.invariant << " at seq " << v.seq
                << ": " << v.detail << "\n";
    }
    failed += report.ok() ? 0 : 1;
    events += report.events;
    flows += report.clean_flows;
    grants += report.grants;
  }
  std::cout << (failed == 0 ? "ok" : "failed") << " (" << files.size() << " logs, " << events
            << " events, " << flows << " conforming flows, " << grants << " grants)\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Device-centric federated authentication simulator"};
  app.require_subcommand(1);

  std::string scenario, population, out = "out", batches = "500:4000:500", log;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> flows;
  std::size_t reps = 10, workers = 4;
  bool trace = false;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and check its assertions");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Overrides the scenario seed");
  run->add_option("--population", population, "Population CSV for the risk engine");
  run->add_option("--out", out, "Output directory");

  CLI::App* bench = app.add_subcommand("bench", "Load benchmark");
  bench->add_option("--flow", flows, "PlainPassword, FidoFederated or PabacFederated")
      ->required()
      ->delimiter(',');
  bench->add_option("--batches", batches, "start:stop:step or a comma list");
  bench->add_option("--reps", reps, "Repetitions per batch size");
  bench->add_option("--workers", workers, "Worker threads");
  bench->add_option("--out", out, "Output directory");
  bench->add_flag("--trace", trace, "Also write each flow's event log (slows the run)");

  CLI::App* verify = app.add_subcommand("verify", "Re-check every trace invariant of a log");
  verify->add_option("--log", log, "Event log (JSON lines) or a directory of them")->required();

  CLI11_PARSE(app, argc, argv);
  if (run->parsed()) return Run(scenario, seed, population, out);
  if (bench->parsed()) return Bench(flows, batches, reps, workers, trace, out);
  return Verify(log);
}

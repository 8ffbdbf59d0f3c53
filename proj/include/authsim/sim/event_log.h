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

#ifndef AUTHSIM_SIM_EVENT_LOG_H_
#define AUTHSIM_SIM_EVENT_LOG_H_

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "authsim/common/json.h"

namespace authsim::sim {

// Append-only trace, one canonical JSON object per line. Every event gets a
// dense "seq" number. In persistent mode each line also goes to a file and
// Sync() fsyncs it; the runner syncs once per scenario step.
class EventLog {
 public:
  EventLog() = default;
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  // Truncates `path`.
  static absl::StatusOr<std::unique_ptr<EventLog>> OpenPersistent(const std::string& path);

  // Thread-safe.
  void Append(Json event);
  absl::Status Sync();

  std::size_t size() const;
  std::vector<std::string> lines() const;
  std::string Text() const;
  std::vector<Json> Events() const;
  absl::Status WriteFile(const std::string& path) const;

  // SchemaError naming the offending line.
  static absl::StatusOr<std::vector<Json>> Parse(std::string_view text);
  static absl::StatusOr<std::vector<Json>> ReadFile(const std::string& path);

 private:
  mutable std::mutex mu_;
  std::vector<std::string> lines_;
  int fd_ = -1;
  absl::Status write_error_;
};

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_EVENT_LOG_H_

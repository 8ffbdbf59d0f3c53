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

#include "authsim/sim/event_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "authsim/common/status.h"

namespace authsim::sim {

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

absl::StatusOr<std::unique_ptr<EventLog>> EventLog::OpenPersistent(const std::string& path) {
  auto log = std::make_unique<EventLog>();
  log->fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (log->fd_ < 0) {
    return absl::UnavailableError(absl::StrCat("open ", path, ": ", std::strerror(errno)));
  }
  return log;
}

void EventLog::Append(Json event) {
  std::lock_guard<std::mutex> lock(mu_);
  event["seq"] = lines_.size();
  lines_.push_back(CanonicalJson(event));
  if (fd_ < 0 || !write_error_.ok()) return;
  const std::string line = lines_.back() + "\n";
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      write_error_ = absl::UnavailableError(std::strerror(errno));
      return;
    }
    done += static_cast<std::size_t>(n);
  }
}

absl::Status EventLog::Sync() {
  std::lock_guard<std::mutex> lock(mu_);
  if (fd_ < 0) return absl::OkStatus();
  if (!write_error_.ok()) return write_error_;
  if (::fsync(fd_) != 0) return absl::UnavailableError(std::strerror(errno));
  return absl::OkStatus();
}

std::size_t EventLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return lines_.size();
}

std::vector<std::string> EventLog::lines() const {
  std::lock_guard<std::mutex> lock(mu_);
  return lines_;
}

std::string EventLog::Text() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string out;
  for (const std::string& line : lines_) {
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<Json> EventLog::Events() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Json> out;
  out.reserve(lines_.size());
  for (const std::string& line : lines_) out.push_back(Json::parse(line));
  return out;
}

absl::Status EventLog::WriteFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << Text();
  return out ? absl::OkStatus() : absl::UnavailableError(absl::StrCat("short write ", path));
}

absl::StatusOr<std::vector<Json>> EventLog::Parse(std::string_view text) {
  std::vector<Json> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    Json event = Json::parse(line, nullptr, false);
    if (event.is_discarded() || !event.is_object()) {
      return MakeError(ErrorCode::kSchemaError,
                       absl::StrCat("line ", line_no, ": not a JSON object"));
    }
    out.push_back(std::move(event));
  }
  return out;
}

absl::StatusOr<std::vector<Json>> EventLog::ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

}  // namespace authsim::sim

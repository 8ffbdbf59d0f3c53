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

#ifndef AUTHSIM_SIM_CONCURRENT_RUNTIME_H_
#define AUTHSIM_SIM_CONCURRENT_RUNTIME_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "authsim/sim/runtime.h"

namespace authsim::sim {

// Worker-pool runtime for the load benchmark. Each actor has a mailbox and
// is scheduled on at most one worker at a time, so handlers stay sequential
// per actor while different actors run in parallel. No wire taps; the
// simulated clock is frozen at `now` (the whole batch lands in one tick).
// With a log attached, sends, deliveries and ops are recorded in the order
// they happen, so the trace validator applies unchanged.
class ConcurrentRuntime : public Bus {
 public:
  // Actors must all be added before the first Send.
  ConcurrentRuntime(std::size_t workers, SimTime now, EventLog* log = nullptr);
  ~ConcurrentRuntime() override;
  ConcurrentRuntime(const ConcurrentRuntime&) = delete;
  ConcurrentRuntime& operator=(const ConcurrentRuntime&) = delete;

  void AddActor(Actor* actor);
  // Blocks until every queued message has been handled.
  void WaitIdle();

  SimTime Now() const override { return now_; }
  void Send(Envelope envelope) override;
  void Resend(const SealedEnvelope& sealed, const PrincipalId& by) override;
  void RecordOp(const PrincipalId& actor, std::string_view op, const absl::Status& status,
                Json detail) override;

  std::uint64_t failed_ops() const { return failed_ops_.load(); }
  std::uint64_t ops() const { return ops_.load(); }
  std::uint64_t undeliverable() const { return undeliverable_.load(); }

 private:
  struct Mailbox {
    Actor* actor = nullptr;
    std::mutex mu;
    std::deque<Envelope> queue;
    bool scheduled = false;
  };

  void Enqueue(Envelope envelope);
  void LogDelivery(const Envelope& envelope, bool delivered);
  void WorkerLoop();

  SimTime now_;
  EventLog* log_;
  std::map<PrincipalId, std::unique_ptr<Mailbox>> mailboxes_;
  std::atomic<std::uint64_t> next_msg_id_{1};
  std::atomic<std::uint64_t> ops_{0};
  std::atomic<std::uint64_t> failed_ops_{0};
  std::atomic<std::uint64_t> undeliverable_{0};

  std::mutex ready_mu_;
  std::condition_variable ready_cv_;
  std::deque<Mailbox*> ready_;
  bool stopping_ = false;

  std::mutex idle_mu_;
  std::condition_variable idle_cv_;
  std::uint64_t in_flight_ = 0;

  std::vector<std::thread> workers_;
};

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_CONCURRENT_RUNTIME_H_

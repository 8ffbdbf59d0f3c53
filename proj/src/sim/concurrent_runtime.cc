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

#include "authsim/sim/concurrent_runtime.h"

#include <utility>

#include "authsim/common/status.h"

namespace authsim::sim {

ConcurrentRuntime::ConcurrentRuntime(std::size_t workers, SimTime now, EventLog* log)
    : now_(now), log_(log) {
  if (workers == 0) workers = 1;
  workers_.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) {
    workers_.emplace_back([this] { WorkerLoop(); });
  }
}

ConcurrentRuntime::~ConcurrentRuntime() {
  {
    std::lock_guard<std::mutex> lock(ready_mu_);
    stopping_ = true;
  }
  ready_cv_.notify_all();
  for (std::thread& t : workers_) t.join();
}

void ConcurrentRuntime::AddActor(Actor* actor) {
  auto box = std::make_unique<Mailbox>();
  box->actor = actor;
  mailboxes_[actor->address()] = std::move(box);
}

void ConcurrentRuntime::Send(Envelope envelope) {
  envelope.msg_id = next_msg_id_.fetch_add(1);
  envelope.sent_at = now_;
  if (log_ != nullptr) {
    log_->Append({{"kind", "send"}, {"envelope", EnvelopeToJson(envelope)}, {"at", ToMillis(now_)}});
  }
  Enqueue(std::move(envelope));
}

void ConcurrentRuntime::Resend(const SealedEnvelope& sealed, const PrincipalId& by) {
  Envelope copy = sealed.inner_;
  copy.replay_of = copy.msg_id;
  copy.injected_by = by;
  Send(std::move(copy));
}

void ConcurrentRuntime::Enqueue(Envelope envelope) {
  auto it = mailboxes_.find(envelope.to);
  if (it == mailboxes_.end()) {
    undeliverable_.fetch_add(1);
    LogDelivery(envelope, false);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(idle_mu_);
    ++in_flight_;
  }
  Mailbox* box = it->second.get();
  bool wake = false;
  {
    std::lock_guard<std::mutex> lock(box->mu);
    box->queue.push_back(std::move(envelope));
    if (!box->scheduled) {
      box->scheduled = true;
      wake = true;
    }
  }
  if (wake) {
    {
      std::lock_guard<std::mutex> lock(ready_mu_);
      ready_.push_back(box);
    }
    ready_cv_.notify_one();
  }
}

void ConcurrentRuntime::WorkerLoop() {
  for (;;) {
    Mailbox* box = nullptr;
    {
      std::unique_lock<std::mutex> lock(ready_mu_);
      ready_cv_.wait(lock, [this] { return stopping_ || !ready_.empty(); });
      if (ready_.empty()) return;
      box = ready_.front();
      ready_.pop_front();
    }
    Envelope envelope;
    {
      std::lock_guard<std::mutex> lock(box->mu);
      envelope = std::move(box->queue.front());
      box->queue.pop_front();
    }
    LogDelivery(envelope, true);
    box->actor->Handle(envelope, *this);
    bool again = false;
    {
      std::lock_guard<std::mutex> lock(box->mu);
      if (box->queue.empty()) {
        box->scheduled = false;
      } else {
        again = true;
      }
    }
    if (again) {
      {
        std::lock_guard<std::mutex> lock(ready_mu_);
        ready_.push_back(box);
      }
      ready_cv_.notify_one();
    }
    {
      std::lock_guard<std::mutex> lock(idle_mu_);
      if (--in_flight_ == 0) idle_cv_.notify_all();
    }
  }
}

void ConcurrentRuntime::LogDelivery(const Envelope& envelope, bool delivered) {
  if (log_ == nullptr) return;
  log_->Append({{"kind", "deliver"},
                {"msg_id", envelope.msg_id},
                {"to", envelope.to.value()},
                {"delivered", delivered},
                {"at", ToMillis(now_)}});
}

void ConcurrentRuntime::WaitIdle() {
  std::unique_lock<std::mutex> lock(idle_mu_);
  idle_cv_.wait(lock, [this] { return in_flight_ == 0; });
}

void ConcurrentRuntime::RecordOp(const PrincipalId& actor, std::string_view op,
                                 const absl::Status& status, Json detail) {
  ops_.fetch_add(1);
  if (!status.ok()) failed_ops_.fetch_add(1);
  if (log_ == nullptr) return;
  Json event = {{"kind", "op"},
                {"actor", actor.value()},
                {"op", std::string(op)},
                {"ok", status.ok()},
                {"detail", std::move(detail)},
                {"at", ToMillis(now_)}};
  if (!status.ok()) event["error"] = StatusLabel(status);
  log_->Append(std::move(event));
}

}  // namespace authsim::sim

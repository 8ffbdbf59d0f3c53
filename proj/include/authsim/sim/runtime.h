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

#ifndef AUTHSIM_SIM_RUNTIME_H_
#define AUTHSIM_SIM_RUNTIME_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "authsim/common/ids.h"
#include "authsim/common/json.h"
#include "authsim/common/sim_time.h"
#include "authsim/sim/envelope.h"
#include "authsim/sim/event_log.h"

namespace authsim::sim {

// What an actor sees of the runtime driving it. Both execution modes
// implement it, so actor code is shared.
class Bus {
 public:
  virtual ~Bus() = default;
  virtual SimTime Now() const = 0;
  // Stamps msg_id and sent_at, then queues delivery.
  virtual void Send(Envelope envelope) = 0;
  // Re-sends a captured secure envelope verbatim on behalf of `by`.
  virtual void Resend(const SealedEnvelope& sealed, const PrincipalId& by) = 0;
  // The one log event for an operation an actor performed.
  virtual void RecordOp(const PrincipalId& actor, std::string_view op,
                        const absl::Status& status, Json detail) = 0;
};

class Actor {
 public:
  virtual ~Actor() = default;
  virtual const PrincipalId& address() const = 0;
  virtual void Handle(const Envelope& envelope, Bus& bus) = 0;
};

// Wire tap. Sees every non-injected envelope at send time.
class Interceptor {
 public:
  virtual ~Interceptor() = default;
  virtual const PrincipalId& tap_id() const = 0;
  // Whether secure envelopes are readable (the MitM capability).
  virtual bool ReadsSecure() const = 0;
  // Readable traffic; may rewrite `e`. Returning false drops it.
  virtual bool OnReadable(Envelope& e, Bus& bus) = 0;
  // Secure traffic the tap cannot open.
  virtual void OnSealed(const SealedEnvelope& sealed, Bus& bus) = 0;
};

// Deterministic single-threaded discrete-event runtime. Deliveries and
// scripted tasks share one queue ordered by (time, insertion order).
class Runtime : public Bus {
 public:
  struct Options {
    SimDuration link_latency = std::chrono::milliseconds(5);
    SimTime start = SimEpoch();
  };

  Runtime(EventLog* log, Options options);

  void AddActor(Actor* actor);
  void AddInterceptor(Interceptor* tap);
  bool HasActor(const PrincipalId& address) const { return actors_.contains(address); }

  void Schedule(SimTime at, std::function<void(Runtime&)> task);
  // Processes events in order until the queue is empty or the next one is
  // after `until`. The clock ends at the last processed event.
  void Run(std::optional<SimTime> until = std::nullopt);
  bool Idle() const { return queue_.empty(); }

  SimTime Now() const override { return now_; }
  void Send(Envelope envelope) override;
  void Resend(const SealedEnvelope& sealed, const PrincipalId& by) override;
  void RecordOp(const PrincipalId& actor, std::string_view op, const absl::Status& status,
                Json detail) override;
  // Free-form event; "at" is added.
  void Record(Json event);

  std::uint64_t delivered() const { return delivered_; }

 private:
  struct Item {
    SimTime at;
    std::uint64_t order;
    std::optional<Envelope> envelope;
    std::function<void(Runtime&)> task;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      return a.at != b.at ? a.at > b.at : a.order > b.order;
    }
  };

  void Put(Envelope envelope, bool tap);
  void Deliver(const Envelope& envelope);

  EventLog* log_;
  Options options_;
  SimTime now_;
  std::uint64_t next_msg_id_ = 1;
  std::uint64_t next_order_ = 0;
  std::uint64_t delivered_ = 0;
  std::map<PrincipalId, Actor*> actors_;
  std::vector<Interceptor*> taps_;
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
};

}  // namespace authsim::sim

#endif  // AUTHSIM_SIM_RUNTIME_H_

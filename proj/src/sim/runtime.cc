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

#include "authsim/sim/runtime.h"

#include <utility>

#include "authsim/common/status.h"

namespace authsim::sim {

Runtime::Runtime(EventLog* log, Options options)
    : log_(log), options_(options), now_(options.start) {}

void Runtime::AddActor(Actor* actor) { actors_[actor->address()] = actor; }

void Runtime::AddInterceptor(Interceptor* tap) {
  taps_.push_back(tap);
  Record({{"kind", "tap"}, {"by", tap->tap_id().value()}, {"reads_secure", tap->ReadsSecure()}});
}

void Runtime::Schedule(SimTime at, std::function<void(Runtime&)> task) {
  queue_.push(Item{at, next_order_++, std::nullopt, std::move(task)});
}

void Runtime::Run(std::optional<SimTime> until) {
  while (!queue_.empty()) {
    if (until && queue_.top().at > *until) break;
    Item item = queue_.top();
    queue_.pop();
    if (item.at > now_) now_ = item.at;
    if (item.envelope) {
      Deliver(*item.envelope);
    } else {
      item.task(*this);
    }
  }
}

void Runtime::Send(Envelope envelope) {
  envelope.msg_id = next_msg_id_++;
  envelope.sent_at = now_;
  const bool tap = !envelope.injected_by.has_value();
  Put(std::move(envelope), tap);
}

void Runtime::Resend(const SealedEnvelope& sealed, const PrincipalId& by) {
  Envelope copy = sealed.inner_;
  copy.replay_of = copy.msg_id;
  copy.injected_by = by;
  copy.msg_id = next_msg_id_++;
  copy.sent_at = now_;
  Put(std::move(copy), false);
}

void Runtime::Put(Envelope envelope, bool tap) {
  Record({{"kind", "send"}, {"envelope", EnvelopeToJson(envelope)}});
  if (tap) {
    for (Interceptor* t : taps_) {
      const bool readable = !envelope.secure || t->ReadsSecure();
      Record({{"kind", "observe"},
              {"by", t->tap_id().value()},
              {"msg_id", envelope.msg_id},
              {"secure", envelope.secure},
              {"read", readable}});
      if (!readable) {
        t->OnSealed(SealedEnvelope(envelope), *this);
        continue;
      }
      const std::string before = CanonicalJson(EnvelopeToJson(envelope));
      if (!t->OnReadable(envelope, *this)) {
        Record({{"kind", "drop"}, {"by", t->tap_id().value()}, {"msg_id", envelope.msg_id}});
        return;
      }
      if (CanonicalJson(EnvelopeToJson(envelope)) != before) {
        Record({{"kind", "rewrite"},
                {"by", t->tap_id().value()},
                {"envelope", EnvelopeToJson(envelope)}});
      }
    }
  }
  queue_.push(Item{now_ + options_.link_latency, next_order_++, std::move(envelope), {}});
}

void Runtime::Deliver(const Envelope& envelope) {
  auto it = actors_.find(envelope.to);
  Record({{"kind", "deliver"},
          {"msg_id", envelope.msg_id},
          {"to", envelope.to.value()},
          {"delivered", it != actors_.end()}});
  if (it == actors_.end()) return;
  ++delivered_;
  it->second->Handle(envelope, *this);
}

void Runtime::RecordOp(const PrincipalId& actor, std::string_view op,
                       const absl::Status& status, Json detail) {
  Json event = {{"kind", "op"},
                {"actor", actor.value()},
                {"op", std::string(op)},
                {"ok", status.ok()},
                {"detail", std::move(detail)}};
  if (!status.ok()) event["error"] = StatusLabel(status);
  Record(std::move(event));
}

void Runtime::Record(Json event) {
  if (log_ == nullptr) return;
  event["at"] = ToMillis(now_);
  log_->Append(std::move(event));
}

}  // namespace authsim::sim

// Copyright 2026 The fdlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fdlab/propagate.hpp"

#include <algorithm>
#include <string>

namespace fdlab {

std::string_view to_string(QueuePolicy policy) {
  switch (policy) {
    case QueuePolicy::Fifo:
      return "fifo";
    case QueuePolicy::Priority:
      return "priority";
    case QueuePolicy::ReversedPriority:
      return "reversed";
  }
  return "?";
}

QueuePolicy parse_queue_policy(std::string_view text) {
  if (text == "fifo") return QueuePolicy::Fifo;
  if (text == "priority") return QueuePolicy::Priority;
  if (text == "reversed") return QueuePolicy::ReversedPriority;
  throw ModelError("unknown queue policy '" + std::string(text) + "'");
}

// -- PropQueue ---------------------------------------------------------------

void PropQueue::push(const Propagator& p) {
  const std::uint32_t id = p.id();
  if (id >= queued_.size()) queued_.resize(id + 1, 0);
  if (queued_[id]) return;
  queued_[id] = 1;
  ++pending_;
  const int level = policy_ == QueuePolicy::Fifo ? 0 : std::clamp(p.priority(), 0, kPriorityLevels - 1);
  levels_[static_cast<std::size_t>(level)].push_back(id);
}

std::int64_t PropQueue::pop() {
  if (pending_ == 0) return -1;
  auto take = [this](std::deque<std::uint32_t>& q) {
    const std::uint32_t id = q.front();
    q.pop_front();
    queued_[id] = 0;
    --pending_;
    return static_cast<std::int64_t>(id);
  };
  if (policy_ == QueuePolicy::ReversedPriority) {
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it)
      if (!it->empty()) return take(*it);
  } else {
    for (auto& q : levels_)
      if (!q.empty()) return take(q);
  }
  return -1;
}

void PropQueue::clear() {
  for (auto& q : levels_) {
    for (auto id : q) queued_[id] = 0;
    q.clear();
  }
  pending_ = 0;
}

// -- Engine ------------------------------------------------------------------

VarId Engine::grow(VarId var) {
  auto& subs = var.kind == VarKind::Int ? int_subs_ : bool_subs_;
  if (var.index >= subs.size()) subs.resize(var.index + 1);
  return var;
}

std::uint32_t Engine::add(std::unique_ptr<Propagator> p) {
  const auto id = static_cast<std::uint32_t>(props_.size());
  p->id_ = id;
  props_.push_back(std::move(p));
  queue_.resize(props_.size());
  return id;
}

void Engine::subscribe(std::uint32_t prop, VarId var, EventClass cls) {
  auto& subs = var.kind == VarKind::Int ? int_subs_ : bool_subs_;
  subs[var.index].push_back({prop, cls});
}

const std::vector<Subscription>& Engine::subscriptions(VarId var) const {
  return var.kind == VarKind::Int ? int_subs_[var.index] : bool_subs_[var.index];
}

void Engine::seal() {
  if (sealed_) return;
  store_.reserve_flags(props_.size());
  sealed_ = true;
}

NarrowStatus Engine::narrow_status(VarId var, Action action) {
  const NarrowResult r = store_.narrow(var, action);
  if (r.status == NarrowStatus::Narrowed) schedule(r.event);
  return r.status;
}

bool Engine::narrow(VarId var, Action action) {
  return narrow_status(var, action) != NarrowStatus::Failed;
}

void Engine::schedule(const DomainEvent& event) {
  for (const Subscription& s : subscriptions(event.var)) {
    if (event.cls < s.cls) continue;
    if (static_cast<std::int64_t>(s.prop) == running_) continue;
    if (!active(s.prop)) continue;
    queue_.push(*props_[s.prop]);
  }
}

void Engine::schedule(std::uint32_t prop) {
  if (active(prop)) queue_.push(*props_[prop]);
}

void Engine::schedule_all() {
  for (const auto& p : props_)
    if (active(p->id())) queue_.push(*p);
}

FixpointResult Engine::fixpoint() {
  for (std::int64_t id = queue_.pop(); id >= 0; id = queue_.pop()) {
    Propagator& p = *props_[static_cast<std::size_t>(id)];
    running_ = id;
    ++propagations_;
    const PropOutcome outcome = p.propagate(*this);
    running_ = -1;
    switch (outcome) {
      case PropOutcome::Failed:
        queue_.clear();
        return FixpointResult::Failure;
      case PropOutcome::Subsumed:
        store_.set_flag(p.id());
        break;
      case PropOutcome::Reschedule:
        queue_.push(p);
        break;
      case PropOutcome::AtFixpoint:
        break;
    }
  }
  return FixpointResult::Fixpoint;
}

}  // namespace fdlab

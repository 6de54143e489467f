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

#ifndef FDLAB_PROPAGATE_HPP_
#define FDLAB_PROPAGATE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <string_view>
#include <vector>

#include "fdlab/domain.hpp"

namespace fdlab {

class Engine;

enum class PropOutcome : std::uint8_t { AtFixpoint, Reschedule, Failed, Subsumed };

inline constexpr int kPriorityLevels = 8;

// Default priorities; lower runs first under QueuePolicy::Priority.
namespace priority {
inline constexpr int kCheap = 2;    // arity <= 3
inline constexpr int kLinear = 4;   // sums
inline constexpr int kGlobal = 6;   // alldifferent, lex
}  // namespace priority

class Propagator {
 public:
  explicit Propagator(int priority) : priority_(priority) {}
  virtual ~Propagator() = default;

  // Must leave the store at this propagator's own fixpoint unless it returns
  // Reschedule. Never re-adds values.
  virtual PropOutcome propagate(Engine& engine) = 0;
  virtual std::string_view name() const = 0;

  int priority() const { return priority_; }
  void set_priority(int p) { priority_ = p; }
  std::uint32_t id() const { return id_; }

 private:
  friend class Engine;
  int priority_;
  std::uint32_t id_ = 0;
};

enum class QueuePolicy : std::uint8_t { Fifo, Priority, ReversedPriority };

std::string_view to_string(QueuePolicy policy);
QueuePolicy parse_queue_policy(std::string_view text);

// Pending propagators, no duplicates. Ties inside a priority level are FIFO.
class PropQueue {
 public:
  explicit PropQueue(QueuePolicy policy = QueuePolicy::Priority) : policy_(policy) {}

  void resize(std::size_t propagators) { queued_.resize(propagators, 0); }
  void push(const Propagator& p);
  // Returns the next propagator id, or -1 when empty.
  std::int64_t pop();
  void clear();

  bool empty() const { return pending_ == 0; }
  std::size_t size() const { return pending_; }
  bool contains(std::uint32_t id) const { return id < queued_.size() && queued_[id]; }
  QueuePolicy policy() const { return policy_; }
  void set_policy(QueuePolicy policy) { clear(); policy_ = policy; }

 private:
  QueuePolicy policy_;
  std::array<std::deque<std::uint32_t>, kPriorityLevels> levels_;
  std::vector<std::uint8_t> queued_;
  std::size_t pending_ = 0;
};

struct Subscription {
  std::uint32_t prop;
  EventClass cls;
};

enum class FixpointResult : std::uint8_t { Fixpoint, Failure };

// Store plus propagators, their subscriptions, and the scheduling queue.
class Engine {
 public:
  explicit Engine(QueuePolicy policy = QueuePolicy::Priority) : queue_(policy) {}
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
  Engine(Engine&&) = default;
  Engine& operator=(Engine&&) = default;

  VariableStore& store() { return store_; }
  const VariableStore& store() const { return store_; }

  VarId new_int_var(std::int64_t lo, std::int64_t hi) { return grow(store_.new_int_var(lo, hi)); }
  VarId new_bool_var() { return grow(store_.new_bool_var()); }

  // Takes ownership and returns the propagator id. Subscriptions are added by
  // the caller through subscribe().
  std::uint32_t add(std::unique_ptr<Propagator> p);
  void subscribe(std::uint32_t prop, VarId var, EventClass cls);

  // Fixes the entailment-flag region to the propagators posted so far.
  // Propagators added later can still run but are never marked subsumed.
  void seal();
  bool sealed() const { return sealed_; }

  // Narrows through the store and wakes subscribers. Returns false on failure.
  bool narrow(VarId var, Action action);
  NarrowStatus narrow_status(VarId var, Action action);
  bool remove(VarId var, std::int64_t v) { return narrow(var, Action::remove(v)); }
  bool set_min(VarId var, std::int64_t m) { return narrow(var, Action::at_least(m)); }
  bool set_max(VarId var, std::int64_t m) { return narrow(var, Action::at_most(m)); }
  bool assign(VarId var, std::int64_t v) { return narrow(var, Action::assign(v)); }

  std::int64_t min(VarId var) const { return store_.min(var); }
  std::int64_t max(VarId var) const { return store_.max(var); }
  bool assigned(VarId var) const { return store_.assigned(var); }

  void schedule(const DomainEvent& event);
  void schedule(std::uint32_t prop);
  void schedule_all();
  FixpointResult fixpoint();

  bool active(std::uint32_t prop) const { return !store_.flag(prop); }

  PropQueue& queue() { return queue_; }
  const PropQueue& queue() const { return queue_; }
  std::size_t propagator_count() const { return props_.size(); }
  Propagator& propagator(std::uint32_t id) { return *props_[id]; }
  const std::vector<Subscription>& subscriptions(VarId var) const;
  std::uint64_t propagations() const { return propagations_; }

 private:
  VarId grow(VarId var);

  VariableStore store_;
  std::vector<std::unique_ptr<Propagator>> props_;
  std::vector<std::vector<Subscription>> int_subs_;
  std::vector<std::vector<Subscription>> bool_subs_;
  PropQueue queue_;
  std::int64_t running_ = -1;
  bool sealed_ = false;
  std::uint64_t propagations_ = 0;
};

}  // namespace fdlab

#endif  // FDLAB_PROPAGATE_HPP_

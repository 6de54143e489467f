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
//
// Variable store: integer and Boolean domains laid out in flat word regions.
//
// Every domain lives inside one of three contiguous regions of 64-bit words:
//
//   Int   per variable: [lo:32 | hi:32] [size] [bitset over original bounds]
//   Bool  2 bits per variable, 32 variables per word
//   Flag  1 bit per propagator (set = entailed in the current subtree)
//
// A copy backend snapshots the regions with a plain memcpy; a trail backend
// saves the words a mutation is about to overwrite. All mutations go through
// narrow() (or set_flag()), which calls the observer before touching memory.

#ifndef FDLAB_DOMAIN_HPP_
#define FDLAB_DOMAIN_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdlab {

enum class VarKind : std::uint8_t { Int, Bool };

struct VarId {
  std::uint32_t index = 0;
  VarKind kind = VarKind::Int;

  friend bool operator==(VarId, VarId) = default;
};

// Ordered by strength: a subscriber for class C wakes on any event >= C.
enum class EventClass : std::uint8_t {
  DomainChanged = 0,
  BoundsChanged = 1,
  Instantiated = 2,
};

struct DomainEvent {
  VarId var;
  EventClass cls = EventClass::DomainChanged;
};

enum class ActionKind : std::uint8_t { RemoveValue, TightenMin, TightenMax, Assign };

struct Action {
  ActionKind kind;
  std::int64_t value;

  static Action remove(std::int64_t v) { return {ActionKind::RemoveValue, v}; }
  static Action at_least(std::int64_t m) { return {ActionKind::TightenMin, m}; }
  static Action at_most(std::int64_t m) { return {ActionKind::TightenMax, m}; }
  static Action assign(std::int64_t v) { return {ActionKind::Assign, v}; }
};

enum class NarrowStatus : std::uint8_t { Narrowed, NoChange, Failed };

struct NarrowResult {
  NarrowStatus status = NarrowStatus::NoChange;
  DomainEvent event;
};

enum class BoolState : std::uint8_t { Unknown = 0, True = 1, False = 2 };

enum class Region : std::uint8_t { Int = 0, Bool = 1, Flag = 2 };
inline constexpr std::size_t kRegionCount = 3;

class VariableStore;

// Sees the words of a region just before they are overwritten.
class StoreObserver {
 public:
  virtual ~StoreObserver() = default;
  virtual void record(const VariableStore& store, VarId var, Region region,
                      std::uint32_t offset, std::uint32_t count) = 0;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VariableStore {
 public:
  // Largest supported span hi - lo + 1 of an integer domain.
  static constexpr std::int64_t kMaxSpan = std::int64_t{1} << 20;

  VarId new_int_var(std::int64_t lo, std::int64_t hi);
  VarId new_bool_var();

  // Reserves entailment flags for propagators [0, n).
  void reserve_flags(std::size_t n);

  NarrowResult narrow(VarId var, Action action);

  std::size_t int_var_count() const { return int_meta_.size(); }
  std::size_t bool_var_count() const { return bool_count_; }
  std::size_t var_count() const { return int_var_count() + bool_var_count(); }
  std::size_t flag_count() const { return flag_count_; }

  std::int64_t min(VarId var) const {
    if (var.kind == VarKind::Bool) return bool_state(var) == BoolState::True ? 1 : 0;
    return lo_of(int_meta_[var.index]);
  }
  std::int64_t max(VarId var) const {
    if (var.kind == VarKind::Bool) return bool_state(var) == BoolState::False ? 0 : 1;
    return hi_of(int_meta_[var.index]);
  }
  std::uint64_t size(VarId var) const {
    if (var.kind == VarKind::Bool) return bool_state(var) == BoolState::Unknown ? 2 : 1;
    return regions_[static_cast<std::size_t>(Region::Int)][int_meta_[var.index].offset + 1];
  }
  bool contains(VarId var, std::int64_t v) const;
  bool assigned(VarId var) const { return size(var) == 1; }
  std::int64_t value(VarId var) const { return min(var); }

  BoolState bool_state(VarId var) const {
    const auto& words = regions_[static_cast<std::size_t>(Region::Bool)];
    return static_cast<BoolState>((words[var.index >> 5] >> ((var.index & 31u) * 2)) & 3u);
  }

  // Next present value >= v (or <= v), assuming lo <= v <= hi.
  std::int64_t next_value(VarId var, std::int64_t v) const;
  std::int64_t prev_value(VarId var, std::int64_t v) const;
  std::vector<std::int64_t> values(VarId var) const;

  bool flag(std::size_t id) const {
    if (id >= flag_count_) return false;
    const auto& words = regions_[static_cast<std::size_t>(Region::Flag)];
    return (words[id >> 6] >> (id & 63u)) & 1u;
  }
  void set_flag(std::size_t id);

  void set_observer(StoreObserver* observer) { observer_ = observer; }

  std::span<const std::uint64_t> region(Region r) const {
    return regions_[static_cast<std::size_t>(r)];
  }
  std::span<std::uint64_t> mutable_region(Region r) {
    return regions_[static_cast<std::size_t>(r)];
  }
  std::size_t word_count() const;
  std::size_t byte_size() const { return word_count() * sizeof(std::uint64_t); }

  // Contiguous image of all regions, in region order.
  void save(std::vector<std::uint64_t>& blob) const;
  void load(std::span<const std::uint64_t> blob);

  bool same_domains(const VariableStore& other) const;
  friend bool operator==(const VariableStore& a, const VariableStore& b) {
    return a.regions_ == b.regions_;
  }

  std::string describe(VarId var) const;

 private:
  struct IntLayout {
    std::uint32_t offset;
    std::int32_t base;
    std::uint32_t bits;
  };

  NarrowResult narrow_int(VarId var, Action action);
  NarrowResult narrow_bool(VarId var, Action action);

  // Word 0 of an integer domain packs lo (low half) and hi (high half).
  std::int32_t lo_of(const IntLayout& m) const {
    const auto w = regions_[static_cast<std::size_t>(Region::Int)][m.offset];
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(w & 0xffffffffu));
  }
  std::int32_t hi_of(const IntLayout& m) const {
    const auto w = regions_[static_cast<std::size_t>(Region::Int)][m.offset];
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(w >> 32));
  }
  void write_bounds(const IntLayout& m, std::int32_t lo, std::int32_t hi);
  std::int64_t next_bit(const IntLayout& m, std::int64_t bit) const;
  std::int64_t prev_bit(const IntLayout& m, std::int64_t bit) const;
  std::uint64_t clear_bits(const IntLayout& m, std::int64_t from, std::int64_t to);

  void notify(VarId var, Region region, std::uint32_t offset, std::uint32_t count) {
    if (observer_ != nullptr) observer_->record(*this, var, region, offset, count);
  }

  std::vector<IntLayout> int_meta_;
  std::size_t bool_count_ = 0;
  std::size_t flag_count_ = 0;
  std::array<std::vector<std::uint64_t>, kRegionCount> regions_;
  StoreObserver* observer_ = nullptr;
};

}  // namespace fdlab

#endif  // FDLAB_DOMAIN_HPP_

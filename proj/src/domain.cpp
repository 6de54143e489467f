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

#include "fdlab/domain.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <limits>
#include <sstream>

namespace fdlab {

namespace {

constexpr std::uint32_t kHeaderWords = 2;

std::uint32_t bit_words(std::uint32_t bits) { return (bits + 63u) / 64u; }

std::size_t ridx(Region r) { return static_cast<std::size_t>(r); }

// Bool domains as a 2-bit value mask: bit 0 = value 0 present, bit 1 = value 1.
unsigned bool_mask(BoolState s) {
  switch (s) {
    case BoolState::True:
      return 0b10u;
    case BoolState::False:
      return 0b01u;
    default:
      return 0b11u;
  }
}

unsigned allowed_mask(Action a) {
  switch (a.kind) {
    case ActionKind::RemoveValue:
      if (a.value == 0) return 0b10u;
      if (a.value == 1) return 0b01u;
      return 0b11u;
    case ActionKind::TightenMin:
      if (a.value <= 0) return 0b11u;
      return a.value == 1 ? 0b10u : 0u;
    case ActionKind::TightenMax:
      if (a.value >= 1) return 0b11u;
      return a.value == 0 ? 0b01u : 0u;
    case ActionKind::Assign:
      if (a.value == 0) return 0b01u;
      return a.value == 1 ? 0b10u : 0u;
  }
  return 0b11u;
}

}  // namespace

VarId VariableStore::new_int_var(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw ModelError("empty integer domain [" + std::to_string(lo) + ".." +
                     std::to_string(hi) + "]");
  }
  if (lo < std::numeric_limits<std::int32_t>::min() ||
      hi > std::numeric_limits<std::int32_t>::max() || hi - lo + 1 > kMaxSpan) {
    throw ModelError("integer domain [" + std::to_string(lo) + ".." + std::to_string(hi) +
                     "] exceeds the supported range");
  }
  auto& words = regions_[ridx(Region::Int)];
  IntLayout m{};
  m.offset = static_cast<std::uint32_t>(words.size());
  m.base = static_cast<std::int32_t>(lo);
  m.bits = static_cast<std::uint32_t>(hi - lo + 1);
  words.resize(words.size() + kHeaderWords + bit_words(m.bits), 0);
  write_bounds(m, static_cast<std::int32_t>(lo), static_cast<std::int32_t>(hi));
  words[m.offset + 1] = m.bits;
  std::uint64_t* bits = words.data() + m.offset + kHeaderWords;
  for (std::uint32_t i = 0; i < m.bits / 64u; ++i) bits[i] = ~std::uint64_t{0};
  if (m.bits % 64u != 0) bits[m.bits / 64u] = (std::uint64_t{1} << (m.bits % 64u)) - 1;
  int_meta_.push_back(m);
  return VarId{static_cast<std::uint32_t>(int_meta_.size() - 1), VarKind::Int};
}

VarId VariableStore::new_bool_var() {
  auto& words = regions_[ridx(Region::Bool)];
  const auto index = static_cast<std::uint32_t>(bool_count_++);
  if ((index >> 5) >= words.size()) words.push_back(0);
  return VarId{index, VarKind::Bool};
}

void VariableStore::reserve_flags(std::size_t n) {
  flag_count_ = n;
  regions_[ridx(Region::Flag)].assign((n + 63) / 64, 0);
}

void VariableStore::set_flag(std::size_t id) {
  if (id >= flag_count_ || flag(id)) return;
  notify(VarId{}, Region::Flag, static_cast<std::uint32_t>(id >> 6), 1);
  regions_[ridx(Region::Flag)][id >> 6] |= std::uint64_t{1} << (id & 63u);
}

std::size_t VariableStore::word_count() const {
  std::size_t n = 0;
  for (const auto& r : regions_) n += r.size();
  return n;
}

void VariableStore::save(std::vector<std::uint64_t>& blob) const {
  blob.resize(word_count());
  auto* out = blob.data();
  for (const auto& r : regions_) out = std::copy(r.begin(), r.end(), out);
}

void VariableStore::load(std::span<const std::uint64_t> blob) {
  assert(blob.size() == word_count());
  const auto* in = blob.data();
  for (auto& r : regions_) {
    std::copy(in, in + r.size(), r.begin());
    in += r.size();
  }
}

bool VariableStore::same_domains(const VariableStore& other) const {
  return regions_[ridx(Region::Int)] == other.regions_[ridx(Region::Int)] &&
         regions_[ridx(Region::Bool)] == other.regions_[ridx(Region::Bool)];
}

// -- integer helpers ---------------------------------------------------------

void VariableStore::write_bounds(const IntLayout& m, std::int32_t lo, std::int32_t hi) {
  regions_[ridx(Region::Int)][m.offset] =
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo)) |
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(hi)) << 32);
}

std::int64_t VariableStore::next_bit(const IntLayout& m, std::int64_t bit) const {
  if (bit < 0) bit = 0;
  if (bit >= m.bits) return -1;
  const std::uint64_t* bits = regions_[ridx(Region::Int)].data() + m.offset + kHeaderWords;
  auto wi = static_cast<std::size_t>(bit >> 6);
  std::uint64_t w = bits[wi] & (~std::uint64_t{0} << (bit & 63));
  const std::size_t nw = bit_words(m.bits);
  while (w == 0) {
    if (++wi >= nw) return -1;
    w = bits[wi];
  }
  return static_cast<std::int64_t>(wi * 64 + std::countr_zero(w));
}

std::int64_t VariableStore::prev_bit(const IntLayout& m, std::int64_t bit) const {
  if (bit >= m.bits) bit = m.bits - 1;
  if (bit < 0) return -1;
  const std::uint64_t* bits = regions_[ridx(Region::Int)].data() + m.offset + kHeaderWords;
  auto wi = static_cast<std::size_t>(bit >> 6);
  const unsigned shift = 63u - static_cast<unsigned>(bit & 63);
  std::uint64_t w = bits[wi] & (~std::uint64_t{0} >> shift);
  while (w == 0) {
    if (wi == 0) return -1;
    w = bits[--wi];
  }
  return static_cast<std::int64_t>(wi * 64 + 63 - std::countl_zero(w));
}

// Clears bits [from, to] and returns how many were set.
std::uint64_t VariableStore::clear_bits(const IntLayout& m, std::int64_t from, std::int64_t to) {
  from = std::max<std::int64_t>(from, 0);
  to = std::min<std::int64_t>(to, static_cast<std::int64_t>(m.bits) - 1);
  if (from > to) return 0;
  std::uint64_t* bits = regions_[ridx(Region::Int)].data() + m.offset + kHeaderWords;
  std::uint64_t removed = 0;
  const auto first = static_cast<std::size_t>(from >> 6);
  const auto last = static_cast<std::size_t>(to >> 6);
  for (std::size_t wi = first; wi <= last; ++wi) {
    std::uint64_t mask = ~std::uint64_t{0};
    if (wi == first) mask &= ~std::uint64_t{0} << (from & 63);
    if (wi == last) mask &= ~std::uint64_t{0} >> (63 - (to & 63));
    removed += static_cast<std::uint64_t>(std::popcount(bits[wi] & mask));
    bits[wi] &= ~mask;
  }
  return removed;
}

// -- queries -----------------------------------------------------------------

bool VariableStore::contains(VarId var, std::int64_t v) const {
  if (var.kind == VarKind::Bool) {
    if (v != 0 && v != 1) return false;
    return (bool_mask(bool_state(var)) >> v) & 1u;
  }
  const IntLayout& m = int_meta_[var.index];
  if (v < lo_of(m) || v > hi_of(m)) return false;
  const std::int64_t bit = v - m.base;
  const std::uint64_t* bits = regions_[ridx(Region::Int)].data() + m.offset + kHeaderWords;
  return (bits[bit >> 6] >> (bit & 63)) & 1u;
}

std::int64_t VariableStore::next_value(VarId var, std::int64_t v) const {
  if (var.kind == VarKind::Bool) {
    for (std::int64_t x = std::max<std::int64_t>(v, 0); x <= 1; ++x)
      if (contains(var, x)) return x;
    return std::numeric_limits<std::int64_t>::max();
  }
  const IntLayout& m = int_meta_[var.index];
  const std::int64_t b = next_bit(m, v - m.base);
  return b < 0 ? std::numeric_limits<std::int64_t>::max() : b + m.base;
}

std::int64_t VariableStore::prev_value(VarId var, std::int64_t v) const {
  if (var.kind == VarKind::Bool) {
    for (std::int64_t x = std::min<std::int64_t>(v, 1); x >= 0; --x)
      if (contains(var, x)) return x;
    return std::numeric_limits<std::int64_t>::min();
  }
  const IntLayout& m = int_meta_[var.index];
  const std::int64_t b = prev_bit(m, v - m.base);
  return b < 0 ? std::numeric_limits<std::int64_t>::min() : b + m.base;
}

std::vector<std::int64_t> VariableStore::values(VarId var) const {
  std::vector<std::int64_t> out;
  const std::int64_t hi = max(var);
  for (std::int64_t v = min(var); v <= hi; v = next_value(var, v + 1)) out.push_back(v);
  return out;
}

std::string VariableStore::describe(VarId var) const {
  const auto vals = values(var);
  std::ostringstream os;
  os << '{';
  if (!vals.empty() && vals.size() == static_cast<std::size_t>(vals.back() - vals.front() + 1) &&
      vals.size() > 2) {
    os << vals.front() << ".." << vals.back();
  } else {
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i];
  }
  os << '}';
  return os.str();
}

// -- narrowing ---------------------------------------------------------------

NarrowResult VariableStore::narrow(VarId var, Action action) {
  return var.kind == VarKind::Bool ? narrow_bool(var, action) : narrow_int(var, action);
}

NarrowResult VariableStore::narrow_bool(VarId var, Action action) {
  const unsigned current = bool_mask(bool_state(var));
  const unsigned next = current & allowed_mask(action);
  if (next == current) return {NarrowStatus::NoChange, {var}};
  if (next == 0) return {NarrowStatus::Failed, {var}};
  const std::uint32_t wi = var.index >> 5;
  notify(var, Region::Bool, wi, 1);
  const unsigned shift = (var.index & 31u) * 2;
  const auto state = next == 0b10u ? BoolState::True : BoolState::False;
  auto& w = regions_[ridx(Region::Bool)][wi];
  w = (w & ~(std::uint64_t{3} << shift)) | (static_cast<std::uint64_t>(state) << shift);
  return {NarrowStatus::Narrowed, {var, EventClass::Instantiated}};
}

NarrowResult VariableStore::narrow_int(VarId var, Action action) {
  const IntLayout& m = int_meta_[var.index];
  auto& words = regions_[ridx(Region::Int)];
  const std::int64_t lo = lo_of(m);
  const std::int64_t hi = hi_of(m);
  const std::uint64_t size = words[m.offset + 1];
  const std::int64_t v = action.value;
  const auto record = [&] { notify(var, Region::Int, m.offset, kHeaderWords + bit_words(m.bits)); };

  std::int64_t new_lo = lo;
  std::int64_t new_hi = hi;
  std::uint64_t new_size = size;
  switch (action.kind) {
    case ActionKind::RemoveValue: {
      if (!contains(var, v)) return {NarrowStatus::NoChange, {var}};
      if (size == 1) return {NarrowStatus::Failed, {var}};
      record();
      new_size -= clear_bits(m, v - m.base, v - m.base);
      if (v == lo) new_lo = next_bit(m, v - m.base) + m.base;
      if (v == hi) new_hi = prev_bit(m, v - m.base) + m.base;
      break;
    }
    case ActionKind::TightenMin: {
      if (v <= lo) return {NarrowStatus::NoChange, {var}};
      if (v > hi) return {NarrowStatus::Failed, {var}};
      record();
      new_size -= clear_bits(m, lo - m.base, v - 1 - m.base);
      new_lo = next_bit(m, v - m.base) + m.base;
      break;
    }
    case ActionKind::TightenMax: {
      if (v >= hi) return {NarrowStatus::NoChange, {var}};
      if (v < lo) return {NarrowStatus::Failed, {var}};
      record();
      new_size -= clear_bits(m, v + 1 - m.base, hi - m.base);
      new_hi = prev_bit(m, v - m.base) + m.base;
      break;
    }
    case ActionKind::Assign: {
      if (!contains(var, v)) return {NarrowStatus::Failed, {var}};
      if (size == 1) return {NarrowStatus::NoChange, {var}};
      record();
      clear_bits(m, lo - m.base, v - 1 - m.base);
      clear_bits(m, v + 1 - m.base, hi - m.base);
      new_size = 1;
      new_lo = new_hi = v;
      break;
    }
  }
  write_bounds(m, static_cast<std::int32_t>(new_lo), static_cast<std::int32_t>(new_hi));
  words[m.offset + 1] = new_size;

  EventClass cls = EventClass::DomainChanged;
  if (new_size == 1) {
    cls = EventClass::Instantiated;
  } else if (new_lo != lo || new_hi != hi) {
    cls = EventClass::BoundsChanged;
  }
  return {NarrowStatus::Narrowed, {var, cls}};
}

}  // namespace fdlab

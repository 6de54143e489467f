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

#include "fdlab/constraints.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

namespace fdlab {

std::string_view to_string(SumMode mode) {
  return mode == SumMode::NativeEquals ? "native" : "decomposed";
}

std::string_view to_string(BoolMode mode) {
  return mode == BoolMode::NativeBool ? "native" : "int";
}

SumMode parse_sum_mode(std::string_view text) {
  if (text == "native") return SumMode::NativeEquals;
  if (text == "decomposed") return SumMode::Decomposed;
  throw ModelError("unknown sum mode '" + std::string(text) + "'");
}

BoolMode parse_bool_mode(std::string_view text) {
  if (text == "native") return BoolMode::NativeBool;
  if (text == "int") return BoolMode::IntZeroOne;
  throw ModelError("unknown bool mode '" + std::string(text) + "'");
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

void subscribe_all(Engine& engine, std::uint32_t id, std::span<const VarId> vars, EventClass cls) {
  for (VarId v : vars) engine.subscribe(id, v, cls);
}

bool is_zero_one(const Model& model, VarId v) {
  const auto& s = model.engine.store();
  return v.kind == VarKind::Bool || (s.min(v) >= 0 && s.max(v) <= 1);
}

// ---------------------------------------------------------------------------
// Linear sums

// sum(a_i x_i) <= c when `upper`, sum(a_i x_i) >= c when `lower`; both for Eq.
class Linear final : public Propagator {
 public:
  Linear(std::vector<LinearTerm> terms, std::int64_t c, bool upper, bool lower)
      : Propagator(priority::kLinear), terms_(std::move(terms)), c_(c), upper_(upper), lower_(lower) {}

  std::string_view name() const override {
    if (upper_ && lower_) return "linear_eq";
    return upper_ ? "linear_leq" : "linear_geq";
  }

  PropOutcome propagate(Engine& e) override {
    for (;;) {
      bool changed = false;
      if (upper_) {
        switch (tighten(e, 1, c_)) {
          case Step::Failed: return PropOutcome::Failed;
          case Step::Changed: changed = true; break;
          case Step::Same: break;
        }
      }
      if (lower_) {
        switch (tighten(e, -1, -c_)) {
          case Step::Failed: return PropOutcome::Failed;
          case Step::Changed: changed = true; break;
          case Step::Same: break;
        }
      }
      if (!changed) break;
    }
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    for (const auto& t : terms_) {
      lo += t.coeff > 0 ? t.coeff * e.min(t.var) : t.coeff * e.max(t.var);
      hi += t.coeff > 0 ? t.coeff * e.max(t.var) : t.coeff * e.min(t.var);
    }
    if ((!upper_ || hi <= c_) && (!lower_ || lo >= c_)) return PropOutcome::Subsumed;
    return PropOutcome::AtFixpoint;
  }

 private:
  enum class Step { Same, Changed, Failed };

  // One pass of sum(sign * a_i x_i) <= bound.
  Step tighten(Engine& e, std::int64_t sign, std::int64_t bound) {
    std::int64_t sum_min = 0;
    for (const auto& t : terms_) sum_min += term_min(e, sign * t.coeff, t.var);
    if (sum_min > bound) return Step::Failed;
    Step result = Step::Same;
    for (const auto& t : terms_) {
      const std::int64_t a = sign * t.coeff;
      const std::int64_t own = term_min(e, a, t.var);
      const std::int64_t slack = bound - (sum_min - own);
      NarrowStatus st;
      if (a > 0) {
        const std::int64_t cap = floor_div(slack, a);
        if (cap >= e.max(t.var)) continue;  // nothing to cut
        st = e.narrow_status(t.var, Action::at_most(cap));
      } else {
        const std::int64_t floor = ceil_div(slack, a);
        if (floor <= e.min(t.var)) continue;
        st = e.narrow_status(t.var, Action::at_least(floor));
      }
      if (st == NarrowStatus::Failed) return Step::Failed;
      if (st == NarrowStatus::Narrowed) {
        result = Step::Changed;
        sum_min += term_min(e, a, t.var) - own;
      }
    }
    return result;
  }

  static std::int64_t term_min(const Engine& e, std::int64_t a, VarId v) {
    return a > 0 ? a * e.min(v) : a * e.max(v);
  }

  std::vector<LinearTerm> terms_;
  std::int64_t c_;
  bool upper_;
  bool lower_;
};

// ---------------------------------------------------------------------------
// Sum over packed Booleans: counts True / Unknown, fixes the rest once a
// bound is reached.
class BoolSum final : public Propagator {
 public:
  BoolSum(std::vector<VarId> vars, std::int64_t c, bool upper, bool lower)
      : Propagator(priority::kLinear), vars_(std::move(vars)), c_(c), upper_(upper), lower_(lower) {}

  std::string_view name() const override { return "bool_sum"; }

  PropOutcome propagate(Engine& e) override {
    const VariableStore& s = e.store();
    std::int64_t ones = 0;
    std::int64_t unknown = 0;
    for (VarId v : vars_) {
      const BoolState st = s.bool_state(v);
      ones += st == BoolState::True;
      unknown += st == BoolState::Unknown;
    }
    if (upper_ && ones > c_) return PropOutcome::Failed;
    if (lower_ && ones + unknown < c_) return PropOutcome::Failed;
    std::int64_t fill = -1;
    if (upper_ && ones == c_) fill = 0;
    if (lower_ && ones + unknown == c_) fill = 1;
    if (fill >= 0 && unknown > 0) {
      for (VarId v : vars_)
        if (s.bool_state(v) == BoolState::Unknown) e.assign(v, fill);
      return PropOutcome::Subsumed;
    }
    if ((!upper_ || ones + unknown <= c_) && (!lower_ || ones >= c_)) return PropOutcome::Subsumed;
    return PropOutcome::AtFixpoint;
  }

 private:
  std::vector<VarId> vars_;
  std::int64_t c_;
  bool upper_;
  bool lower_;
};

// ---------------------------------------------------------------------------

class AllDifferent final : public Propagator {
 public:
  explicit AllDifferent(std::vector<VarId> vars)
      : Propagator(priority::kGlobal), vars_(std::move(vars)), done_(vars_.size(), 0) {}

  std::string_view name() const override { return "alldifferent"; }

  PropOutcome propagate(Engine& e) override {
    std::fill(done_.begin(), done_.end(), 0);
    work_.clear();
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (e.assigned(vars_[i])) work_.push_back(i);
    while (!work_.empty()) {
      const std::size_t i = work_.back();
      work_.pop_back();
      if (done_[i]) continue;
      done_[i] = 1;
      const std::int64_t v = e.min(vars_[i]);
      for (std::size_t j = 0; j < vars_.size(); ++j) {
        if (j == i) continue;
        const NarrowStatus st = e.narrow_status(vars_[j], Action::remove(v));
        if (st == NarrowStatus::Failed) return PropOutcome::Failed;
        if (st == NarrowStatus::Narrowed && !done_[j] && e.assigned(vars_[j])) work_.push_back(j);
      }
    }
    if (std::all_of(done_.begin(), done_.end(), [](std::uint8_t d) { return d != 0; }))
      return PropOutcome::Subsumed;
    return PropOutcome::AtFixpoint;
  }

 private:
  std::vector<VarId> vars_;
  std::vector<std::uint8_t> done_;
  std::vector<std::size_t> work_;
};

class NotEqualConst final : public Propagator {
 public:
  NotEqualConst(VarId x, std::int64_t c) : Propagator(priority::kCheap), x_(x), c_(c) {}
  std::string_view name() const override { return "ne_const"; }
  PropOutcome propagate(Engine& e) override {
    return e.remove(x_, c_) ? PropOutcome::Subsumed : PropOutcome::Failed;
  }

 private:
  VarId x_;
  std::int64_t c_;
};

class EqualConst final : public Propagator {
 public:
  EqualConst(VarId x, std::int64_t c) : Propagator(priority::kCheap), x_(x), c_(c) {}
  std::string_view name() const override { return "eq_const"; }
  PropOutcome propagate(Engine& e) override {
    return e.assign(x_, c_) ? PropOutcome::Subsumed : PropOutcome::Failed;
  }

 private:
  VarId x_;
  std::int64_t c_;
};

class UpperBound final : public Propagator {
 public:
  UpperBound(VarId x, std::int64_t bound) : Propagator(priority::kCheap), x_(x), bound_(bound) {}
  std::string_view name() const override { return "upper_bound"; }
  PropOutcome propagate(Engine& e) override {
    return e.set_max(x_, bound_) ? PropOutcome::AtFixpoint : PropOutcome::Failed;
  }

 private:
  VarId x_;
  std::int64_t bound_;
};

class LessEqual final : public Propagator {
 public:
  LessEqual(VarId x, VarId y, bool strict)
      : Propagator(priority::kCheap), x_(x), y_(y), gap_(strict ? 1 : 0) {}
  std::string_view name() const override { return "le"; }
  PropOutcome propagate(Engine& e) override {
    if (!e.set_max(x_, e.max(y_) - gap_)) return PropOutcome::Failed;
    if (!e.set_min(y_, e.min(x_) + gap_)) return PropOutcome::Failed;
    return e.max(x_) + gap_ <= e.min(y_) ? PropOutcome::Subsumed : PropOutcome::AtFixpoint;
  }

 private:
  VarId x_;
  VarId y_;
  std::int64_t gap_;
};

class BoolAnd final : public Propagator {
 public:
  BoolAnd(VarId z, VarId x, VarId y) : Propagator(priority::kCheap), z_(z), x_(x), y_(y) {}
  std::string_view name() const override { return "bool_and"; }

  PropOutcome propagate(Engine& e) override {
    for (;;) {
      const auto before = snapshot(e);
      if (e.min(x_) == 1 && e.min(y_) == 1 && !e.assign(z_, 1)) return PropOutcome::Failed;
      if ((e.max(x_) == 0 || e.max(y_) == 0) && !e.assign(z_, 0)) return PropOutcome::Failed;
      if (e.min(z_) == 1 && !(e.assign(x_, 1) && e.assign(y_, 1))) return PropOutcome::Failed;
      if (e.max(z_) == 0) {
        if (e.min(x_) == 1 && !e.assign(y_, 0)) return PropOutcome::Failed;
        if (e.min(y_) == 1 && !e.assign(x_, 0)) return PropOutcome::Failed;
      }
      if (snapshot(e) == before) break;
    }
    if (e.assigned(z_) && (e.max(z_) == 0 ? (e.max(x_) == 0 || e.max(y_) == 0) : true))
      return PropOutcome::Subsumed;
    return PropOutcome::AtFixpoint;
  }

 private:
  // Low/high bits of the three 0/1 domains.
  unsigned snapshot(const Engine& e) const {
    unsigned bits = 0;
    for (VarId v : {z_, x_, y_}) bits = (bits << 2) | static_cast<unsigned>(e.min(v) << 1 | e.max(v));
    return bits;
  }

  VarId z_;
  VarId x_;
  VarId y_;
};

// Bounds-based lexicographic ordering. Position alpha is the first one not
// known to hold equal values; beyond it the tail decides whether equality at
// alpha is still possible.
class LexLeq final : public Propagator {
 public:
  LexLeq(std::vector<VarId> xs, std::vector<VarId> ys, bool strict)
      : Propagator(priority::kGlobal), xs_(std::move(xs)), ys_(std::move(ys)), strict_(strict) {}

  std::string_view name() const override { return strict_ ? "lex_less" : "lex_leq"; }

  PropOutcome propagate(Engine& e) override {
    const std::size_t n = xs_.size();
    std::size_t alpha = 0;
    for (;;) {
      while (alpha < n && fixed_equal(e, alpha)) ++alpha;
      if (alpha == n) return strict_ ? PropOutcome::Failed : PropOutcome::Subsumed;
      const VarId x = xs_[alpha];
      const VarId y = ys_[alpha];
      const bool need_less = !tail_allows_equal(e, alpha + 1);
      const std::int64_t gap = need_less ? 1 : 0;
      if (!e.set_max(x, e.max(y) - gap)) return PropOutcome::Failed;
      if (!e.set_min(y, e.min(x) + gap)) return PropOutcome::Failed;
      if (e.max(x) < e.min(y)) return PropOutcome::Subsumed;
      if (!fixed_equal(e, alpha)) return PropOutcome::AtFixpoint;
    }
  }

 private:
  bool fixed_equal(const Engine& e, std::size_t i) const {
    if (xs_[i] == ys_[i]) return true;
    return e.assigned(xs_[i]) && e.assigned(ys_[i]) && e.min(xs_[i]) == e.min(ys_[i]);
  }

  // Whether xs[from..] can still be <=lex (or <lex) ys[from..].
  bool tail_allows_equal(const Engine& e, std::size_t from) const {
    for (std::size_t i = from; i < xs_.size(); ++i) {
      if (xs_[i] == ys_[i]) continue;
      const std::int64_t a = e.min(xs_[i]);
      const std::int64_t b = e.max(ys_[i]);
      if (a < b) return true;
      if (a > b) return false;
    }
    return !strict_;
  }

  std::vector<VarId> xs_;
  std::vector<VarId> ys_;
  bool strict_;
};

std::uint32_t install(Model& model, std::unique_ptr<Propagator> p) {
  ++model.constraints;
  return model.engine.add(std::move(p));
}

void check_linear_range(const Model& model, std::span<const LinearTerm> terms, std::int64_t c) {
  const auto& s = model.engine.store();
  __int128 total = c < 0 ? -static_cast<__int128>(c) : c;
  for (const auto& t : terms) {
    if (t.coeff == 0) throw ModelError("linear term with zero coefficient");
    const __int128 a = t.coeff < 0 ? -static_cast<__int128>(t.coeff) : t.coeff;
    const __int128 m = std::max<__int128>(s.min(t.var) < 0 ? -static_cast<__int128>(s.min(t.var)) : s.min(t.var),
                                          s.max(t.var) < 0 ? -static_cast<__int128>(s.max(t.var)) : s.max(t.var));
    total += a * m;
  }
  // Headroom for the intermediate sums inside the propagator.
  if (total > std::numeric_limits<std::int64_t>::max() / 4)
    throw ModelError("linear constraint may overflow 64-bit arithmetic");
}

std::size_t post_halves(Model& model, std::unique_ptr<Propagator> upper,
                        std::unique_ptr<Propagator> lower, std::span<const VarId> vars,
                        EventClass cls) {
  std::size_t posted = 0;
  for (auto* half : {&upper, &lower}) {
    if (!*half) continue;
    const auto id = install(model, std::move(*half));
    subscribe_all(model.engine, id, vars, cls);
    ++posted;
  }
  return posted;
}

}  // namespace

std::size_t post_linear(Model& model, std::vector<LinearTerm> terms, Rel rel, std::int64_t c,
                        SumMode mode, bool pair_counted) {
  if (terms.empty()) throw ModelError("linear constraint needs at least one term");
  check_linear_range(model, terms, c);
  std::vector<VarId> vars;
  vars.reserve(terms.size());
  for (const auto& t : terms) vars.push_back(t.var);

  if (mode == SumMode::NativeEquals || (rel != Rel::Eq && !pair_counted)) {
    const bool upper = rel != Rel::Geq;
    const bool lower = rel != Rel::Leq;
    return post_halves(model, std::make_unique<Linear>(std::move(terms), c, upper, lower), nullptr,
                       vars, EventClass::BoundsChanged);
  }
  if (rel == Rel::Eq) {
    return post_halves(model, std::make_unique<Linear>(terms, c, true, false),
                       std::make_unique<Linear>(terms, c, false, true), vars,
                       EventClass::BoundsChanged);
  }
  // Pair-counted inequality: the opposite half is the trivial bound.
  const auto& s = model.engine.store();
  std::int64_t trivial = 0;
  for (const auto& t : terms) {
    trivial += rel == Rel::Leq ? (t.coeff > 0 ? t.coeff * s.min(t.var) : t.coeff * s.max(t.var))
                               : (t.coeff > 0 ? t.coeff * s.max(t.var) : t.coeff * s.min(t.var));
  }
  const bool leq = rel == Rel::Leq;
  return post_halves(model, std::make_unique<Linear>(terms, c, leq, !leq),
                     std::make_unique<Linear>(terms, trivial, !leq, leq), vars,
                     EventClass::BoundsChanged);
}

std::size_t post_bool_sum(Model& model, std::vector<VarId> vars, Rel rel, std::int64_t c,
                          BoolMode bool_mode, SumMode sum_mode, bool pair_counted) {
  if (vars.empty()) throw ModelError("Boolean sum needs at least one variable");
  if (bool_mode == BoolMode::IntZeroOne) {
    std::vector<LinearTerm> terms;
    terms.reserve(vars.size());
    for (VarId v : vars) {
      if (!is_zero_one(model, v)) throw ModelError("Boolean sum over a non-0/1 variable");
      terms.push_back({1, v});
    }
    return post_linear(model, std::move(terms), rel, c, sum_mode, pair_counted);
  }
  for (VarId v : vars)
    if (v.kind != VarKind::Bool) throw ModelError("native Boolean sum over an integer variable");

  const bool upper = rel != Rel::Geq;
  const bool lower = rel != Rel::Leq;
  if (sum_mode == SumMode::NativeEquals || (rel != Rel::Eq && !pair_counted)) {
    return post_halves(model, std::make_unique<BoolSum>(vars, c, upper, lower), nullptr, vars,
                       EventClass::Instantiated);
  }
  if (rel == Rel::Eq) {
    return post_halves(model, std::make_unique<BoolSum>(vars, c, true, false),
                       std::make_unique<BoolSum>(vars, c, false, true), vars,
                       EventClass::Instantiated);
  }
  const std::int64_t trivial = rel == Rel::Leq ? 0 : static_cast<std::int64_t>(vars.size());
  return post_halves(model, std::make_unique<BoolSum>(vars, c, upper, lower),
                     std::make_unique<BoolSum>(vars, trivial, !upper, !lower), vars,
                     EventClass::Instantiated);
}

std::size_t post_alldifferent(Model& model, std::vector<VarId> vars) {
  if (vars.size() < 2) throw ModelError("alldifferent needs at least two variables");
  std::vector<VarId> subs = vars;
  return post_halves(model, std::make_unique<AllDifferent>(std::move(vars)), nullptr, subs,
                     EventClass::Instantiated);
}

std::size_t post_ne_const(Model& model, VarId var, std::int64_t c) {
  if (var.kind != VarKind::Int) throw ModelError("ne_const expects an integer variable");
  install(model, std::make_unique<NotEqualConst>(var, c));
  return 1;
}

std::size_t post_eq_const(Model& model, VarId var, std::int64_t c) {
  install(model, std::make_unique<EqualConst>(var, c));
  return 1;
}

std::size_t post_bool_and(Model& model, VarId z, VarId x, VarId y) {
  for (VarId v : {z, x, y})
    if (!is_zero_one(model, v)) throw ModelError("bool_and over a non-0/1 variable");
  const VarId vars[] = {z, x, y};
  return post_halves(model, std::make_unique<BoolAnd>(z, x, y), nullptr, vars,
                     EventClass::Instantiated);
}

std::size_t post_lex_leq(Model& model, std::vector<VarId> xs, std::vector<VarId> ys, bool strict) {
  if (xs.empty() || xs.size() != ys.size())
    throw ModelError("lex ordering needs two non-empty vectors of equal length");
  std::vector<VarId> subs = xs;
  subs.insert(subs.end(), ys.begin(), ys.end());
  return post_halves(model, std::make_unique<LexLeq>(std::move(xs), std::move(ys), strict), nullptr,
                     subs, EventClass::BoundsChanged);
}

std::size_t post_le(Model& model, VarId x, VarId y, bool strict) {
  const VarId vars[] = {x, y};
  return post_halves(model, std::make_unique<LessEqual>(x, y, strict), nullptr, vars,
                     EventClass::BoundsChanged);
}

std::unique_ptr<Propagator> make_upper_bound(VarId x, std::int64_t bound) {
  return std::make_unique<UpperBound>(x, bound);
}

}  // namespace fdlab

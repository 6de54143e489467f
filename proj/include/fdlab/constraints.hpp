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
// Constraint catalog. Every post_* call adds one or more propagators to the
// model's engine and bumps Model::constraints by the number it posted, so
// the count reported for a model is the count of posted propagators.

#ifndef FDLAB_CONSTRAINTS_HPP_
#define FDLAB_CONSTRAINTS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fdlab/domain.hpp"
#include "fdlab/propagate.hpp"

namespace fdlab {

struct LinearTerm {
  std::int64_t coeff;
  VarId var;
};

enum class Rel : std::uint8_t { Eq, Leq, Geq };

// NativeEquals: one propagator per equality sum.
// Decomposed: every equality sum becomes a <= half plus a >= half.
enum class SumMode : std::uint8_t { NativeEquals, Decomposed };

// NativeBool: packed Boolean variables and counter-based sums.
// IntZeroOne: Booleans are integer variables over {0..1}.
enum class BoolMode : std::uint8_t { NativeBool, IntZeroOne };

std::string_view to_string(SumMode mode);
std::string_view to_string(BoolMode mode);
SumMode parse_sum_mode(std::string_view text);
BoolMode parse_bool_mode(std::string_view text);

struct Model {
  explicit Model(SumMode sum = SumMode::NativeEquals, BoolMode boolean = BoolMode::NativeBool)
      : sum_mode(sum), bool_mode(boolean) {}

  Engine engine;
  SumMode sum_mode;
  BoolMode bool_mode;
  std::vector<VarId> branch_order;
  std::optional<VarId> objective;
  std::size_t constraints = 0;
  double build_ms = 0.0;

  VarId new_int_var(std::int64_t lo, std::int64_t hi) { return engine.new_int_var(lo, hi); }
  // A 0/1 variable in the representation selected by bool_mode.
  VarId new_boolean() {
    return bool_mode == BoolMode::NativeBool ? engine.new_bool_var() : engine.new_int_var(0, 1);
  }
  std::size_t var_count() const { return engine.store().var_count(); }
};

// Bounds-consistent sum(coeff * var) rel c. `pair_counted` marks inequality
// sums that Decomposed mode still posts as two halves (the second one is
// entailed from the start).
std::size_t post_linear(Model& model, std::vector<LinearTerm> terms, Rel rel, std::int64_t c,
                        SumMode mode, bool pair_counted = false);

// Value-consistent: an instantiated value is removed from all other domains.
std::size_t post_alldifferent(Model& model, std::vector<VarId> vars);

std::size_t post_ne_const(Model& model, VarId var, std::int64_t c);
std::size_t post_eq_const(Model& model, VarId var, std::int64_t c);

// z = x and y
std::size_t post_bool_and(Model& model, VarId z, VarId x, VarId y);

// Sum of 0/1 variables. NativeBool uses the counting propagator; IntZeroOne
// routes to post_linear. Both prune identically.
std::size_t post_bool_sum(Model& model, std::vector<VarId> vars, Rel rel, std::int64_t c,
                          BoolMode bool_mode, SumMode sum_mode, bool pair_counted = false);

// xs <=lex ys, or <lex when strict.
std::size_t post_lex_leq(Model& model, std::vector<VarId> xs, std::vector<VarId> ys, bool strict);

// x <= y, or x < y when strict.
std::size_t post_le(Model& model, VarId x, VarId y, bool strict);

// x <= bound. Used for objective cuts; never reports subsumption so it can be
// added after the engine is sealed.
std::unique_ptr<Propagator> make_upper_bound(VarId x, std::int64_t bound);

}  // namespace fdlab

#endif  // FDLAB_CONSTRAINTS_HPP_

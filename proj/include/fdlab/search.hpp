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
// Depth-first search with binary branching over a static order: the first
// unassigned decision variable x with smallest value v gets x = v on the
// left and x != v on the right. Every applied decision counts as a node;
// every failed node counts as a backtrack.

#ifndef FDLAB_SEARCH_HPP_
#define FDLAB_SEARCH_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "fdlab/constraints.hpp"
#include "fdlab/propagate.hpp"
#include "fdlab/restore.hpp"

namespace fdlab {

enum class SolveMode : std::uint8_t { First, All };

// PostConstraint adds a new `objective <= best - 1` propagator per solution;
// TightenBound narrows the objective's upper bound in place.
enum class BnBMode : std::uint8_t { PostConstraint, TightenBound };

std::string_view to_string(BnBMode mode);
BnBMode parse_bnb_mode(std::string_view text);

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t solutions = 0;
  double setup_ms = 0.0;
  double solve_ms = 0.0;
  double nps = 0.0;
  std::uint64_t propagations = 0;
  RestoreStats restore;
};

// nodes / max(solve seconds, epsilon)
double nodes_per_second(std::uint64_t nodes, double solve_ms);

struct Solution {
  std::vector<std::int64_t> values;  // one per decision variable, in branch order
  std::optional<std::int64_t> objective;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct SearchOptions {
  SolveMode mode = SolveMode::First;
  RestoreMode restore = RestoreMode::trail();
  QueuePolicy queue = QueuePolicy::Priority;
  BnBMode bnb = BnBMode::PostConstraint;
  // Overrides Model::branch_order when set.
  std::optional<std::vector<VarId>> order;
  bool keep_solutions = true;
  // Called after every successful restoration, before the right branch.
  std::function<void(const VariableStore&, std::size_t depth)> on_backtrack;
};

struct SearchResult {
  std::vector<Solution> solutions;
  SearchStats stats;
  bool root_failed = false;
};

struct OptimizeResult {
  std::optional<Solution> best;  // last incumbent, proven optimal
  SearchStats stats;
  bool infeasible() const { return !best.has_value(); }
};

// The model is consumed: its store is left in whatever state search ended in.
SearchResult solve(Model& model, const SearchOptions& options);

// Branch and bound on model.objective (or `objective` when given).
OptimizeResult minimize(Model& model, const SearchOptions& options,
                        std::optional<VarId> objective = std::nullopt);

}  // namespace fdlab

#endif  // FDLAB_SEARCH_HPP_

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
// Brute-force oracles and shared harness code for the unit and acceptance
// tests. Nothing here calls into the solver's constraint code; the oracles
// restate each problem from scratch.

#ifndef FDLAB_TESTS_SUPPORT_HPP_
#define FDLAB_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fdlab/models.hpp"
#include "fdlab/search.hpp"

namespace fdlab::testing {

using Assignment = std::vector<std::int64_t>;

// Every placement of n queens with one queen per row, n^n candidates.
inline std::set<Assignment> brute_force_queens(int n) {
  std::set<Assignment> out;
  Assignment q(n, 0);
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= n;
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    for (int i = 0; i < n; ++i) {
      q[i] = c % n;
      c /= n;
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        ok = q[i] != q[j] && std::llabs(q[i] - q[j]) != j - i;
    if (ok) out.insert(q);
  }
  return out;
}

// Magic squares of order 3 satisfying the four corner orderings of the
// model, found by walking all 9! grids.
inline std::set<Assignment> brute_force_magic3() {
  std::set<Assignment> out;
  Assignment g{1, 2, 3, 4, 5, 6, 7, 8, 9};
  auto at = [&](int r, int c) { return g[r * 3 + c]; };
  do {
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      ok = at(i, 0) + at(i, 1) + at(i, 2) == 15 && at(0, i) + at(1, i) + at(2, i) == 15;
    }
    ok = ok && at(0, 0) + at(1, 1) + at(2, 2) == 15 && at(0, 2) + at(1, 1) + at(2, 0) == 15;
    ok = ok && at(0, 0) <= at(0, 2) && at(0, 0) <= at(2, 0) && at(0, 0) <= at(2, 2) && at(0, 2) <= at(2, 0);
    if (ok) out.insert(g);
  } while (std::next_permutation(g.begin(), g.end()));
  return out;
}

namespace detail {
inline bool extend_ruler(std::vector<int>& marks, std::vector<char>& used, int m, int length) {
  if (static_cast<int>(marks.size()) == m - 1) {
    // The last mark is pinned at `length`.
    std::vector<int> added;
    bool ok = true;
    for (int x : marks) {
      const int d = length - x;
      if (used[d]) {
        ok = false;
        break;
      }
      used[d] = 1;
      added.push_back(d);
    }
    for (int d : added) used[d] = 0;
    return ok;
  }
  for (int next = marks.back() + 1; next < length; ++next) {
    std::vector<int> added;
    bool ok = true;
    for (int x : marks) {
      const int d = next - x;
      if (used[d]) {
        ok = false;
        break;
      }
      used[d] = 1;
      added.push_back(d);
    }
    bool found = false;
    if (ok) {
      marks.push_back(next);
      found = extend_ruler(marks, used, m, length);
      marks.pop_back();
    }
    for (int d : added) used[d] = 0;
    if (found) return true;
  }
  return false;
}
}  // namespace detail

// Shortest Golomb ruler with m marks, by trying lengths in increasing order.
inline int brute_force_golomb(int m) {
  if (m <= 1) return 0;
  for (int length = m - 1;; ++length) {
    std::vector<int> marks{0};
    std::vector<char> used(length + 1, 0);
    if (detail::extend_ruler(marks, used, m, length)) return length;
  }
}

struct Trajectory {
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t solutions = 0;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

inline std::string to_string(const Trajectory& t) {
  return std::to_string(t.nodes) + "/" + std::to_string(t.backtracks) + "/" + std::to_string(t.solutions);
}

struct DeskCase {
  const char* instance;
  SolveMode mode;
};

// Small instances that every configuration must explore identically.
inline std::vector<DeskCase> desk_suite() {
  return {{"queens:6", SolveMode::All},    {"queens:8", SolveMode::All},      {"golomb:7", SolveMode::First},
          {"magic:4", SolveMode::First},   {"golfers:2,3,3", SolveMode::First}, {"golfers:2,4,4", SolveMode::First},
          {"bibd:7,3,2", SolveMode::First}};
}

inline std::vector<RestoreMode> restore_modes() {
  return {RestoreMode::trail(), RestoreMode::copy(), RestoreMode::recompute(2), RestoreMode::recompute(8),
          RestoreMode::recompute(16), RestoreMode::recompute(32)};
}

struct RunOutcome {
  Trajectory trajectory;
  std::vector<Solution> solutions;
  SearchStats stats;
};

// Solves (or minimizes, for optimization classes) a freshly built instance.
inline RunOutcome run_instance(const Instance& inst, SearchOptions opts) {
  Model model = build(inst);
  RunOutcome out;
  if (inst.is_optimization()) {
    OptimizeResult r = minimize(model, opts);
    out.stats = r.stats;
    if (r.best) out.solutions.push_back(*r.best);
  } else {
    SearchResult r = solve(model, opts);
    out.stats = r.stats;
    out.solutions = std::move(r.solutions);
  }
  out.trajectory = {out.stats.nodes, out.stats.backtracks, out.stats.solutions};
  return out;
}

// Store images captured after every backtrack of one search.
inline std::vector<std::vector<std::uint64_t>> shadow_images(const Instance& inst, SolveMode mode,
                                                             RestoreMode restore) {
  std::vector<std::vector<std::uint64_t>> images;
  SearchOptions opts;
  opts.mode = mode;
  opts.restore = restore;
  opts.on_backtrack = [&](const VariableStore& store, std::size_t) {
    images.emplace_back();
    store.save(images.back());
  };
  run_instance(inst, opts);
  return images;
}

}  // namespace fdlab::testing

#endif  // FDLAB_TESTS_SUPPORT_HPP_

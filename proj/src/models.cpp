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

#include "fdlab/models.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <numeric>
#include <set>

namespace fdlab {

std::string_view to_string(ProblemClass cls) {
  switch (cls) {
    case ProblemClass::Queens:
      return "queens";
    case ProblemClass::Golomb:
      return "golomb";
    case ProblemClass::Magic:
      return "magic";
    case ProblemClass::Golfers:
      return "golfers";
    case ProblemClass::Bibd:
      return "bibd";
  }
  return "?";
}

std::string Instance::params_string() const {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(params[i]);
  }
  return out;
}

std::string Instance::name() const {
  return class_name() + ":" + params_string() + (extended ? "+ext" : "");
}

Instance parse_instance(std::string_view text) {
  Instance inst;
  constexpr std::string_view kExt = "+ext";
  if (text.size() > kExt.size() && text.substr(text.size() - kExt.size()) == kExt) {
    inst.extended = true;
    text.remove_suffix(kExt.size());
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ModelError("instance '" + std::string(text) + "' lacks ':'");
  const std::string_view cls = text.substr(0, colon);
  std::size_t arity = 0;
  if (cls == "queens") {
    inst.cls = ProblemClass::Queens;
    arity = 1;
  } else if (cls == "golomb") {
    inst.cls = ProblemClass::Golomb;
    arity = 1;
  } else if (cls == "magic") {
    inst.cls = ProblemClass::Magic;
    arity = 1;
  } else if (cls == "golfers") {
    inst.cls = ProblemClass::Golfers;
    arity = 3;
  } else if (cls == "bibd") {
    inst.cls = ProblemClass::Bibd;
    arity = 3;
  } else {
    throw ModelError("unknown problem class '" + std::string(cls) + "'");
  }
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || value <= 0)
      throw ModelError("bad parameter '" + std::string(tok) + "' in instance '" + std::string(text) + "'");
    inst.params.push_back(value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (inst.params.size() != arity)
    throw ModelError("instance '" + std::string(text) + "' expects " + std::to_string(arity) +
                     " parameter(s)");
  if (inst.extended && !inst.supports_extended())
    throw ModelError("extended variant exists only for queens and golfers");
  if (inst.cls == ProblemClass::Bibd) bibd_params(inst.params[0], inst.params[1], inst.params[2]);
  return inst;
}

BibdParams bibd_params(int v, int k, int lambda) {
  if (k < 2 || v <= k || lambda < 1)
    throw ModelError("BIBD needs v > k >= 2 and lambda >= 1");
  const std::int64_t pairs = static_cast<std::int64_t>(lambda) * v * (v - 1);
  const std::int64_t block_pairs = static_cast<std::int64_t>(k) * (k - 1);
  const std::int64_t reps = static_cast<std::int64_t>(lambda) * (v - 1);
  if (pairs % block_pairs != 0 || reps % (k - 1) != 0) {
    throw ModelError("BIBD(" + std::to_string(v) + "," + std::to_string(k) + "," +
                     std::to_string(lambda) + "): b or r is not integral");
  }
  return {static_cast<int>(pairs / block_pairs), static_cast<int>(reps / (k - 1))};
}

namespace {

void pad(Model& model, std::size_t aux_count, bool integer_only) {
  for (std::size_t i = 0; i < aux_count * kExtendedPadding; ++i) {
    if (integer_only) {
      model.new_int_var(0, 1);
    } else {
      model.new_boolean();
    }
  }
}

void build_queens(Model& model, const Instance& inst) {
  const int n = inst.params[0];
  if (n < 2) throw ModelError("queens needs n >= 2");
  std::vector<VarId> rows;
  for (int i = 0; i < n; ++i) rows.push_back(model.new_int_var(0, n - 1));
  std::size_t aux = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const VarId d = model.new_int_var(-(n - 1), n - 1);
      post_linear(model, {{1, d}, {-1, rows[i]}, {1, rows[j]}}, Rel::Eq, 0, inst.sum_mode);
      post_ne_const(model, d, j - i);
      post_ne_const(model, d, -(j - i));
      ++aux;
    }
  }
  post_alldifferent(model, rows);
  model.branch_order = rows;
  // Integer-domain model: padding uses {0..1} integers.
  if (inst.extended) pad(model, aux, true);
}

void build_golomb(Model& model, const Instance& inst) {
  const int m = inst.params[0];
  if (m < 2) throw ModelError("golomb needs m >= 2");
  const int len = m * m;
  std::vector<VarId> ticks;
  for (int i = 0; i < m; ++i) ticks.push_back(model.new_int_var(0, len));
  std::vector<VarId> diffs;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const VarId d = model.new_int_var(0, len);
      post_linear(model, {{1, d}, {-1, ticks[j]}, {1, ticks[i]}}, Rel::Eq, 0, inst.sum_mode);
      diffs.push_back(d);
    }
  }
  post_eq_const(model, ticks[0], 0);
  for (int i = 0; i + 1 < m; ++i) post_le(model, ticks[i], ticks[i + 1], true);
  if (diffs.size() >= 2) post_alldifferent(model, diffs);
  model.branch_order = ticks;
  model.objective = ticks.back();
}

void build_magic(Model& model, const Instance& inst) {
  const int n = inst.params[0];
  if (n < 2) throw ModelError("magic needs n >= 2");
  const std::int64_t sum = static_cast<std::int64_t>(n) * (n * n + 1) / 2;
  std::vector<VarId> cells;
  for (int i = 0; i < n * n; ++i) cells.push_back(model.new_int_var(1, n * n));
  const auto at = [&](int r, int c) { return cells[static_cast<std::size_t>(r * n + c)]; };
  post_alldifferent(model, cells);
  for (int r = 0; r < n; ++r) {
    std::vector<LinearTerm> row;
    for (int c = 0; c < n; ++c) row.push_back({1, at(r, c)});
    post_linear(model, std::move(row), Rel::Eq, sum, inst.sum_mode);
  }
  for (int c = 0; c < n; ++c) {
    std::vector<LinearTerm> col;
    for (int r = 0; r < n; ++r) col.push_back({1, at(r, c)});
    post_linear(model, std::move(col), Rel::Eq, sum, inst.sum_mode);
  }
  std::vector<LinearTerm> diag;
  std::vector<LinearTerm> anti;
  for (int i = 0; i < n; ++i) {
    diag.push_back({1, at(i, i)});
    anti.push_back({1, at(i, n - 1 - i)});
  }
  post_linear(model, std::move(diag), Rel::Eq, sum, inst.sum_mode);
  post_linear(model, std::move(anti), Rel::Eq, sum, inst.sum_mode);
  post_le(model, at(0, 0), at(0, n - 1), false);
  post_le(model, at(0, 0), at(n - 1, 0), false);
  post_le(model, at(0, 0), at(n - 1, n - 1), false);
  post_le(model, at(0, n - 1), at(n - 1, 0), false);
  model.branch_order = cells;
}

void build_golfers(Model& model, const Instance& inst) {
  const int weeks = inst.params[0];
  const int groups = inst.params[1];
  const int size = inst.params[2];
  const int players = groups * size;
  // x[w][g][i]
  std::vector<VarId> x;
  for (int i = 0; i < weeks * groups * players; ++i) x.push_back(model.new_boolean());
  const auto at = [&](int w, int g, int i) {
    return x[static_cast<std::size_t>((w * groups + g) * players + i)];
  };

  for (int w = 0; w < weeks; ++w) {
    for (int i = 0; i < players; ++i) {
      std::vector<VarId> slots;
      for (int g = 0; g < groups; ++g) slots.push_back(at(w, g, i));
      post_bool_sum(model, std::move(slots), Rel::Eq, 1, inst.bool_mode, inst.sum_mode);
    }
  }
  for (int w = 0; w < weeks; ++w) {
    for (int g = 0; g < groups; ++g) {
      std::vector<VarId> members;
      for (int i = 0; i < players; ++i) members.push_back(at(w, g, i));
      post_bool_sum(model, std::move(members), Rel::Eq, size, inst.bool_mode, inst.sum_mode);
    }
  }

  // meet[pair] collects "i and j together in (w, g)" indicators.
  std::vector<std::vector<VarId>> meet(static_cast<std::size_t>(players * (players - 1) / 2));
  std::size_t aux = 0;
  for (int w = 0; w < weeks; ++w) {
    for (int g = 0; g < groups; ++g) {
      std::size_t pair = 0;
      for (int i = 0; i < players; ++i) {
        for (int j = i + 1; j < players; ++j, ++pair) {
          const VarId both = model.new_boolean();
          post_bool_and(model, both, at(w, g, i), at(w, g, j));
          meet[pair].push_back(both);
          ++aux;
        }
      }
    }
  }
  for (auto& together : meet)
    post_bool_sum(model, std::move(together), Rel::Leq, 1, inst.bool_mode, inst.sum_mode, true);

  const auto week = [&](int w) {
    return std::vector<VarId>(x.begin() + static_cast<std::ptrdiff_t>(w * groups * players),
                              x.begin() + static_cast<std::ptrdiff_t>((w + 1) * groups * players));
  };
  const auto group = [&](int w, int g) {
    const auto first = x.begin() + static_cast<std::ptrdiff_t>((w * groups + g) * players);
    return std::vector<VarId>(first, first + players);
  };
  for (int w = 0; w + 1 < weeks; ++w) post_lex_leq(model, week(w), week(w + 1), false);
  for (int w = 0; w < weeks; ++w)
    for (int g = 0; g < groups; ++g)
      for (int h = g + 1; h < groups; ++h) post_lex_leq(model, group(w, g), group(w, h), false);

  model.branch_order = x;
  if (inst.extended) pad(model, aux, false);
}

void build_bibd(Model& model, const Instance& inst) {
  const int v = inst.params[0];
  const int k = inst.params[1];
  const int lambda = inst.params[2];
  const auto [b, r] = bibd_params(v, k, lambda);
  std::vector<VarId> x;
  for (int i = 0; i < v * b; ++i) x.push_back(model.new_boolean());
  const auto at = [&](int row, int col) { return x[static_cast<std::size_t>(row * b + col)]; };
  const auto row_vec = [&](int row) {
    std::vector<VarId> out;
    for (int c = 0; c < b; ++c) out.push_back(at(row, c));
    return out;
  };
  const auto col_vec = [&](int col) {
    std::vector<VarId> out;
    for (int i = 0; i < v; ++i) out.push_back(at(i, col));
    return out;
  };

  for (int i = 0; i < v; ++i) post_bool_sum(model, row_vec(i), Rel::Eq, r, inst.bool_mode, inst.sum_mode);
  for (int c = 0; c < b; ++c) post_bool_sum(model, col_vec(c), Rel::Eq, k, inst.bool_mode, inst.sum_mode);
  for (int i = 0; i < v; ++i) {
    for (int j = i + 1; j < v; ++j) {
      std::vector<VarId> products;
      for (int c = 0; c < b; ++c) {
        const VarId both = model.new_boolean();
        post_bool_and(model, both, at(i, c), at(j, c));
        products.push_back(both);
      }
      post_bool_sum(model, std::move(products), Rel::Eq, lambda, inst.bool_mode, inst.sum_mode);
    }
  }
  // Rows and columns in non-increasing lex order.
  for (int i = 0; i + 1 < v; ++i) post_lex_leq(model, row_vec(i + 1), row_vec(i), false);
  for (int c = 0; c + 1 < b; ++c) post_lex_leq(model, col_vec(c + 1), col_vec(c), false);
  model.branch_order = x;
}

}  // namespace

Model build(const Instance& inst) {
  const auto start = std::chrono::steady_clock::now();
  if (inst.extended && !inst.supports_extended())
    throw ModelError("extended variant exists only for queens and golfers");
  const BoolMode bool_mode = inst.uses_booleans() ? inst.bool_mode : BoolMode::IntZeroOne;
  Model model(inst.sum_mode, bool_mode);
  switch (inst.cls) {
    case ProblemClass::Queens:
      build_queens(model, inst);
      break;
    case ProblemClass::Golomb:
      build_golomb(model, inst);
      break;
    case ProblemClass::Magic:
      build_magic(model, inst);
      break;
    case ProblemClass::Golfers:
      build_golfers(model, inst);
      break;
    case ProblemClass::Bibd:
      build_bibd(model, inst);
      break;
  }
  model.build_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return model;
}

ModelCounts counts(const Instance& instance) {
  Instance native = instance;
  native.sum_mode = SumMode::NativeEquals;
  Instance decomposed = instance;
  decomposed.sum_mode = SumMode::Decomposed;
  const Model a = build(native);
  const Model b = build(decomposed);
  return {a.var_count(), a.constraints, b.constraints};
}

std::size_t decision_count(const Instance& inst) {
  const auto& p = inst.params;
  switch (inst.cls) {
    case ProblemClass::Queens:
    case ProblemClass::Golomb:
      return static_cast<std::size_t>(p[0]);
    case ProblemClass::Magic:
      return static_cast<std::size_t>(p[0] * p[0]);
    case ProblemClass::Golfers:
      return static_cast<std::size_t>(p[0] * p[1] * p[1] * p[2]);
    case ProblemClass::Bibd:
      return static_cast<std::size_t>(p[0] * bibd_params(p[0], p[1], p[2]).b);
  }
  return 0;
}

namespace {

Verdict violation(std::string what) { return {false, std::move(what)}; }

Verdict check_queens(int n, std::span<const std::int64_t> q) {
  for (int i = 0; i < n; ++i) {
    if (q[i] < 0 || q[i] >= n) return violation("row " + std::to_string(i) + " out of range");
    for (int j = i + 1; j < n; ++j) {
      if (q[i] == q[j]) return violation("rows " + std::to_string(i) + "," + std::to_string(j) + " share a column");
      if (std::abs(q[i] - q[j]) == j - i)
        return violation("rows " + std::to_string(i) + "," + std::to_string(j) + " share a diagonal");
    }
  }
  return {};
}

Verdict check_golomb(int m, std::span<const std::int64_t> ticks) {
  if (ticks[0] != 0) return violation("first mark is not 0");
  for (int i = 0; i + 1 < m; ++i)
    if (ticks[i] >= ticks[i + 1]) return violation("marks are not increasing");
  std::set<std::int64_t> seen;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (!seen.insert(ticks[j] - ticks[i]).second)
        return violation("difference " + std::to_string(ticks[j] - ticks[i]) + " repeats");
  return {};
}

Verdict check_magic(int n, std::span<const std::int64_t> cells) {
  const std::int64_t sum = static_cast<std::int64_t>(n) * (n * n + 1) / 2;
  std::vector<std::int64_t> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n * n; ++i)
    if (sorted[i] != i + 1) return violation("cells are not a permutation of 1..n^2");
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  for (int i = 0; i < n; ++i) {
    std::int64_t row = 0;
    std::int64_t col = 0;
    for (int j = 0; j < n; ++j) {
      row += cells[i * n + j];
      col += cells[j * n + i];
    }
    if (row != sum) return violation("row " + std::to_string(i) + " sums to " + std::to_string(row));
    if (col != sum) return violation("column " + std::to_string(i) + " sums to " + std::to_string(col));
    d1 += cells[i * n + i];
    d2 += cells[i * n + (n - 1 - i)];
  }
  if (d1 != sum || d2 != sum) return violation("a diagonal misses the magic sum");
  return {};
}

Verdict check_golfers(int weeks, int groups, int size, std::span<const std::int64_t> x) {
  const int players = groups * size;
  const auto at = [&](int w, int g, int i) { return x[static_cast<std::size_t>((w * groups + g) * players + i)]; };
  for (auto v : x)
    if (v != 0 && v != 1) return violation("entry outside {0,1}");
  std::vector<int> group_of(static_cast<std::size_t>(weeks * players), -1);
  for (int w = 0; w < weeks; ++w) {
    for (int i = 0; i < players; ++i) {
      int count = 0;
      for (int g = 0; g < groups; ++g) {
        if (at(w, g, i) == 1) {
          ++count;
          group_of[static_cast<std::size_t>(w * players + i)] = g;
        }
      }
      if (count != 1)
        return violation("player " + std::to_string(i) + " plays " + std::to_string(count) +
                         " times in week " + std::to_string(w));
    }
    for (int g = 0; g < groups; ++g) {
      int members = 0;
      for (int i = 0; i < players; ++i) members += static_cast<int>(at(w, g, i));
      if (members != size) return violation("group " + std::to_string(g) + " has wrong size");
    }
  }
  for (int i = 0; i < players; ++i) {
    for (int j = i + 1; j < players; ++j) {
      int meetings = 0;
      for (int w = 0; w < weeks; ++w)
        meetings += group_of[static_cast<std::size_t>(w * players + i)] ==
                    group_of[static_cast<std::size_t>(w * players + j)];
      if (meetings > 1)
        return violation("players " + std::to_string(i) + "," + std::to_string(j) + " meet " +
                         std::to_string(meetings) + " times");
    }
  }
  return {};
}

Verdict check_bibd(int v, int k, int lambda, std::span<const std::int64_t> x) {
  const auto [b, r] = bibd_params(v, k, lambda);
  const auto at = [&](int i, int c) { return x[static_cast<std::size_t>(i * b + c)]; };
  for (auto e : x)
    if (e != 0 && e != 1) return violation("entry outside {0,1}");
  for (int i = 0; i < v; ++i) {
    std::int64_t s = 0;
    for (int c = 0; c < b; ++c) s += at(i, c);
    if (s != r) return violation("object " + std::to_string(i) + " occurs in " + std::to_string(s) + " blocks");
  }
  for (int c = 0; c < b; ++c) {
    std::int64_t s = 0;
    for (int i = 0; i < v; ++i) s += at(i, c);
    if (s != k) return violation("block " + std::to_string(c) + " has " + std::to_string(s) + " objects");
  }
  for (int i = 0; i < v; ++i) {
    for (int j = i + 1; j < v; ++j) {
      std::int64_t dot = 0;
      for (int c = 0; c < b; ++c) dot += at(i, c) * at(j, c);
      if (dot != lambda)
        return violation("objects " + std::to_string(i) + "," + std::to_string(j) + " co-occur " +
                         std::to_string(dot) + " times");
    }
  }
  return {};
}

}  // namespace

Verdict check_solution(const Instance& inst, std::span<const std::int64_t> a) {
  const std::size_t expected = decision_count(inst);
  if (a.size() != expected) {
    return violation("assignment has " + std::to_string(a.size()) + " values, expected " +
                     std::to_string(expected));
  }
  const auto& p = inst.params;
  switch (inst.cls) {
    case ProblemClass::Queens:
      return check_queens(p[0], a);
    case ProblemClass::Golomb:
      return check_golomb(p[0], a);
    case ProblemClass::Magic:
      return check_magic(p[0], a);
    case ProblemClass::Golfers:
      return check_golfers(p[0], p[1], p[2], a);
    case ProblemClass::Bibd:
      return check_bibd(p[0], p[1], p[2], a);
  }
  return violation("unknown problem class");
}

std::vector<Instance> table2_instances() {
  std::vector<Instance> out;
  for (int n = 20; n <= 29; ++n) out.push_back(parse_instance("queens:" + std::to_string(n)));
  for (int m = 9; m <= 13; ++m) out.push_back(parse_instance("golomb:" + std::to_string(m)));
  for (int n = 4; n <= 6; ++n) out.push_back(parse_instance("magic:" + std::to_string(n)));
  for (int m = 4; m <= 10; ++m) out.push_back(parse_instance("golfers:2," + std::to_string(m) + ",4"));
  for (int l = 10; l <= 70; l += 10) out.push_back(parse_instance("bibd:7,3," + std::to_string(l)));
  return out;
}

std::vector<Instance> table4_instances() {
  std::vector<Instance> out;
  for (const Instance& inst : table2_instances()) {
    if (!inst.supports_extended()) continue;
    Instance ext = inst;
    ext.extended = true;
    out.push_back(ext);
  }
  return out;
}

}  // namespace fdlab

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
// Builders for the benchmark problem classes and independent checkers.
//
// Assignments (and Solution::values) list decision variables in branch order:
//   queens:n          n columns, one per row
//   golomb:m          m tick positions
//   magic:n           n*n cells, row-major
//   golfers:p,m,n     p*m*(n*m) 0/1 entries indexed [week][group][player]
//   bibd:v,k,lambda   v*b 0/1 entries, row-major

#ifndef FDLAB_MODELS_HPP_
#define FDLAB_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdlab/constraints.hpp"

namespace fdlab {

enum class ProblemClass : std::uint8_t { Queens, Golomb, Magic, Golfers, Bibd };

std::string_view to_string(ProblemClass cls);

// Unconstrained 0/1 variables added per auxiliary variable by extended models.
inline constexpr int kExtendedPadding = 9;

struct Instance {
  ProblemClass cls = ProblemClass::Queens;
  std::vector<int> params;
  bool extended = false;
  BoolMode bool_mode = BoolMode::NativeBool;
  SumMode sum_mode = SumMode::NativeEquals;

  std::string class_name() const { return std::string(to_string(cls)); }
  std::string params_string() const;  // "2,4,4"
  std::string name() const;           // "golfers:2,4,4+ext"
  bool is_optimization() const { return cls == ProblemClass::Golomb; }
  // Whether bool_mode changes the built model.
  bool uses_booleans() const { return cls == ProblemClass::Golfers || cls == ProblemClass::Bibd; }
  bool supports_extended() const { return cls == ProblemClass::Queens || cls == ProblemClass::Golfers; }
};

// "queens:20", "golomb:9", "magic:4", "golfers:2,4,4", "bibd:7,3,10", each
// optionally followed by "+ext".
Instance parse_instance(std::string_view text);

struct BibdParams {
  int b;
  int r;
  friend bool operator==(const BibdParams&, const BibdParams&) = default;
};

BibdParams bibd_params(int v, int k, int lambda);

Model build(const Instance& instance);

struct ModelCounts {
  std::size_t variables = 0;
  std::size_t constraints_native = 0;
  std::size_t constraints_decomposed = 0;
  friend bool operator==(const ModelCounts&, const ModelCounts&) = default;
};

// Builds the instance under both sum modes and counts what was posted.
ModelCounts counts(const Instance& instance);

struct Verdict {
  bool valid = true;
  std::string violation;
  explicit operator bool() const { return valid; }
};

// Checks the defining properties of the problem directly; symmetry-breaking
// constraints are not part of the check.
Verdict check_solution(const Instance& instance, std::span<const std::int64_t> assignment);

// Number of decision values check_solution expects.
std::size_t decision_count(const Instance& instance);

// The instance lists of the published benchmark tables.
std::vector<Instance> table2_instances();
std::vector<Instance> table4_instances();

}  // namespace fdlab

#endif  // FDLAB_MODELS_HPP_

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
// Experiment harness: repeated runs, median/CoV aggregation, CSV/JSON output
// and ratio tables.

#ifndef FDLAB_BENCH_HPP_
#define FDLAB_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdlab/models.hpp"
#include "fdlab/search.hpp"

namespace fdlab {

struct RunConfig {
  Instance instance;
  RestoreMode restore = RestoreMode::trail();
  QueuePolicy queue = QueuePolicy::Priority;
  BnBMode bnb = BnBMode::PostConstraint;
  SolveMode mode = SolveMode::First;
  int runs = 5;
};

struct RunTiming {
  double setup_ms = 0.0;
  double solve_ms = 0.0;
  friend bool operator==(const RunTiming&, const RunTiming&) = default;
};

struct RunRecord {
  RunConfig config;
  std::vector<RunTiming> per_run;
  // Trajectory and restoration counters; identical across runs.
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t solutions = 0;
  RestoreStats restore;
  std::optional<std::int64_t> objective;
  double setup_ms_median = 0.0;
  double solve_ms_median = 0.0;
  double cov = 0.0;  // of solve_ms
  double nps = 0.0;  // nodes / median solve seconds
  std::string error;

  bool ok() const { return error.empty(); }
  bool infeasible() const;
};

bool operator==(const RunRecord& a, const RunRecord& b);

double median(std::span<const double> values);
// Sample standard deviation over the mean; 0 for fewer than two values.
double coefficient_of_variation(std::span<const double> values);

RunRecord run_config(const RunConfig& config);

// Executes every config `runs` times. jobs > 1 runs configs on worker
// threads; record order always follows `configs`.
std::vector<RunRecord> run_matrix(const std::vector<RunConfig>& configs, unsigned jobs = 1);

using RecordSelector = std::function<bool(const RunRecord&)>;

struct RatioRow {
  std::string instance;
  std::uint64_t backtracks = 0;
  double ratio = 0.0;
};

struct RatioReport {
  std::string label;
  std::vector<RatioRow> rows;
  std::vector<std::string> warnings;
};

// Median solve time of the numerator record over the denominator record,
// paired per instance (class and parameters; the extended flag is ignored so
// extended/normal pairs line up).
RatioReport ratio_report(const std::vector<RunRecord>& records, const RecordSelector& numerator,
                         const RecordSelector& denominator, std::string label = {});

enum class OutputFormat : std::uint8_t { Csv, Json };
OutputFormat parse_output_format(std::string_view text);

extern const std::vector<std::string_view> kCsvColumns;

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_json(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_json(std::istream& in);
// Writes to `path`, or stdout when path is empty or "-".
void emit(const std::vector<RunRecord>& records, OutputFormat format, const std::string& path);

void write_ratio_table(std::ostream& out, const RatioReport& report);

struct RatioSpec {
  std::string label;
  RecordSelector numerator;
  RecordSelector denominator;
};

struct Sweep {
  std::vector<RunConfig> configs;
  std::vector<RatioSpec> ratios;
};

// Preset matrices: "boolint", "copy", "trail", "manyvars". An empty
// instance list selects the suite's defaults.
Sweep make_sweep(std::string_view suite, const std::vector<Instance>& instances, int runs);
std::vector<std::string_view> sweep_suites();

struct ReferenceRow {
  std::string problem;
  std::string instance;
  std::vector<std::int64_t> values;
};

// Minimal CSV reader for the shipped reference tables (header skipped).
std::vector<ReferenceRow> read_reference_table(std::istream& in);

}  // namespace fdlab

#endif  // FDLAB_BENCH_HPP_

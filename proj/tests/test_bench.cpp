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

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fdlab/bench.hpp"

using namespace fdlab;

namespace {

double direct_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double direct_cov(const std::vector<double>& v) {
  const double mu = direct_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / mu;
}

double direct_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

RunRecord fake(const char* instance, RestoreMode restore, double solve_ms, std::uint64_t backtracks) {
  RunRecord r;
  r.config.instance = parse_instance(instance);
  r.config.restore = restore;
  r.solve_ms_median = solve_ms;
  r.backtracks = backtracks;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("median examples") {
  const std::vector<double> five{10, 11, 12, 13, 100};
  CHECK(median(five) == 12.0);
  const std::vector<double> four{4, 1, 3, 2};
  CHECK(median(four) == 2.5);
  CHECK(median(std::vector<double>{}) == 0.0);
  CHECK(coefficient_of_variation(std::vector<double>{5.0}) == 0.0);
  CHECK(coefficient_of_variation(std::vector<double>{3, 3, 3}) == 0.0);
}

TEST_CASE("median and cov agree with direct formulas on random samples") {
  std::mt19937_64 rng(1234);
  std::lognormal_distribution<double> timing(2.0, 0.6);
  std::uniform_int_distribution<int> size(2, 40);
  double worst_median = 0.0;
  double worst_cov = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(size(rng));
    for (double& x : v) x = timing(rng);
    worst_median = std::max(worst_median, rel_err(median(v), direct_median(v)));
    worst_cov = std::max(worst_cov, rel_err(coefficient_of_variation(v), direct_cov(v)));
  }
  CHECK(worst_median <= 1e-12);
  CHECK(worst_cov <= 1e-12);
}

TEST_CASE("run_config repeats and aggregates") {
  RunConfig c;
  c.instance = parse_instance("queens:8");
  c.mode = SolveMode::All;
  c.runs = 3;
  const RunRecord r = run_config(c);
  REQUIRE(r.ok());
  CHECK(r.per_run.size() == 3);
  CHECK(r.nodes == 830);
  CHECK(r.solutions == 92);
  std::vector<double> solve;
  for (const auto& t : r.per_run) solve.push_back(t.solve_ms);
  CHECK(r.solve_ms_median == median(solve));
  CHECK(r.nps == doctest::Approx(r.nodes / (r.solve_ms_median / 1000.0)));

  RunConfig bad = c;
  bad.runs = 0;
  CHECK_FALSE(run_config(bad).ok());
}

TEST_CASE("run_matrix keeps trajectories identical across restore modes") {
  std::vector<RunConfig> configs;
  for (RestoreMode m : {RestoreMode::trail(), RestoreMode::copy(), RestoreMode::recompute(8)}) {
    RunConfig c;
    c.instance = parse_instance("queens:8");
    c.restore = m;
    c.runs = 2;
    configs.push_back(c);
  }
  RunConfig ints;
  ints.instance = parse_instance("golfers:2,4,4");
  ints.runs = 2;
  RunConfig bools = ints;
  ints.instance.bool_mode = BoolMode::IntZeroOne;
  configs.push_back(bools);
  configs.push_back(ints);

  const auto serial = run_matrix(configs, 1);
  const auto parallel = run_matrix(configs, 3);
  REQUIRE(serial.size() == 5);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    REQUIRE(serial[i].ok());
    CHECK(serial[i].nodes == parallel[i].nodes);
    CHECK(serial[i].config.instance.name() == parallel[i].config.instance.name());
  }
  CHECK(serial[0].nodes == serial[1].nodes);
  CHECK(serial[1].nodes == serial[2].nodes);
  CHECK(serial[3].backtracks == serial[4].backtracks);
}

TEST_CASE("failed builds become error records") {
  RunConfig c;
  c.instance.cls = ProblemClass::Bibd;
  c.instance.params = {8, 3, 1};
  c.runs = 1;
  RunConfig good;
  good.instance = parse_instance("queens:6");
  good.runs = 1;
  const auto records = run_matrix({c, good});
  CHECK_FALSE(records[0].ok());
  CHECK(records[1].ok());

  std::ostringstream csv;
  write_csv(csv, records);
  const auto rows = lines(csv.str());
  REQUIRE(rows.size() == 3);
}

TEST_CASE("ratio reports") {
  std::vector<RunRecord> records{
      fake("queens:8", RestoreMode::trail(), 50.0, 10), fake("queens:8", RestoreMode::copy(), 50.0, 10),
      fake("golfers:2,4,4", RestoreMode::trail(), 200.0, 91), fake("golfers:2,4,4+ext", RestoreMode::copy(), 100.0, 91),
      fake("magic:4", RestoreMode::trail(), 1.0, 75)};
  const auto is_trail = [](const RunRecord& r) { return r.config.restore.kind == RestoreKind::Trail; };
  const auto is_copy = [](const RunRecord& r) { return r.config.restore.kind == RestoreKind::Copy; };
  const RatioReport report = ratio_report(records, is_trail, is_copy, "trail / copy");
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].instance == "queens:8");
  CHECK(report.rows[0].ratio == 1.0);
  CHECK(report.rows[1].ratio == 2.0);
  CHECK(report.rows[1].backtracks == 91);
  CHECK(report.warnings.size() == 1);  // magic:4 has no copy partner

  std::ostringstream out;
  write_ratio_table(out, report);
  CHECK(out.str().find("trail / copy") != std::string::npos);
}

TEST_CASE("csv layout") {
  CHECK(kCsvColumns.size() == 22);
  RunConfig c;
  c.instance = parse_instance("golfers:2,3,3");
  c.runs = 1;
  const auto records = run_matrix({c});
  std::ostringstream csv;
  write_csv(csv, records);
  const auto rows = lines(csv.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] ==
        "model,instance,extended,bool_mode,sum_mode,restore,rec_dist,adapt_dist,queue,bnb,runs,nodes,backtracks,"
        "solutions,setup_ms_median,solve_ms_median,cov,nps,bytes_copied,trail_entries,snapshots,recomputations");
  CHECK(rows[1].rfind("golfers,\"2,3,3\",false,native,native,trail,", 0) == 0);
}

TEST_CASE("json round trip") {
  std::vector<RunConfig> configs(2);
  configs[0].instance = parse_instance("golomb:5");
  configs[0].bnb = BnBMode::TightenBound;
  configs[0].restore = RestoreMode::recompute(16, 3);
  configs[0].runs = 2;
  configs[1].instance = parse_instance("queens:6+ext");
  configs[1].mode = SolveMode::All;
  configs[1].queue = QueuePolicy::Fifo;
  configs[1].runs = 1;
  const auto records = run_matrix(configs);
  std::stringstream buf;
  write_json(buf, records);
  const auto back = read_json(buf);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) CHECK(back[i] == records[i]);
  CHECK(back[0].objective == 11);
}

TEST_CASE("output format and sweeps") {
  CHECK(parse_output_format("csv") == OutputFormat::Csv);
  CHECK(parse_output_format("json") == OutputFormat::Json);
  CHECK_THROWS(parse_output_format("xml"));
  CHECK_THROWS_AS(make_sweep("gc", {}, 1), ModelError);
  for (auto suite : sweep_suites()) {
    const Sweep s = make_sweep(suite, {}, 1);
    CHECK_FALSE(s.configs.empty());
    CHECK_FALSE(s.ratios.empty());
  }
  const Sweep trail = make_sweep("trail", {parse_instance("queens:6")}, 2);
  CHECK(trail.configs.size() == 2);
  const Sweep many = make_sweep("manyvars", {parse_instance("queens:6"), parse_instance("magic:3")}, 2);
  CHECK(many.configs.size() == 6);  // magic has no extended model
}

TEST_CASE("reference table reader") {
  std::istringstream in(
      "# comment\nproblem,instance,backtracks\nqueens,20,15\n\"golfers\",\"2,4,4\",\nbibd,\"7,3,10\",-\n");
  std::vector<ReferenceRow> rows;
  CHECK_THROWS(rows = read_reference_table(in));
  std::istringstream ok("problem,instance,backtracks\nqueens,20,15\ngolfers,\"2,4,4\",\n");
  rows = read_reference_table(ok);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].values == std::vector<std::int64_t>{15});
  CHECK(rows[1].instance == "2,4,4");
  CHECK(rows[1].values == std::vector<std::int64_t>{-1});
}

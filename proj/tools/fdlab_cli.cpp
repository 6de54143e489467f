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
// fdlab: benchmark harness for the solver.
//
//   fdlab run --model queens:20 --restore copy-recompute --rec-dist 8 ...
//   fdlab table2
//   fdlab table3
//   fdlab sweep --suite trail
//
// Exit codes: 0 ok, 1 infeasible (or table mismatch), 2 configuration error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdlab/bench.hpp"
#include "fdlab/models.hpp"

#ifndef FDLAB_DATA_DIR
#define FDLAB_DATA_DIR "data"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitConfig = 2;

struct RunArgs {
  std::string model;
  std::string restore = "trail";
  std::uint32_t rec_dist = 8;
  std::uint32_t adapt_dist = 2;
  std::string queue = "priority";
  std::string sum_eq = "native";
  std::string bool_vars = "native";
  std::string bnb = "post";
  bool ext = false;
  bool all = false;
  int runs = 5;
  unsigned jobs = 1;
  std::string out;
  std::string format = "csv";
};

struct SweepArgs {
  std::string suite;
  std::vector<std::string> instances;
  int runs = 5;
  unsigned jobs = 1;
  std::string out;
  std::string format = "csv";
};

fdlab::RestoreMode restore_mode(const RunArgs& a) {
  switch (fdlab::parse_restore_kind(a.restore)) {
    case fdlab::RestoreKind::Trail:
      return fdlab::RestoreMode::trail();
    case fdlab::RestoreKind::Copy:
      return fdlab::RestoreMode::copy();
    case fdlab::RestoreKind::CopyRecompute:
      if (a.rec_dist == 0 || a.adapt_dist == 0) throw fdlab::ModelError("distances must be positive");
      return fdlab::RestoreMode::recompute(a.rec_dist, a.adapt_dist);
  }
  return fdlab::RestoreMode::trail();
}

int cmd_run(const RunArgs& a) {
  fdlab::RunConfig config;
  config.instance = fdlab::parse_instance(a.model);
  if (a.ext) {
    if (!config.instance.supports_extended())
      throw fdlab::ModelError("--ext applies only to queens and golfers");
    config.instance.extended = true;
  }
  config.instance.sum_mode = fdlab::parse_sum_mode(a.sum_eq);
  config.instance.bool_mode = fdlab::parse_bool_mode(a.bool_vars);
  config.restore = restore_mode(a);
  config.queue = fdlab::parse_queue_policy(a.queue);
  config.bnb = fdlab::parse_bnb_mode(a.bnb);
  config.mode = a.all ? fdlab::SolveMode::All : fdlab::SolveMode::First;
  config.runs = a.runs;
  if (a.runs < 1) throw fdlab::ModelError("--runs must be >= 1");

  const auto records = fdlab::run_matrix({config}, a.jobs);
  const auto& rec = records.front();
  if (!rec.ok()) {
    std::cerr << "error: " << rec.error << '\n';
    return kExitConfig;
  }
  fdlab::emit(records, fdlab::parse_output_format(a.format), a.out);
  if (rec.infeasible()) {
    std::cerr << config.instance.name() << ": infeasible\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

std::string data_path(const std::string& dir, const char* file) { return dir + "/" + file; }

std::vector<fdlab::ReferenceRow> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fdlab::ModelError("cannot read reference table '" + path + "'");
  return fdlab::read_reference_table(in);
}

int cmd_table2(const std::string& data_dir) {
  std::map<std::string, fdlab::ModelCounts> published;
  for (const auto& row : load_table(data_path(data_dir, "table2.csv"))) {
    published[row.problem + ":" + row.instance] = {static_cast<std::size_t>(row.values.at(0)),
                                                   static_cast<std::size_t>(row.values.at(1)),
                                                   static_cast<std::size_t>(row.values.at(2))};
  }
  std::map<std::string, std::size_t> published_ext;
  for (const auto& row : load_table(data_path(data_dir, "table4.csv")))
    published_ext[row.problem + ":" + row.instance] = static_cast<std::size_t>(row.values.at(1));

  int mismatches = 0;
  std::cout << "problem,instance,variables,constraints_native,constraints_decomposed,extended_variables,matches\n";
  for (const auto& inst : fdlab::table2_instances()) {
    const std::string key = inst.class_name() + ":" + inst.params_string();
    const fdlab::ModelCounts c = fdlab::counts(inst);
    bool ok = published.count(key) && published[key] == c;
    std::string ext_field;
    if (inst.supports_extended()) {
      fdlab::Instance ext = inst;
      ext.extended = true;
      const std::size_t ext_vars = fdlab::build(ext).var_count();
      ext_field = std::to_string(ext_vars);
      ok = ok && published_ext.count(key) && published_ext[key] == ext_vars;
    }
    if (!ok) ++mismatches;
    std::cout << inst.class_name() << ",\"" << inst.params_string() << "\"," << c.variables << ','
              << c.constraints_native << ',' << c.constraints_decomposed << ',' << ext_field << ','
              << (ok ? "yes" : "NO") << '\n';
  }
  if (mismatches) std::cerr << mismatches << " instance(s) differ from the published counts\n";
  return mismatches ? kExitInfeasible : kExitOk;
}

int cmd_table3(const std::string& data_dir) {
  std::cout << "# reference data only: backtrack counts of another solver, not asserted\n";
  std::cout << "problem,instance,backtracks\n";
  for (const auto& row : load_table(data_path(data_dir, "table3.csv")))
    std::cout << row.problem << ",\"" << row.instance << "\"," << row.values.at(0) << '\n';
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a) {
  std::vector<fdlab::Instance> instances;
  for (const auto& name : a.instances) instances.push_back(fdlab::parse_instance(name));
  if (a.runs < 1) throw fdlab::ModelError("--runs must be >= 1");
  const fdlab::Sweep sweep = fdlab::make_sweep(a.suite, instances, a.runs);
  const auto records = fdlab::run_matrix(sweep.configs, a.jobs);
  for (const auto& r : records)
    if (!r.ok()) std::cerr << "warning: " << r.config.instance.name() << ": " << r.error << '\n';
  fdlab::emit(records, fdlab::parse_output_format(a.format), a.out);
  // Ratio tables go to stderr when records occupy stdout.
  std::ostream& table_out = (a.out.empty() || a.out == "-") ? std::cerr : std::cout;
  for (const auto& ratio : sweep.ratios)
    fdlab::write_ratio_table(table_out, fdlab::ratio_report(records, ratio.numerator, ratio.denominator, ratio.label));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fdlab: finite-domain solver design experiments"};
  app.require_subcommand(1);
  std::string data_dir = FDLAB_DATA_DIR;
  app.add_option("--data-dir", data_dir, "Directory holding the reference tables");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one configuration repeatedly and report statistics");
  run_cmd->add_option("--model", run.model, "Instance, e.g. queens:20, golfers:2,4,4+ext")->required();
  run_cmd->add_option("--restore", run.restore, "trail|copy|copy-recompute")
      ->check(CLI::IsMember({"trail", "copy", "copy-recompute"}));
  run_cmd->add_option("--rec-dist", run.rec_dist, "Recomputation distance");
  run_cmd->add_option("--adapt-dist", run.adapt_dist, "Adaptive recomputation distance");
  run_cmd->add_option("--queue", run.queue, "fifo|priority|reversed")
      ->check(CLI::IsMember({"fifo", "priority", "reversed"}));
  run_cmd->add_option("--sum-eq", run.sum_eq, "native|decomposed")->check(CLI::IsMember({"native", "decomposed"}));
  run_cmd->add_option("--bool-vars", run.bool_vars, "native|int")->check(CLI::IsMember({"native", "int"}));
  run_cmd->add_option("--bnb", run.bnb, "post|tighten")->check(CLI::IsMember({"post", "tighten"}));
  run_cmd->add_flag("--ext", run.ext, "Use the extended (padded) model");
  run_cmd->add_flag("--all", run.all, "Enumerate all solutions instead of stopping at the first");
  run_cmd->add_option("--runs", run.runs, "Repetitions (median is reported)");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads");
  run_cmd->add_option("--out", run.out, "Output file (default stdout)");
  run_cmd->add_option("--format", run.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  app.add_subcommand("table2", "Compare built model sizes with the published counts");
  app.add_subcommand("table3", "Print the reference backtrack counts (not asserted)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a preset experiment matrix and print ratio tables");
  sweep_cmd->add_option("--suite", sweep.suite, "boolint|copy|trail|manyvars")
      ->required()
      ->check(CLI::IsMember({"boolint", "copy", "trail", "manyvars"}));
  sweep_cmd->add_option("--instances", sweep.instances, "Instances to run instead of the suite defaults");
  sweep_cmd->add_option("--runs", sweep.runs, "Repetitions per configuration");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads (1 keeps timings sequential)");
  sweep_cmd->add_option("--out", sweep.out, "Output file (default stdout)");
  sweep_cmd->add_option("--format", sweep.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (app.got_subcommand("table2")) return cmd_table2(data_dir);
    if (app.got_subcommand("table3")) return cmd_table3(data_dir);
    if (*sweep_cmd) return cmd_sweep(sweep);
  } catch (const fdlab::ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

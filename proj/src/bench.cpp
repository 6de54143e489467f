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

#include "fdlab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace fdlab {

using nlohmann::json;

bool RunRecord::infeasible() const {
  return ok() && solutions == 0;
}

bool operator==(const RunRecord& a, const RunRecord& b) {
  const auto& ca = a.config;
  const auto& cb = b.config;
  return ca.instance.name() == cb.instance.name() && ca.instance.bool_mode == cb.instance.bool_mode &&
         ca.instance.sum_mode == cb.instance.sum_mode && ca.restore.kind == cb.restore.kind &&
         ca.restore.distance == cb.restore.distance &&
         ca.restore.adaptive_distance == cb.restore.adaptive_distance && ca.queue == cb.queue &&
         ca.bnb == cb.bnb && ca.mode == cb.mode && ca.runs == cb.runs && a.per_run == b.per_run &&
         a.nodes == b.nodes && a.backtracks == b.backtracks && a.solutions == b.solutions &&
         a.restore == b.restore && a.objective == b.objective &&
         a.setup_ms_median == b.setup_ms_median && a.solve_ms_median == b.solve_ms_median &&
         a.cov == b.cov && a.nps == b.nps && a.error == b.error;
}

// -- statistics --------------------------------------------------------------

double median(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double coefficient_of_variation(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  // Welford's running mean and sum of squared deviations.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : values) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  if (mean == 0.0) return 0.0;
  return std::sqrt(m2 / static_cast<double>(n - 1)) / mean;
}

// -- running -----------------------------------------------------------------

RunRecord run_config(const RunConfig& config) {
  RunRecord rec;
  rec.config = config;
  if (config.runs < 1) {
    rec.error = "runs must be >= 1";
    return rec;
  }
  try {
    SearchOptions opts;
    opts.mode = config.mode;
    opts.restore = config.restore;
    opts.queue = config.queue;
    opts.bnb = config.bnb;
    opts.keep_solutions = false;
    for (int i = 0; i < config.runs; ++i) {
      Model model = build(config.instance);
      SearchStats stats;
      std::optional<std::int64_t> objective;
      if (config.instance.is_optimization()) {
        const OptimizeResult r = minimize(model, opts);
        stats = r.stats;
        if (r.best) objective = r.best->objective;
      } else {
        stats = solve(model, opts).stats;
      }
      if (i == 0) {
        rec.nodes = stats.nodes;
        rec.backtracks = stats.backtracks;
        rec.solutions = stats.solutions;
        rec.restore = stats.restore;
        rec.objective = objective;
      } else if (stats.nodes != rec.nodes || stats.backtracks != rec.backtracks ||
                 stats.solutions != rec.solutions || objective != rec.objective) {
        throw std::logic_error("search trajectory changed between repetitions");
      }
      rec.per_run.push_back({stats.setup_ms, stats.solve_ms});
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.per_run.clear();
    return rec;
  }
  std::vector<double> setup;
  std::vector<double> solve_times;
  for (const auto& t : rec.per_run) {
    setup.push_back(t.setup_ms);
    solve_times.push_back(t.solve_ms);
  }
  rec.setup_ms_median = median(setup);
  rec.solve_ms_median = median(solve_times);
  rec.cov = coefficient_of_variation(solve_times);
  rec.nps = nodes_per_second(rec.nodes, rec.solve_ms_median);
  return rec;
}

std::vector<RunRecord> run_matrix(const std::vector<RunConfig>& configs, unsigned jobs) {
  std::vector<RunRecord> records(configs.size());
  if (jobs <= 1 || configs.size() <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) records[i] = run_config(configs[i]);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(configs.size()));
  for (unsigned w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) records[i] = run_config(configs[i]);
    });
  }
  for (auto& t : workers) t.join();
  return records;
}

// -- ratios ------------------------------------------------------------------

namespace {

std::string pair_key(const RunRecord& r) {
  return r.config.instance.class_name() + ":" + r.config.instance.params_string();
}

}  // namespace

RatioReport ratio_report(const std::vector<RunRecord>& records, const RecordSelector& numerator,
                         const RecordSelector& denominator, std::string label) {
  RatioReport report;
  report.label = std::move(label);
  std::vector<std::string> order;
  std::map<std::string, const RunRecord*> num;
  std::map<std::string, const RunRecord*> den;
  for (const RunRecord& r : records) {
    if (!r.ok()) continue;
    const std::string key = pair_key(r);
    for (auto [selector, side] : {std::pair{&numerator, &num}, std::pair{&denominator, &den}}) {
      if (!(*selector)(r)) continue;
      if (side->count(key)) {
        report.warnings.push_back("multiple records for " + key + "; keeping the first");
        continue;
      }
      (*side)[key] = &r;
      if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
    }
  }
  for (const std::string& key : order) {
    const auto n = num.find(key);
    const auto d = den.find(key);
    if (n == num.end() || d == den.end()) {
      report.warnings.push_back("no matching pair for " + key + "; omitted");
      continue;
    }
    const double denom = d->second->solve_ms_median;
    const double ratio = denom > 0.0 ? n->second->solve_ms_median / denom : 1.0;
    report.rows.push_back({key, d->second->backtracks, ratio});
  }
  return report;
}

void write_ratio_table(std::ostream& out, const RatioReport& report) {
  if (!report.label.empty()) out << "# " << report.label << '\n';
  out << std::left << std::setw(22) << "instance" << std::right << std::setw(12) << "backtracks"
      << std::setw(10) << "ratio" << '\n';
  for (const auto& row : report.rows) {
    out << std::left << std::setw(22) << row.instance << std::right << std::setw(12) << row.backtracks
        << std::setw(10) << std::fixed << std::setprecision(3) << row.ratio << '\n';
  }
  out.unsetf(std::ios::floatfield);
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
}

// -- output ------------------------------------------------------------------

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ModelError("unknown output format '" + std::string(text) + "'");
}

const std::vector<std::string_view> kCsvColumns = {
    "model",        "instance",        "extended",        "bool_mode",     "sum_mode",
    "restore",      "rec_dist",        "adapt_dist",      "queue",         "bnb",
    "runs",         "nodes",           "backtracks",      "solutions",     "setup_ms_median",
    "solve_ms_median", "cov",          "nps",             "bytes_copied",  "trail_entries",
    "snapshots",    "recomputations"};

namespace {

std::uint32_t rec_dist(const RestoreMode& m) {
  switch (m.kind) {
    case RestoreKind::Trail:
      return 0;
    case RestoreKind::Copy:
      return 1;
    case RestoreKind::CopyRecompute:
      return m.distance;
  }
  return 0;
}

std::uint32_t adapt_dist(const RestoreMode& m) {
  return m.kind == RestoreKind::CopyRecompute ? m.adaptive_distance : 0;
}

std::string bnb_field(const RunConfig& c) {
  return c.instance.is_optimization() ? std::string(to_string(c.bnb)) : "none";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed << v;
  return os.str();
}

json to_json(const RunRecord& r) {
  const auto& c = r.config;
  json j;
  j["model"] = c.instance.class_name();
  j["instance"] = c.instance.params_string();
  j["extended"] = c.instance.extended;
  j["bool_mode"] = std::string(to_string(c.instance.bool_mode));
  j["sum_mode"] = std::string(to_string(c.instance.sum_mode));
  j["restore"] = std::string(to_string(c.restore.kind));
  j["rec_dist"] = rec_dist(c.restore);
  j["adapt_dist"] = adapt_dist(c.restore);
  j["queue"] = std::string(to_string(c.queue));
  j["bnb"] = bnb_field(c);
  j["runs"] = c.runs;
  j["mode"] = c.mode == SolveMode::All ? "all" : "first";
  if (r.ok()) {
    j["nodes"] = r.nodes;
    j["backtracks"] = r.backtracks;
    j["solutions"] = r.solutions;
    j["setup_ms_median"] = r.setup_ms_median;
    j["solve_ms_median"] = r.solve_ms_median;
    j["cov"] = r.cov;
    j["nps"] = r.nps;
    j["bytes_copied"] = r.restore.bytes_copied;
    j["trail_entries"] = r.restore.trail_entries;
    j["snapshots"] = r.restore.snapshots_taken;
    j["recomputations"] = r.restore.recomputations;
    j["replayed_decisions"] = r.restore.replayed_decisions;
    j["objective"] = r.objective ? json(*r.objective) : json(nullptr);
    json runs = json::array();
    for (const auto& t : r.per_run) runs.push_back({{"setup_ms", t.setup_ms}, {"solve_ms", t.solve_ms}});
    j["per_run"] = std::move(runs);
  } else {
    for (std::size_t i = 11; i < kCsvColumns.size(); ++i) j[std::string(kCsvColumns[i])] = nullptr;
    j["error"] = r.error;
  }
  return j;
}

RunRecord from_json(const json& j) {
  RunRecord r;
  auto& c = r.config;
  c.instance = parse_instance(j.at("model").get<std::string>() + ":" + j.at("instance").get<std::string>() +
                              (j.at("extended").get<bool>() ? "+ext" : ""));
  c.instance.bool_mode = parse_bool_mode(j.at("bool_mode").get<std::string>());
  c.instance.sum_mode = parse_sum_mode(j.at("sum_mode").get<std::string>());
  c.restore.kind = parse_restore_kind(j.at("restore").get<std::string>());
  if (c.restore.kind == RestoreKind::CopyRecompute) {
    c.restore.distance = j.at("rec_dist").get<std::uint32_t>();
    c.restore.adaptive_distance = j.at("adapt_dist").get<std::uint32_t>();
  } else {
    c.restore = c.restore.kind == RestoreKind::Trail ? RestoreMode::trail() : RestoreMode::copy();
  }
  c.queue = parse_queue_policy(j.at("queue").get<std::string>());
  const auto bnb = j.at("bnb").get<std::string>();
  if (bnb != "none") c.bnb = parse_bnb_mode(bnb);
  c.runs = j.at("runs").get<int>();
  c.mode = j.value("mode", std::string("first")) == "all" ? SolveMode::All : SolveMode::First;
  if (j.contains("error")) {
    r.error = j.at("error").get<std::string>();
    return r;
  }
  r.nodes = j.at("nodes").get<std::uint64_t>();
  r.backtracks = j.at("backtracks").get<std::uint64_t>();
  r.solutions = j.at("solutions").get<std::uint64_t>();
  r.setup_ms_median = j.at("setup_ms_median").get<double>();
  r.solve_ms_median = j.at("solve_ms_median").get<double>();
  r.cov = j.at("cov").get<double>();
  r.nps = j.at("nps").get<double>();
  r.restore.bytes_copied = j.at("bytes_copied").get<std::uint64_t>();
  r.restore.trail_entries = j.at("trail_entries").get<std::uint64_t>();
  r.restore.snapshots_taken = j.at("snapshots").get<std::uint64_t>();
  r.restore.recomputations = j.at("recomputations").get<std::uint64_t>();
  r.restore.replayed_decisions = j.value("replayed_decisions", std::uint64_t{0});
  if (j.contains("objective") && !j.at("objective").is_null()) r.objective = j.at("objective").get<std::int64_t>();
  for (const auto& t : j.at("per_run")) r.per_run.push_back({t.at("setup_ms").get<double>(), t.at("solve_ms").get<double>()});
  return r;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';
  for (const RunRecord& r : records) {
    const auto& c = r.config;
    std::vector<std::string> f = {
        c.instance.class_name(),
        csv_escape(c.instance.params_string()),
        c.instance.extended ? "true" : "false",
        std::string(to_string(c.instance.bool_mode)),
        std::string(to_string(c.instance.sum_mode)),
        std::string(to_string(c.restore.kind)),
        std::to_string(rec_dist(c.restore)),
        std::to_string(adapt_dist(c.restore)),
        std::string(to_string(c.queue)),
        bnb_field(c),
        std::to_string(c.runs)};
    if (r.ok()) {
      f.insert(f.end(), {std::to_string(r.nodes), std::to_string(r.backtracks), std::to_string(r.solutions),
                         fmt_double(r.setup_ms_median), fmt_double(r.solve_ms_median), fmt_double(r.cov),
                         fmt_double(r.nps), std::to_string(r.restore.bytes_copied),
                         std::to_string(r.restore.trail_entries), std::to_string(r.restore.snapshots_taken),
                         std::to_string(r.restore.recomputations)});
    } else {
      f.resize(kCsvColumns.size());
    }
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<RunRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

std::vector<RunRecord> read_json(std::istream& in) {
  const json arr = json::parse(in);
  std::vector<RunRecord> out;
  for (const auto& j : arr) out.push_back(from_json(j));
  return out;
}

void emit(const std::vector<RunRecord>& records, OutputFormat format, const std::string& path) {
  auto write = [&](std::ostream& os) {
    if (format == OutputFormat::Csv) {
      write_csv(os, records);
    } else {
      write_json(os, records);
    }
  };
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

// -- sweeps ------------------------------------------------------------------

std::vector<std::string_view> sweep_suites() { return {"boolint", "copy", "trail", "manyvars"}; }

namespace {

std::vector<Instance> defaults_for(std::string_view suite) {
  std::vector<std::string> names;
  if (suite == "boolint") {
    names = {"golfers:2,4,4", "golfers:2,5,4", "bibd:7,3,2", "bibd:7,3,10"};
  } else if (suite == "manyvars") {
    names = {"queens:8", "queens:20", "golfers:2,4,4", "golfers:2,5,4"};
  } else {
    names = {"queens:8", "queens:20", "golfers:2,4,4", "golfers:2,5,4", "bibd:7,3,10"};
  }
  std::vector<Instance> out;
  for (const auto& n : names) out.push_back(parse_instance(n));
  return out;
}

bool same_restore(const RestoreMode& a, const RestoreMode& b) {
  if (a.kind != b.kind) return false;
  return a.kind != RestoreKind::CopyRecompute ||
         (a.distance == b.distance && a.adaptive_distance == b.adaptive_distance);
}

}  // namespace

Sweep make_sweep(std::string_view suite, const std::vector<Instance>& instances, int runs) {
  const auto known = sweep_suites();
  if (std::find(known.begin(), known.end(), suite) == known.end())
    throw ModelError("unknown sweep suite '" + std::string(suite) + "'");
  std::vector<Instance> base = instances.empty() ? defaults_for(suite) : instances;
  Sweep sweep;
  auto add = [&](Instance inst, RestoreMode restore) {
    RunConfig c;
    c.instance = std::move(inst);
    c.restore = restore;
    c.runs = runs;
    sweep.configs.push_back(std::move(c));
  };

  if (suite == "boolint") {
    for (const auto& inst : base) {
      for (BoolMode m : {BoolMode::NativeBool, BoolMode::IntZeroOne}) {
        Instance i = inst;
        i.bool_mode = m;
        add(i, RestoreMode::copy());
      }
    }
    sweep.ratios.push_back({"integer model / Boolean model",
                            [](const RunRecord& r) { return r.config.instance.bool_mode == BoolMode::IntZeroOne; },
                            [](const RunRecord& r) { return r.config.instance.bool_mode == BoolMode::NativeBool; }});
  } else if (suite == "copy") {
    const std::uint32_t distances[] = {1, 8, 16, 32};
    for (const auto& inst : base)
      for (auto d : distances) add(inst, RestoreMode::recompute(d, 2));
    for (auto d : distances) {
      if (d == 1) continue;
      sweep.ratios.push_back({"recomputation distance " + std::to_string(d) + " / distance 1",
                              [d](const RunRecord& r) { return same_restore(r.config.restore, RestoreMode::recompute(d, 2)); },
                              [](const RunRecord& r) { return same_restore(r.config.restore, RestoreMode::recompute(1, 2)); }});
    }
  } else if (suite == "trail") {
    for (const auto& inst : base) {
      add(inst, RestoreMode::trail());
      add(inst, RestoreMode::copy());
    }
    sweep.ratios.push_back({"trailing / copying",
                            [](const RunRecord& r) { return r.config.restore.kind == RestoreKind::Trail; },
                            [](const RunRecord& r) { return r.config.restore.kind == RestoreKind::Copy; }});
  } else {
    const RestoreMode modes[] = {RestoreMode::trail(), RestoreMode::copy(), RestoreMode::recompute(8, 2)};
    for (const auto& inst : base) {
      if (!inst.supports_extended()) continue;
      for (const auto& mode : modes) {
        Instance normal = inst;
        normal.extended = false;
        Instance ext = inst;
        ext.extended = true;
        add(normal, mode);
        add(ext, mode);
      }
    }
    for (const auto& mode : modes) {
      sweep.ratios.push_back({"extended / normal under " + describe(mode),
                              [mode](const RunRecord& r) { return r.config.instance.extended && same_restore(r.config.restore, mode); },
                              [mode](const RunRecord& r) { return !r.config.instance.extended && same_restore(r.config.restore, mode); }});
    }
  }
  return sweep;
}

// -- reference tables --------------------------------------------------------

std::vector<ReferenceRow> read_reference_table(std::istream& in) {
  std::vector<ReferenceRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') {
        quoted = !quoted;
      } else if (ch == ',' && !quoted) {
        fields.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    fields.push_back(cur);
    if (fields.size() < 2) throw std::runtime_error("malformed reference row: " + line);
    ReferenceRow row{fields[0], fields[1], {}};
    for (std::size_t i = 2; i < fields.size(); ++i)
      row.values.push_back(fields[i].empty() ? -1 : std::stoll(fields[i]));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fdlab

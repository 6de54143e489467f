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


// Python bindings. Options are passed as plain strings so scripts read like
// the command-line harness.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fdlab/bench.hpp"
#include "fdlab/models.hpp"
#include "fdlab/search.hpp"

namespace py = pybind11;
using namespace fdlab;

namespace {

Instance make_instance(const std::string& name, const std::string& sum_mode, const std::string& bool_mode) {
  Instance inst = parse_instance(name);
  inst.sum_mode = parse_sum_mode(sum_mode);
  inst.bool_mode = parse_bool_mode(bool_mode);
  return inst;
}

RestoreMode make_restore(const std::string& kind, std::uint32_t rec_dist, std::uint32_t adapt_dist) {
  switch (parse_restore_kind(kind)) {
    case RestoreKind::Trail:
      return RestoreMode::trail();
    case RestoreKind::Copy:
      return RestoreMode::copy();
    case RestoreKind::CopyRecompute:
      if (rec_dist == 0) throw ModelError("recomputation distance must be at least 1");
      return RestoreMode::recompute(rec_dist, adapt_dist);
  }
  return RestoreMode::trail();
}

SearchOptions make_options(bool all, const std::string& restore, std::uint32_t rec_dist, std::uint32_t adapt_dist,
                           const std::string& queue, const std::string& bnb) {
  SearchOptions o;
  o.mode = all ? SolveMode::All : SolveMode::First;
  o.restore = make_restore(restore, rec_dist, adapt_dist);
  o.queue = parse_queue_policy(queue);
  o.bnb = parse_bnb_mode(bnb);
  return o;
}

py::dict restore_dict(const RestoreStats& r) {
  py::dict d;
  d["bytes_copied"] = r.bytes_copied;
  d["trail_entries"] = r.trail_entries;
  d["snapshots"] = r.snapshots_taken;
  d["recomputations"] = r.recomputations;
  d["replayed_decisions"] = r.replayed_decisions;
  return d;
}

py::dict stats_dict(const SearchStats& s) {
  py::dict d;
  d["nodes"] = s.nodes;
  d["backtracks"] = s.backtracks;
  d["solutions"] = s.solutions;
  d["propagations"] = s.propagations;
  d["setup_ms"] = s.setup_ms;
  d["solve_ms"] = s.solve_ms;
  d["nps"] = s.nps;
  d["restore"] = restore_dict(s.restore);
  return d;
}

py::dict record_dict(const RunRecord& r) {
  py::dict d;
  d["instance"] = r.config.instance.name();
  d["restore"] = describe(r.config.restore);
  d["queue"] = std::string(to_string(r.config.queue));
  d["runs"] = r.config.runs;
  d["ok"] = r.ok();
  d["error"] = r.error;
  d["nodes"] = r.nodes;
  d["backtracks"] = r.backtracks;
  d["solutions"] = r.solutions;
  d["objective"] = r.objective ? py::object(py::int_(*r.objective)) : py::object(py::none());
  d["setup_ms_median"] = r.setup_ms_median;
  d["solve_ms_median"] = r.solve_ms_median;
  d["cov"] = r.cov;
  d["nps"] = r.nps;
  d["restore_stats"] = restore_dict(r.restore);
  return d;
}

RunConfig make_config(const py::dict& kw) {
  auto str = [&](const char* key, const char* fallback) {
    return kw.contains(key) ? kw[key].cast<std::string>() : std::string(fallback);
  };
  auto num = [&](const char* key, std::uint32_t fallback) {
    return kw.contains(key) ? kw[key].cast<std::uint32_t>() : fallback;
  };
  if (!kw.contains("model")) throw ModelError("config needs a 'model' entry");
  RunConfig c;
  c.instance = make_instance(str("model", ""), str("sum_mode", "native"), str("bool_mode", "native"));
  if (kw.contains("extended") && kw["extended"].cast<bool>()) {
    if (!c.instance.supports_extended()) throw ModelError(c.instance.class_name() + " has no extended model");
    c.instance.extended = true;
  }
  c.restore = make_restore(str("restore", "trail"), num("rec_dist", 8), num("adapt_dist", 2));
  c.queue = parse_queue_policy(str("queue", "priority"));
  c.bnb = parse_bnb_mode(str("bnb", "post"));
  c.mode = kw.contains("all") && kw["all"].cast<bool>() ? SolveMode::All : SolveMode::First;
  c.runs = static_cast<int>(num("runs", 1));
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "fdlab solver core";
  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);

  m.def(
      "counts",
      [](const std::string& name) {
        const ModelCounts c = counts(parse_instance(name));
        return py::make_tuple(c.variables, c.constraints_native, c.constraints_decomposed);
      },
      py::arg("instance"), "(variables, native constraints, decomposed constraints)");

  m.def(
      "bibd_params",
      [](int v, int k, int lambda) {
        const BibdParams p = bibd_params(v, k, lambda);
        return py::make_tuple(p.b, p.r);
      },
      py::arg("v"), py::arg("k"), py::arg("lam"), "(b, r) for a BIBD; raises ModelError if not integral");

  m.def(
      "describe_instance",
      [](const std::string& name) {
        const Instance inst = parse_instance(name);
        const Model model = build(inst);
        py::dict d;
        d["name"] = inst.name();
        d["problem"] = inst.class_name();
        d["params"] = inst.params;
        d["extended"] = inst.extended;
        d["optimization"] = inst.is_optimization();
        d["variables"] = model.var_count();
        d["constraints"] = model.constraints;
        d["decisions"] = decision_count(inst);
        return d;
      },
      py::arg("instance"));

  m.def("decision_count", [](const std::string& name) { return decision_count(parse_instance(name)); },
        py::arg("instance"));

  m.def(
      "check_solution",
      [](const std::string& name, const std::vector<std::int64_t>& values) {
        const Verdict v = check_solution(parse_instance(name), values);
        return py::make_tuple(v.valid, v.violation);
      },
      py::arg("instance"), py::arg("values"), "(valid, violation message)");

  m.def(
      "solve",
      [](const std::string& name, bool all, const std::string& restore, std::uint32_t rec_dist,
         std::uint32_t adapt_dist, const std::string& queue, const std::string& sum_mode,
         const std::string& bool_mode) {
        const Instance inst = make_instance(name, sum_mode, bool_mode);
        const SearchOptions opts = make_options(all, restore, rec_dist, adapt_dist, queue, "post");
        SearchResult r;
        {
          py::gil_scoped_release unlocked;
          Model model = build(inst);
          r = solve(model, opts);
        }
        py::dict d;
        std::vector<std::vector<std::int64_t>> sols;
        for (const auto& s : r.solutions) sols.push_back(s.values);
        d["solutions"] = sols;
        d["root_failed"] = r.root_failed;
        d["stats"] = stats_dict(r.stats);
        return d;
      },
      py::arg("instance"), py::arg("all") = false, py::arg("restore") = "trail", py::arg("rec_dist") = 8,
      py::arg("adapt_dist") = 2, py::arg("queue") = "priority", py::arg("sum_mode") = "native",
      py::arg("bool_mode") = "native");

  m.def(
      "minimize",
      [](const std::string& name, const std::string& bnb, const std::string& restore, std::uint32_t rec_dist,
         std::uint32_t adapt_dist, const std::string& queue, const std::string& sum_mode) {
        const Instance inst = make_instance(name, sum_mode, "native");
        const SearchOptions opts = make_options(false, restore, rec_dist, adapt_dist, queue, bnb);
        OptimizeResult r;
        {
          py::gil_scoped_release unlocked;
          Model model = build(inst);
          r = minimize(model, opts);
        }
        py::dict d;
        d["objective"] = r.best ? py::object(py::int_(*r.best->objective)) : py::object(py::none());
        d["values"] = r.best ? py::object(py::cast(r.best->values)) : py::object(py::none());
        d["stats"] = stats_dict(r.stats);
        return d;
      },
      py::arg("instance"), py::arg("bnb") = "post", py::arg("restore") = "trail", py::arg("rec_dist") = 8,
      py::arg("adapt_dist") = 2, py::arg("queue") = "priority", py::arg("sum_mode") = "native");

  m.def(
      "run",
      [](const py::kwargs& kw) {
        const RunConfig c = make_config(kw);
        RunRecord r;
        {
          py::gil_scoped_release unlocked;
          r = run_config(c);
        }
        return record_dict(r);
      },
      "Timed repeated run. Keywords: model, restore, rec_dist, adapt_dist, queue, bnb, sum_mode, bool_mode, "
      "extended, all, runs.");

  m.def(
      "run_matrix",
      [](const std::vector<py::dict>& configs, unsigned jobs) {
        std::vector<RunConfig> cs;
        for (const auto& kw : configs) cs.push_back(make_config(kw));
        std::vector<RunRecord> records;
        {
          py::gil_scoped_release unlocked;
          records = run_matrix(cs, jobs);
        }
        py::list out;
        for (const auto& r : records) out.append(record_dict(r));
        return out;
      },
      py::arg("configs"), py::arg("jobs") = 1);

  m.def("median", [](const std::vector<double>& v) { return median(v); }, py::arg("values"));
  m.def("coefficient_of_variation", [](const std::vector<double>& v) { return coefficient_of_variation(v); },
        py::arg("values"));

  auto names = [](const std::vector<Instance>& list) {
    std::vector<std::string> out;
    for (const auto& i : list) out.push_back(i.name());
    return out;
  };
  m.def("table2_instances", [names] { return names(table2_instances()); });
  m.def("table4_instances", [names] { return names(table4_instances()); });
}

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

#include <fstream>
#include <map>
#include <vector>

#include "doctest.h"
#include "fdlab/bench.hpp"
#include "fdlab/models.hpp"
#include "support.hpp"

using namespace fdlab;
namespace ft = fdlab::testing;

namespace {

ModelCounts counts_of(const char* name) { return counts(parse_instance(name)); }

std::vector<ReferenceRow> table(const char* file) {
  std::ifstream in(std::string(FDLAB_DATA_DIR) + "/" + file);
  REQUIRE(in.good());
  return read_reference_table(in);
}

}  // namespace

TEST_CASE("instance parsing") {
  const Instance g = parse_instance("golfers:2,4,4+ext");
  CHECK(g.cls == ProblemClass::Golfers);
  CHECK(g.params == std::vector<int>{2, 4, 4});
  CHECK(g.extended);
  CHECK(g.name() == "golfers:2,4,4+ext");
  CHECK(g.params_string() == "2,4,4");
  CHECK(parse_instance("golomb:9").is_optimization());
  CHECK_THROWS_AS(parse_instance("queens"), ModelError);
  CHECK_THROWS_AS(parse_instance("rooks:8"), ModelError);
  CHECK_THROWS_AS(parse_instance("golfers:2,4"), ModelError);
  CHECK_THROWS_AS(parse_instance("queens:x"), ModelError);
  CHECK_THROWS_AS(parse_instance("magic:4+ext"), ModelError);
  CHECK_THROWS_AS(parse_instance("bibd:8,3,1"), ModelError);
}

TEST_CASE("bibd parameters") {
  CHECK(bibd_params(7, 3, 10) == BibdParams{70, 30});
  CHECK(bibd_params(7, 3, 1) == BibdParams{7, 3});
  CHECK(bibd_params(7, 3, 70) == BibdParams{490, 210});
  CHECK_THROWS_AS(bibd_params(8, 3, 1), ModelError);
  CHECK_THROWS_AS(bibd_params(3, 3, 1), ModelError);
}

TEST_CASE("published counts, spot checks") {
  CHECK(counts_of("queens:20") == ModelCounts{210, 571, 761});
  CHECK(counts_of("golfers:2,4,4") == ModelCounts{1088, 1133, 1293});
  CHECK(counts_of("bibd:7,3,10") == ModelCounts{1960, 1643, 1741});
  CHECK(counts_of("golomb:9") == ModelCounts{45, 46, 82});
  CHECK(counts_of("magic:6") == ModelCounts{36, 19, 33});
  CHECK(counts_of("magic:4").constraints_native == 15);
  CHECK(counts_of("magic:4").constraints_decomposed == 25);
  CHECK(counts_of("bibd:7,3,70").variables == 13720);
  CHECK(build(parse_instance("queens:20+ext")).var_count() == 1920);
  CHECK(build(parse_instance("queens:21+ext")).var_count() == 2121);
  CHECK(build(parse_instance("golfers:2,5,4+ext")).var_count() == 19200);
}

TEST_CASE("every published count matches the shipped tables") {
  std::map<std::string, ModelCounts> published;
  for (const auto& r : table("table2.csv"))
    published[r.problem + ":" + r.instance] = {static_cast<std::size_t>(r.values[0]),
                                               static_cast<std::size_t>(r.values[1]),
                                               static_cast<std::size_t>(r.values[2])};
  const auto t2 = table2_instances();
  REQUIRE(t2.size() == 32);
  REQUIRE(published.size() == 32);
  for (const Instance& inst : t2) {
    const std::string key = inst.class_name() + ":" + inst.params_string();
    CAPTURE(key);
    REQUIRE(published.count(key) == 1);
    CHECK(counts(inst) == published[key]);
  }

  std::map<std::string, std::int64_t> normal;
  std::map<std::string, std::int64_t> extended;
  for (const auto& r : table("table4.csv")) {
    normal[r.problem + ":" + r.instance] = r.values[0];
    extended[r.problem + ":" + r.instance] = r.values[1];
  }
  const auto t4 = table4_instances();
  REQUIRE(t4.size() == 17);
  for (const Instance& inst : t4) {
    const std::string key = inst.class_name() + ":" + inst.params_string();
    CAPTURE(key);
    REQUIRE(extended.count(key) == 1);
    CHECK(static_cast<std::int64_t>(build(inst).var_count()) == extended[key]);
    Instance plain = inst;
    plain.extended = false;
    CHECK(static_cast<std::int64_t>(build(plain).var_count()) == normal[key]);
  }
}

TEST_CASE("boolean and integer builds share the constraint graph") {
  for (const char* name : {"golfers:2,4,4", "bibd:7,3,2"}) {
    Instance a = parse_instance(name);
    Instance b = a;
    b.bool_mode = BoolMode::IntZeroOne;
    Model ma = build(a);
    Model mb = build(b);
    CHECK(ma.var_count() == mb.var_count());
    CHECK(ma.constraints == mb.constraints);
    CHECK(ma.engine.propagator_count() == mb.engine.propagator_count());
    CHECK(ma.engine.store().bool_var_count() > 0);
    CHECK(mb.engine.store().bool_var_count() == 0);
    for (std::uint32_t p = 0; p < ma.engine.propagator_count(); ++p)
      CHECK(ma.engine.propagator(p).priority() == mb.engine.propagator(p).priority());
  }
}

TEST_CASE("checker examples") {
  const Instance magic = parse_instance("magic:3");
  const std::vector<std::int64_t> lo_shu{2, 7, 6, 9, 5, 1, 4, 3, 8};
  CHECK(check_solution(magic, lo_shu));
  std::vector<std::int64_t> broken = lo_shu;
  std::swap(broken[0], broken[1]);
  CHECK_FALSE(check_solution(magic, broken));

  const Instance q4 = parse_instance("queens:4");
  CHECK(check_solution(q4, std::vector<std::int64_t>{1, 3, 0, 2}));
  const Verdict diag = check_solution(q4, std::vector<std::int64_t>{0, 2, 3, 1});
  CHECK_FALSE(diag);
  CHECK(diag.violation.find("diagonal") != std::string::npos);

  const Instance g5 = parse_instance("golomb:5");
  CHECK(check_solution(g5, std::vector<std::int64_t>{0, 1, 4, 9, 11}));
  CHECK_FALSE(check_solution(g5, std::vector<std::int64_t>{0, 1, 2, 9, 11}));
  CHECK_FALSE(check_solution(g5, std::vector<std::int64_t>{0, 1, 4, 9}));

  CHECK(decision_count(parse_instance("golfers:2,4,4")) == 2 * 4 * 16);
  CHECK(decision_count(parse_instance("bibd:7,3,1")) == 49);
}

// Solver solutions pass; every single-value perturbation of one fails. A
// perturbed Golomb ruler can still be a ruler, so there the check is that
// no valid mutation beats the proven optimum.
TEST_CASE("mutation fuzzing of the checker") {
  const char* names[] = {"queens:8", "magic:4", "golfers:2,3,3", "golfers:2,4,4", "bibd:7,3,2", "golomb:6"};
  for (const char* name : names) {
    CAPTURE(name);
    const Instance inst = parse_instance(name);
    SearchOptions opts;
    opts.mode = inst.cls == ProblemClass::Queens ? SolveMode::All : SolveMode::First;
    const auto out = ft::run_instance(inst, opts);
    REQUIRE_FALSE(out.solutions.empty());
    std::int64_t hi = 1;
    if (inst.cls == ProblemClass::Queens) hi = inst.params[0] - 1;
    if (inst.cls == ProblemClass::Magic) hi = inst.params[0] * inst.params[0];
    if (inst.cls == ProblemClass::Golomb) hi = inst.params[0] * inst.params[0];
    const std::int64_t lo = inst.cls == ProblemClass::Magic ? 1 : 0;
    for (const Solution& s : out.solutions) {
      REQUIRE(check_solution(inst, s.values));
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        for (std::int64_t v = lo; v <= hi; ++v) {
          if (v == s.values[i]) continue;
          auto mutated = s.values;
          mutated[i] = v;
          const bool ok = static_cast<bool>(check_solution(inst, mutated));
          if (inst.cls == ProblemClass::Golomb) {
            if (ok) CHECK(mutated.back() >= s.values.back());
          } else {
            CHECK_FALSE(ok);
          }
        }
      }
    }
  }
}

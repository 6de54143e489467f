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

#include <random>
#include <vector>

#include "doctest.h"
#include "fdlab/domain.hpp"

using namespace fdlab;

namespace {

struct CountingObserver : StoreObserver {
  int calls = 0;
  std::vector<std::uint64_t> before;
  void record(const VariableStore& store, VarId, Region, std::uint32_t, std::uint32_t) override {
    ++calls;
    store.save(before);
  }
};

}  // namespace

TEST_CASE("new variables get distinct ids") {
  VariableStore s;
  const VarId a = s.new_int_var(0, 3);
  const VarId b = s.new_int_var(0, 3);
  CHECK_FALSE(a == b);
  CHECK(s.int_var_count() == 2);

  VariableStore bools;
  for (int i = 0; i < 16400; ++i) bools.new_bool_var();
  CHECK(bools.bool_var_count() == 16400);
  CHECK(bools.var_count() == 16400);
}

TEST_CASE("int variable construction rejects bad bounds") {
  VariableStore s;
  CHECK_THROWS_AS(s.new_int_var(3, 2), ModelError);
  CHECK_THROWS_AS(s.new_int_var(0, VariableStore::kMaxSpan), ModelError);
  CHECK_NOTHROW(s.new_int_var(-5, -5));
}

TEST_CASE("narrow examples") {
  VariableStore s;
  const VarId x = s.new_int_var(0, 3);

  auto r = s.narrow(x, Action::remove(2));
  CHECK(r.status == NarrowStatus::Narrowed);
  CHECK(r.event.cls == EventClass::DomainChanged);
  CHECK(s.values(x) == std::vector<std::int64_t>{0, 1, 3});

  std::vector<std::uint64_t> before;
  s.save(before);
  CHECK(s.narrow(x, Action::at_least(0)).status == NarrowStatus::NoChange);
  std::vector<std::uint64_t> after;
  s.save(after);
  CHECK(before == after);

  const VarId y = s.new_int_var(5, 5);
  s.save(before);
  CHECK(s.narrow(y, Action::remove(5)).status == NarrowStatus::Failed);
  s.save(after);
  CHECK(before == after);  // failure leaves the domain alone
}

TEST_CASE("event strength") {
  VariableStore s;
  const VarId x = s.new_int_var(0, 9);
  CHECK(s.narrow(x, Action::remove(4)).event.cls == EventClass::DomainChanged);
  CHECK(s.narrow(x, Action::remove(0)).event.cls == EventClass::BoundsChanged);
  CHECK(s.min(x) == 1);
  CHECK(s.narrow(x, Action::at_most(5)).event.cls == EventClass::BoundsChanged);
  CHECK(s.max(x) == 5);
  CHECK(s.size(x) == 4);  // {1,2,3,5}

  const VarId y = s.new_int_var(0, 1);
  CHECK(s.narrow(y, Action::remove(1)).event.cls == EventClass::Instantiated);

  const VarId z = s.new_int_var(-3, 3);
  CHECK(s.narrow(z, Action::assign(-2)).event.cls == EventClass::Instantiated);
  CHECK(s.value(z) == -2);
  CHECK(s.narrow(z, Action::assign(-2)).status == NarrowStatus::NoChange);
  CHECK(s.narrow(z, Action::assign(1)).status == NarrowStatus::Failed);
}

TEST_CASE("bounds skip holes") {
  VariableStore s;
  const VarId x = s.new_int_var(0, 9);
  s.narrow(x, Action::remove(1));
  s.narrow(x, Action::remove(2));
  s.narrow(x, Action::remove(0));
  CHECK(s.min(x) == 3);
  CHECK(s.next_value(x, 4) == 4);
  s.narrow(x, Action::remove(9));
  s.narrow(x, Action::remove(8));
  CHECK(s.max(x) == 7);
  CHECK(s.prev_value(x, 7) == 7);
  CHECK_FALSE(s.contains(x, 2));
  CHECK(s.size(x) == 5);
}

TEST_CASE("observer runs before memory changes") {
  VariableStore s;
  const VarId x = s.new_int_var(0, 7);
  const VarId b = s.new_bool_var();
  std::vector<std::uint64_t> start;
  s.save(start);

  CountingObserver obs;
  s.set_observer(&obs);
  s.narrow(x, Action::remove(3));
  CHECK(obs.calls == 1);
  CHECK(obs.before == start);

  s.narrow(x, Action::remove(3));  // no change, no record
  CHECK(obs.calls == 1);

  s.save(start);
  s.narrow(b, Action::assign(1));
  CHECK(obs.calls == 2);
  CHECK(obs.before == start);
  CHECK(s.bool_state(b) == BoolState::True);
}

TEST_CASE("save and load round trip") {
  VariableStore s;
  const VarId x = s.new_int_var(-10, 100);
  const VarId b = s.new_bool_var();
  s.reserve_flags(70);
  std::vector<std::uint64_t> blob;
  s.save(blob);
  VariableStore copy = s;

  s.narrow(x, Action::remove(50));
  s.narrow(b, Action::assign(0));
  s.set_flag(65);
  CHECK_FALSE(s == copy);
  s.load(blob);
  CHECK(s == copy);
  CHECK(s.same_domains(copy));
}

// Booleans and {0..1} integers must be indistinguishable through narrow().
TEST_CASE("boolean and zero-one integer variables behave identically") {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> value(-1, 2);
  for (int trial = 0; trial < 2000; ++trial) {
    VariableStore s;
    const VarId b = s.new_bool_var();
    const VarId i = s.new_int_var(0, 1);
    for (int step = 0; step < 4; ++step) {
      const std::int64_t v = value(rng);
      Action a{};
      switch (kind(rng)) {
        case 0: a = Action::remove(v); break;
        case 1: a = Action::at_least(v); break;
        case 2: a = Action::at_most(v); break;
        default: a = Action::assign(v); break;
      }
      const NarrowResult rb = s.narrow(b, a);
      const NarrowResult ri = s.narrow(i, a);
      REQUIRE(rb.status == ri.status);
      if (rb.status == NarrowStatus::Narrowed) REQUIRE(rb.event.cls == ri.event.cls);
      if (rb.status == NarrowStatus::Failed) break;
      REQUIRE(s.min(b) == s.min(i));
      REQUIRE(s.max(b) == s.max(i));
      REQUIRE(s.size(b) == s.size(i));
      REQUIRE(s.values(b) == s.values(i));
    }
  }
}

TEST_CASE("size strictly decreases on every narrowing") {
  std::mt19937_64 rng(7);
  VariableStore s;
  const VarId x = s.new_int_var(-20, 20);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> value(-22, 22);
  for (int step = 0; step < 200; ++step) {
    const std::uint64_t before = s.size(x);
    Action a = kind(rng) == 0 ? Action::at_least(value(rng)) : Action::remove(value(rng));
    if (kind(rng) == 3) a = Action::at_most(value(rng));
    const auto r = s.narrow(x, a);
    if (r.status == NarrowStatus::Failed) break;
    if (r.status == NarrowStatus::Narrowed) CHECK(s.size(x) < before);
    if (r.status == NarrowStatus::NoChange) CHECK(s.size(x) == before);
    CHECK(s.size(x) == s.values(x).size());
  }
}

# Copyright 2026 The fdlab Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import pytest

import fdlab


def brute_force_queens(n):
    from itertools import permutations

    return {
        p
        for p in permutations(range(n))
        if all(abs(p[i] - p[j]) != j - i for i in range(n) for j in range(i + 1, n))
    }


def test_counts_and_bibd():
    assert fdlab.counts("queens:20") == (210, 571, 761)
    assert fdlab.bibd_params(7, 3, 10) == (70, 30)
    with pytest.raises(fdlab.ModelError):
        fdlab.bibd_params(8, 3, 1)
    with pytest.raises(ValueError):
        fdlab.counts("rooks:8")


def test_describe():
    d = fdlab.describe_instance("golfers:2,4,4+ext")
    assert d["extended"] and d["problem"] == "golfers"
    assert d["decisions"] == 2 * 4 * 16
    assert len(fdlab.table2_instances()) == 32
    assert len(fdlab.table4_instances()) == 17


@pytest.mark.parametrize("restore", ["trail", "copy", "copy-recompute"])
def test_queens_all_solutions(restore):
    out = fdlab.solve("queens:6", all=True, restore=restore)
    assert {tuple(s) for s in out["solutions"]} == brute_force_queens(6)
    for s in out["solutions"]:
        assert fdlab.check_solution("queens:6", s)[0]


def test_queens8_trajectory_is_restore_independent():
    seen = set()
    for restore in ("trail", "copy", "copy-recompute"):
        st = fdlab.solve("queens:8", all=True, restore=restore)["stats"]
        seen.add((st["nodes"], st["backtracks"], st["solutions"]))
    assert seen == {(830, 324, 92)}


def test_checker_rejects():
    ok, why = fdlab.check_solution("queens:4", [0, 2, 3, 1])
    assert not ok and "diagonal" in why


@pytest.mark.parametrize("bnb", ["post", "tighten"])
def test_golomb_minimize(bnb):
    out = fdlab.minimize("golomb:6", bnb=bnb, restore="copy-recompute")
    assert out["objective"] == 17
    assert fdlab.check_solution("golomb:6", out["values"])[0]


def test_run_and_matrix():
    r = fdlab.run(model="golfers:2,3,3", restore="copy", runs=2)
    assert r["ok"] and r["runs"] == 2
    assert r["restore_stats"]["snapshots"] > 0
    recs = fdlab.run_matrix([{"model": "queens:6", "all": True}, {"model": "queens:3"}], jobs=2)
    assert recs[0]["ok"] and recs[0]["solutions"] == 4
    assert recs[1]["ok"] and recs[1]["solutions"] == 0
    with pytest.raises(fdlab.ModelError):
        fdlab.run_matrix([{"model": "bibd:8,3,1"}])
    with pytest.raises(ValueError):
        fdlab.run(model="queens:6", restore="undo")


def test_statistics_helpers():
    assert fdlab.median([4, 1, 3, 2]) == 2.5
    assert fdlab.coefficient_of_variation([3, 3, 3]) == 0.0

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

"""Finite-domain solver benchmarks: models, search and restoration backends."""

from fdlab._core import (
    ModelError,
    bibd_params,
    check_solution,
    counts,
    decision_count,
    describe_instance,
    median,
    coefficient_of_variation,
    minimize,
    run,
    run_matrix,
    solve,
    table2_instances,
    table4_instances,
)

__all__ = [
    "ModelError",
    "bibd_params",
    "check_solution",
    "coefficient_of_variation",
    "counts",
    "decision_count",
    "describe_instance",
    "median",
    "minimize",
    "run",
    "run_matrix",
    "solve",
    "table2_instances",
    "table4_instances",
]

# Copyright 2026 The mergevis Authors
#
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
"""Cooperative on-ramp merging with vehicle identification."""

from ._mergevis import (
    ControlLaw,
    MergevisError,
    a_rms,
    chi2_threshold,
    cli,
    fuel_rate,
    generate_pairs,
    match_statistic,
    rollout,
    run_pair,
    solve_min_energy,
    welch_t_test,
)

__all__ = [
    "ControlLaw",
    "MergevisError",
    "a_rms",
    "chi2_threshold",
    "cli",
    "fuel_rate",
    "generate_pairs",
    "match_statistic",
    "rollout",
    "run_pair",
    "solve_min_energy",
    "welch_t_test",
]
__version__ = "0.1.0"

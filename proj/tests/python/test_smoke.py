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

import math

import pytest

import mergevis


def test_solve_min_energy_hits_terminal_state():
    law = mergevis.solve_min_energy(0.0, 5.0, 0.0, 20.0, 110.0, 22.0)
    traj = mergevis.rollout(law, 0.0, 20.0)
    assert traj["p"][-1] == pytest.approx(110.0, abs=1e-6)
    assert traj["v"][-1] == pytest.approx(22.0, abs=1e-6)
    assert law.energy() >= 0.0


def test_horizon_too_short_raises():
    with pytest.raises(mergevis.MergevisError):
        mergevis.solve_min_energy(0.0, 0.1, 0.0, 20.0, 2.0, 20.0)


def test_chi2_and_fuel():
    assert mergevis.chi2_threshold(0.05) == pytest.approx(-2.0 * math.log(0.05))
    assert mergevis.fuel_rate(20.0, 0.0) == pytest.approx(0.8283, abs=1e-4)
    assert mergevis.fuel_rate(20.0, -1.0) == 0.0


def test_welch():
    r = mergevis.welch_t_test([1, 2, 3, 4], [2, 4, 6, 8, 10])
    assert r["t_stat"] == pytest.approx(-2.2514363231593695, rel=1e-9)
    assert r["p_value"] == pytest.approx(0.06913359319239236, rel=1e-6)


def test_run_pair_case2_reaches_safe_gap():
    out = mergevis.run_pair("one-third", 0, 11, "case2")
    starts = [t for kind, t in out["events"] if kind == "cooperation_start"]
    assert starts == [pytest.approx(3.52)]
    assert out["metrics"]["gap_s"] == pytest.approx(1.8, abs=0.05)


def test_generate_pairs_is_deterministic():
    a = mergevis.generate_pairs("two-thirds", 5, 3)
    b = mergevis.generate_pairs("two-thirds", 5, 3)
    assert a == b
    assert all(300.0 <= p["p_merge"] <= 370.0 for p in a)


def test_cli_usage_error(tmp_path):
    code, _, _ = mergevis.cli(["generate", "--n", "0", "--out", str(tmp_path)])
    assert code == 2
    code, out, _ = mergevis.cli(["generate", "--n", "3", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "manifest.json").exists()

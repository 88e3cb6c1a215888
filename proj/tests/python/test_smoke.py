import json
import math

import numpy as np
import pytest

import midec


def test_exact_oracles():
    assert midec.ula_gaussian_mi_exact(1.0, 0.1, 10) == pytest.approx(0.061764623665920, abs=1e-12)
    assert midec.ou_mi_exact(1.0, 1.0) == pytest.approx(0.5 * math.log1p(1 / (math.e**2 - 1)), abs=1e-14)
    assert midec.ou_mi_exact(1.0, 0.0) == math.inf
    assert midec.proximal_gaussian_mi_exact(1.0, 0.5, 2, dim=3) == pytest.approx(
        3 * midec.proximal_gaussian_mi_exact(1.0, 0.5, 2), rel=1e-12)


def test_divergences_and_mi():
    one = np.eye(1)
    assert midec.phi_divergence_gaussian("kl", [1.0], one, [0.0], one) == pytest.approx(0.5)
    assert midec.phi_divergence_gaussian("chi2", [1.0], one, [0.0], one) == pytest.approx(math.e - 1)
    mi = midec.phi_mutual_info_gaussian("kl", one, one, 0.5 * one)
    assert mi == pytest.approx(-0.5 * math.log(0.75))
    with pytest.raises(midec.DomainError):
        midec.phi_divergence_gaussian("renyi", [1.0], one, [0.0], one)


def test_bounds():
    assert midec.bound_mi_proximal(1.0, 1.0, 2.0, 1.0, 2) == pytest.approx(0.0625)
    assert midec.bound_mi_ula(1.0, 0.1, 1.0, 1.0, 10) == pytest.approx(0.9**20)
    assert midec.iters_ula(0.01, 1.0, 0.1, 1.0, 1.0) == 24
    assert midec.sobolev_evolution_proximal(1.0, 1.0, 0.7) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(midec.DomainError):
        midec.bound_mi_ula(1.0, 1.0, 1.0, 1.0, 1)


def test_chains_and_plugin_estimate():
    out = midec.run_chains("ula", [0.0], np.eye(1), [10], n_chains=20000, seed=3, eta=0.1)
    assert out["x0"].shape == (20000, 1)
    assert out["xk"][0].shape == (20000, 1)
    assert out["oracle_call_count"] == 200000
    value, ci = midec.mi_plugin(out["x0"], out["xk"][0], replicates=50, seed=1)
    exact = midec.ula_gaussian_mi_exact(1.0, 0.1, 10)
    assert abs(value - exact) <= 4 * ci
    again = midec.run_chains("ula", [0.0], np.eye(1), [10], n_chains=20000, seed=3, eta=0.1, threads=2)
    np.testing.assert_array_equal(again["xk"][0], out["xk"][0])


def test_experiment_and_presets():
    assert "ula_gaussian" in midec.preset_names()
    cfg = json.loads(midec.preset_json("proximal_gaussian"))
    cfg["chain"]["n_chains"] = 2000
    cfg["bootstrap"] = {"replicates": 20}
    res = midec.run_experiment(json.dumps(cfg))
    assert res["exit_status"] == 0
    assert res["violations"] == []
    assert res["csv"].startswith("index,time,exact_mi")
    assert json.loads(res["summary"])["violations"] == 0
    cfg["test_hooks"] = {"thm_bound_scale": 0.01}
    assert midec.run_experiment(json.dumps(cfg))["exit_status"] == 1
    with pytest.raises(midec.ConfigError):
        midec.run_experiment('{"target": {}}')

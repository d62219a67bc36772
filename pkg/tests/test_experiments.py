"""Reduced-scale runs of every experiment through the full workflow."""

import numpy as np
import pytest

from experiments import REGISTRY, build_experiment
from experiments.config import ExperimentConfig
from experiments.identity_suite import THRESHOLDS, _shapes
from system import (
    run_clt,
    run_dbm_diagnostics,
    run_flow_check,
    run_identity_suite,
    run_que,
    run_regularized_compare,
)


@pytest.fixture(autouse=True)
def _clean_environment(monkeypatch):
    for name in ("EVLAB_SEED", "EVLAB_WORKERS", "EVLAB_FAMILY", "EVLAB_OUTPUT_DIR", "EVLAB_FORMATS"):
        monkeypatch.delenv(name, raising=False)


def test_registry_covers_every_experiment():
    assert set(REGISTRY) == {
        "clt",
        "que",
        "identity-suite",
        "flow-check",
        "dbm-diagnostics",
        "regularized-compare",
    }
    config = ExperimentConfig(experiment="dbm-diagnostics", n=20, samples=1)
    assert build_experiment(config).name == "dbm-diagnostics"


def test_integer_partitions():
    assert _shapes(1) == [[1]]
    assert sorted(_shapes(4)) == sorted([[4], [3, 1], [2, 2], [2, 1, 1], [1, 1, 1, 1]])


@pytest.mark.slow
def test_clt_reduced_scale():
    record = run_clt(n=200, set_size="N^0.3", samples=400, seed=1)
    assert len(record.rows) == 400
    assert record.summary["set_size"] == 4
    assert record.summary["index"] == 100
    assert set(record.gates) == {"mean", "variance", "fourth_moment", "matching_single_site", "matching_two_sites"}
    assert record.passed, record.gates


def test_clt_single_sample_skips_se_gates():
    record = run_clt(n=20, samples=1)
    assert record.gates == {}
    assert "note" in record.summary
    assert record.passed


@pytest.mark.slow
def test_clt_on_spread_wigner_ensemble_with_random_family():
    record = run_clt(
        n=150, set_size=6, samples=300, ensemble="wigner:uniform", profile_spread=0.3, family="random", seed=5
    )
    assert np.isfinite(record.frame["statistic"]).all()
    assert record.gates["mean"]
    assert record.gates["variance"], record.summary["variance"]


@pytest.mark.slow
@pytest.mark.parametrize(
    "settings",
    [{"index": "edge"}, {"ensemble": "wigner:rademacher"}],
    ids=["goe-edge-index", "rademacher-flat-profile"],
)
def test_clt_moment_gates_hold(settings):
    record = run_clt(n=400, samples=1000, workers=4, seed=11, **settings)
    assert record.summary["set_size"] == 20
    assert {"mean", "variance", "fourth_moment"} <= set(record.gates)
    assert record.gates["mean"], record.summary["moments"]["m1"]
    assert record.gates["variance"], record.summary["variance"]
    assert record.gates["fourth_moment"], record.summary["moments"]["m4"]


@pytest.mark.slow
def test_que_reduced_scale():
    record = run_que(n=300, samples=20, epsilons=[0.2, 0.3], seed=2)
    assert set(record.summary["exceedance"]) == {"0.2", "0.3"}
    assert record.summary["sup_all"]["q1"] >= record.summary["sup_all"]["q0.5"]
    assert record.gates == {"exceedance": True}


@pytest.mark.slow
def test_identity_suite_reduced_scale():
    record = run_identity_suite(n=30, set_size=4, samples=2, seed=3)
    identities = record.summary["identities"]
    assert set(identities) == set(THRESHOLDS)
    failed = {k: v["max_residual"] for k, v in identities.items() if not v["passed"]}
    assert not failed
    assert record.passed


def test_flow_check_reduced_scale():
    record = run_flow_check(n=6, samples=2, seed=4)
    assert record.passed, record.summary["max_residual"]
    assert record.summary["max_residual"]["constant"] == 0.0
    strict = record.summary["max_strict_residual"]
    assert set(strict) == {"g_paired", "g4", "g4_diagonal", "h4", "h4_diagonal"}
    assert all(strict[key] >= record.summary["max_residual"][key] for key in strict)
    assert record.summary["f_matching_verdict"] == "pointwise_half_rate"


@pytest.mark.slow
def test_dbm_diagnostics_ou_reduced_scale():
    record = run_dbm_diagnostics(n=100, samples=10, times=[0.5, 1.0], seed=6)
    assert set(record.summary["medians"]) == {"0.5", "1"}
    assert record.summary["repulsion_threshold"] == pytest.approx(100**-0.2)
    assert record.summary["rigidity_bound"] == pytest.approx(2 * np.log(100))
    assert set(record.summary["rigidity_within_bound"]) == {"0.5", "1"}
    assert record.passed, record.gates


def test_dbm_diagnostics_sde_path_records_every_time():
    record = run_dbm_diagnostics(n=12, samples=2, times=[0.005, 0.01], dbm_method="sde", dt=1e-3, seed=7)
    assert record.summary["method"] == "sde"
    assert len(record.rows) == 2
    assert {"ks@0.005", "ks@0.01"} <= set(record.rows[0])


@pytest.mark.slow
def test_regularized_compare_reduced_scale():
    record = run_regularized_compare(n=400, samples=10, seed=8)
    assert record.summary["window_factor"] == pytest.approx(2 / np.pi * np.arctan(400**0.45 / 2))
    assert set(record.summary["mean_v"]) == {"-2", "-1", "+0", "+1", "+2"}
    assert record.gates == {"domination": True, "agreement": True}


def test_regularized_compare_edge_index_drops_missing_offsets():
    record = run_regularized_compare(n=40, samples=2, index="edge", seed=9)
    assert np.isnan(record.rows[0]["v@-1"])
    assert set(record.summary["mean_v"]) == {"+0", "+1", "+2"}
    assert record.gates["domination"]

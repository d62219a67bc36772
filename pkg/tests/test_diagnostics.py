"""Tests for the empirical local-law, rigidity, QUE and gap diagnostics."""

import numpy as np
import pytest

from rmt.diagnostics import (
    ks_to_semicircle,
    local_law_grid,
    local_law_residual,
    normalized_gaps,
    que_ratio,
    rigidity_bound,
    rigidity_residual,
)
from rmt.ensembles import sample_goe
from rmt.observables import overlaps, psi, random_family
from rmt.semicircle import quantiles


def test_local_law_grid_shape_and_range():
    grid = local_law_grid(100, 0.2, n_e=5, n_eta=4)
    assert len(grid) == 20
    etas = sorted({z.im for z in grid})
    assert etas[0] == pytest.approx(100**-0.8)
    assert etas[-1] == pytest.approx(1.0)
    assert min(z.re for z in grid) == -3.0 and max(z.re for z in grid) == 3.0


@pytest.mark.parametrize("omega", [0.0, 1.0])
def test_local_law_grid_rejects_omega(omega):
    with pytest.raises(ValueError):
        local_law_grid(100, omega)


def test_rigidity_of_exact_quantiles_is_zero():
    assert rigidity_residual(quantiles(50).gammas) == 0.0


def test_normalized_gaps_of_quantiles_are_order_one():
    gaps = normalized_gaps(quantiles(200).gammas)
    assert gaps.shape == (199,)
    assert np.all(gaps > 0)
    assert np.max(gaps) < 10


def test_ks_to_semicircle_of_quantiles_is_small():
    assert ks_to_semicircle(quantiles(500).gammas) <= 1.0 / 500 + 1e-9


def test_goe_diagnostics_at_moderate_size(goe_spectral):
    n = 400
    s = goe_spectral(n)
    assert ks_to_semicircle(s.lambdas) <= 0.05
    grid = local_law_grid(n, 0.5, n_e=5, n_eta=3)
    assert local_law_residual(s, grid) <= 0.2
    assert local_law_residual(s, grid, scaled=True) >= local_law_residual(s, grid) * n ** 0.5 * 0.999


def test_rigidity_bound_grows_with_log_n():
    assert rigidity_bound(100) == pytest.approx(2 * np.log(100))
    assert rigidity_bound(500, factor=1.0) == pytest.approx(np.log(500))


def test_goe_rigidity_within_log_bound_across_seeds():
    n = 200
    residuals = [rigidity_residual(np.linalg.eigvalsh(sample_goe(n, seed=seed).entries)) for seed in range(10)]
    assert max(residuals) <= rigidity_bound(n)
    # a pure power bound N^0.2 sits below the typical value already
    assert np.median(residuals) > n**0.2


@pytest.mark.slow
def test_goe_rigidity_within_log_bound_at_n500():
    n = 500
    residuals = np.array(
        [rigidity_residual(np.linalg.eigvalsh(sample_goe(n, seed=seed).entries)) for seed in range(100)]
    )
    assert np.mean(residuals <= rigidity_bound(n)) >= 0.99


def test_que_ratio_matches_definition(goe_spectral):
    s = goe_spectral(60)
    table = overlaps(s, random_family(60, 6, seed=0))
    expected = np.max(np.abs(table.p)) / psi(0.5, 6, 60)
    assert que_ratio(table, 0.5) == pytest.approx(expected)

"""Tests for the matrix ensembles, the OU interpolation and the DBM integrator."""

import json

import numpy as np
import pytest
from scipy import integrate, stats

from rmt.diagnostics import ks_to_semicircle, normalized_gaps
from rmt.ensembles import (
    EntryDistribution,
    build_variance_profile,
    integrate_dbm,
    ou_interpolate,
    sample_goe,
    sample_wigner,
)
from rmt.spectral import SpectralData, SymmetricMatrix, decompose, orthonormality_residual


def test_flat_profile():
    profile = build_variance_profile(10, 0.0)
    np.testing.assert_array_equal(profile.sigma2, np.full((10, 10), 0.1))
    assert profile.c_lower == profile.c_upper == 1.0


def test_spread_profile_is_balanced_and_symmetric():
    profile = build_variance_profile(50, 0.5, seed=3)
    np.testing.assert_array_equal(profile.sigma2, profile.sigma2.T)
    np.testing.assert_allclose(profile.sigma2.sum(axis=0), 1.0, atol=1e-10)
    assert 0 < profile.c_lower <= profile.c_upper
    assert profile.sigma2.min() * 50 == pytest.approx(profile.c_lower)


@pytest.mark.parametrize("n, spread", [(1, 0.0), (10, 1.0), (10, -0.1)])
def test_profile_rejects_bad_arguments(n, spread):
    with pytest.raises(ValueError):
        build_variance_profile(n, spread)


def test_sample_wigner_is_deterministic():
    profile = build_variance_profile(30, 0.3, seed=1)
    a = sample_wigner(profile, EntryDistribution.UNIFORM, seed=11)
    b = sample_wigner(profile, EntryDistribution.UNIFORM, seed=11)
    np.testing.assert_array_equal(a.entries, b.entries)


def test_sample_wigner_rademacher_moments():
    n = 400
    h = sample_wigner(build_variance_profile(n), EntryDistribution.RADEMACHER, seed=5)
    upper = h.entries[np.triu_indices(n)]
    # Rademacher entries have |h_ij| = 1/√N exactly
    assert np.mean(upper**2) == pytest.approx(1.0 / n, rel=1e-12)
    se = np.std(upper) / np.sqrt(upper.size)
    assert abs(np.mean(upper)) <= 4 * se


def test_entry_distributions_have_unit_variance(rng):
    for distribution in EntryDistribution:
        draws = distribution.draw(rng, 200_000)
        assert np.mean(draws) == pytest.approx(0.0, abs=0.02)
        assert np.var(draws) == pytest.approx(1.0, abs=0.02)


def test_sample_goe_is_deterministic_and_symmetric():
    a = sample_goe(20, seed=9)
    b = sample_goe(20, seed=9)
    np.testing.assert_array_equal(a.entries, b.entries)
    np.testing.assert_array_equal(a.entries, a.entries.T)


def test_sample_goe_diagonal_variance(rng):
    n, samples = 300, 200
    diagonals = np.concatenate([np.diag(sample_goe(n, rng).entries) for _ in range(samples)])
    squares = diagonals**2
    se = np.std(squares) / np.sqrt(squares.size)
    assert abs(np.mean(squares) - 2.0 / n) <= 4 * se


@pytest.mark.slow
def test_sample_goe_spectral_radius():
    s = decompose(sample_goe(1000, seed=2))
    assert abs(max(abs(s.lambdas[0]), abs(s.lambdas[-1])) - 2.0) <= 0.1


def test_ou_interpolate_at_time_zero_returns_input():
    h0 = sample_goe(8, seed=1)
    assert ou_interpolate(h0, 0.0, seed=2) is h0


def test_ou_interpolate_from_zero_is_scaled_goe():
    s = 0.4
    zero = SymmetricMatrix(entries=np.zeros((6, 6)))
    result = ou_interpolate(zero, s, seed=7)
    np.testing.assert_allclose(result.entries, np.sqrt(1 - np.exp(-s)) * sample_goe(6, seed=7).entries, atol=1e-15)


def test_ou_interpolate_entry_variance(rng):
    n, s, samples = 60, 0.5, 100
    h0 = sample_wigner(build_variance_profile(n), EntryDistribution.RADEMACHER, rng)
    noise = np.stack([ou_interpolate(h0, s, rng).entries - np.exp(-s / 2) * h0.entries for _ in range(samples)])
    off = noise[:, np.triu_indices(n, 1)[0], np.triu_indices(n, 1)[1]].ravel() ** 2
    se = np.std(off) / np.sqrt(off.size)
    assert abs(np.mean(off) - (1 - np.exp(-s)) / n) <= 4 * se


def test_ou_interpolate_rejects_negative_time():
    with pytest.raises(ValueError):
        ou_interpolate(sample_goe(3, seed=0), -0.1)


def test_integrate_dbm_zero_noise_follows_drift_ode():
    n, s_end = 5, 0.1
    lambdas0 = np.array([-1.6, -0.7, 0.1, 0.9, 1.8])
    start = SpectralData(lambdas=lambdas0, vectors=np.eye(n))

    def drift(_, lam):
        diff = lam[:, None] - lam[None, :]
        np.fill_diagonal(diff, np.inf)
        return (1.0 / diff).sum(axis=1) / n - lam / 2.0

    oracle = integrate.solve_ivp(drift, (0.0, s_end), lambdas0, rtol=1e-12, atol=1e-12).y[:, -1]
    trajectory = integrate_dbm(start, s_end, dt=1e-5, seed=0, noise_scale=0.0)
    np.testing.assert_allclose(trajectory.states[-1].lambdas, oracle, atol=1e-5)


def test_integrate_dbm_keeps_frame_orthonormal(goe_spectral):
    trajectory = integrate_dbm(goe_spectral(10), 1.0, dt=1e-4, seed=4)
    assert trajectory.times == [0.0, 1.0]
    for state in trajectory.states:
        assert orthonormality_residual(state.vectors) <= 1e-8
        assert np.all(np.diff(state.lambdas) >= 0)


def test_integrate_dbm_snapshots_and_export(goe_spectral, tmp_path):
    trajectory = integrate_dbm(goe_spectral(6), 0.01, dt=1e-3, seed=21, snapshot_times=[0.005, 0.01])
    assert trajectory.times == [0.005, 0.01]
    assert trajectory.seed == 21
    payload = json.loads(trajectory.export(tmp_path / "traj.json").read_text())
    assert set(payload) == {"times", "lambdas", "seed", "dt"}
    assert len(payload["lambdas"]) == 2


@pytest.mark.parametrize("dt, s_end", [(0.0, 0.5), (1e-3, 1.5)])
def test_integrate_dbm_rejects_bad_arguments(goe_spectral, dt, s_end):
    with pytest.raises(ValueError):
        integrate_dbm(goe_spectral(4), s_end, dt=dt)


@pytest.mark.slow
def test_ou_stationarity_from_goe(rng):
    n, samples = 200, 200

    def pooled_gaps(time):
        return np.concatenate(
            [normalized_gaps(decompose(ou_interpolate(sample_goe(n, rng), time, rng)).lambdas) for _ in range(samples)]
        )

    assert stats.ks_2samp(pooled_gaps(0.0), pooled_gaps(0.5)).pvalue > 0.01


@pytest.mark.slow
def test_sde_and_ou_agree_in_law(rng):
    n, s, samples = 200, 0.01, 200
    profile = build_variance_profile(n)
    sde, ou = [], []
    for _ in range(samples):
        h0 = sample_wigner(profile, EntryDistribution.RADEMACHER, rng)
        sde.append(integrate_dbm(decompose(h0), s, dt=1e-4, seed=rng).states[-1].lambdas)
        ou.append(decompose(ou_interpolate(h0, s, rng)).lambdas)
    assert stats.ks_2samp(np.concatenate(sde), np.concatenate(ou)).statistic <= 0.08


@pytest.mark.slow
def test_flat_wigner_spectrum_is_semicircle_at_n1000(rng):
    h = sample_wigner(build_variance_profile(1000), EntryDistribution.RADEMACHER, rng)
    assert ks_to_semicircle(np.linalg.eigvalsh(h.entries)) <= 0.05


@pytest.mark.slow
def test_ou_from_rademacher_start_reaches_semicircle_at_n1000(rng):
    h0 = sample_wigner(build_variance_profile(1000), EntryDistribution.RADEMACHER, rng)
    assert ks_to_semicircle(np.linalg.eigvalsh(ou_interpolate(h0, 1.0, rng).entries)) <= 0.05

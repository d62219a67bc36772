"""Tests for test-vector families, overlaps and the rescaled statistics."""

import numpy as np
import pytest

from rmt.observables import (
    OverlapTable,
    clt_statistic,
    coordinate_family,
    gaussian_matching_target,
    hat_p,
    overlaps,
    overlaps_bruteforce,
    psi,
    random_family,
)
from rmt.spectral import SpectralData


def _table(p: np.ndarray, set_size: int) -> OverlapTable:
    n = p.shape[0]
    family = coordinate_family(n, range(set_size))
    identity = SpectralData(lambdas=np.arange(n, dtype=float), vectors=np.eye(n))
    return OverlapTable.model_construct(family=family, spectral=identity, projections=None, p=p)


def test_coordinate_family_vectors():
    family = coordinate_family(5, [0, 2])
    np.testing.assert_array_equal(family.vectors[:, 0], [1, 0, 0, 0, 0])
    np.testing.assert_array_equal(family.vectors[:, 1], [0, 0, 1, 0, 0])
    assert family.column(2) == 1


def test_full_coordinate_family_has_identity_gram():
    family = coordinate_family(6, range(6))
    np.testing.assert_array_equal(family.vectors.T @ family.vectors, np.eye(6))


@pytest.mark.parametrize("indices", [[1, 1], [0, 5]])
def test_coordinate_family_rejects_bad_indices(indices):
    with pytest.raises(ValueError):
        coordinate_family(5, indices)


def test_random_family_is_orthonormal_and_deterministic():
    single = random_family(10, 1, seed=4)
    assert np.linalg.norm(single.vectors[:, 0]) == pytest.approx(1.0, abs=1e-12)
    full = random_family(12, 12, seed=4)
    assert np.max(np.abs(full.vectors.T @ full.vectors - np.eye(12))) <= 1e-10
    np.testing.assert_array_equal(random_family(12, 3, seed=8).vectors, random_family(12, 3, seed=8).vectors)


def test_random_family_rejects_oversized_request():
    with pytest.raises(ValueError):
        random_family(4, 5)


def test_overlaps_full_family_vanish(goe_spectral):
    s = goe_spectral(8)
    table = overlaps(s, coordinate_family(8, range(8)))
    np.testing.assert_allclose(table.p, 0.0, atol=1e-12)


def test_overlaps_hand_case():
    s = SpectralData(lambdas=[0.0, 1.0], vectors=np.eye(2))
    table = overlaps(s, coordinate_family(2, [0]))
    np.testing.assert_allclose(table.p, [[0.5, 0.0], [0.0, -0.5]])


def test_overlaps_match_bruteforce(goe_spectral):
    s = goe_spectral(30)
    family = random_family(30, 5, seed=1)
    np.testing.assert_allclose(overlaps(s, family).p, overlaps_bruteforce(s, family), atol=1e-12)


def test_overlaps_reject_dimension_mismatch(goe_spectral):
    with pytest.raises(ValueError, match="dimension"):
        overlaps(goe_spectral(6), random_family(5, 2, seed=0))


def test_overlap_trace_and_symmetry(goe_spectral):
    s = goe_spectral(40)
    table = overlaps(s, random_family(40, 7, seed=2))
    np.testing.assert_array_equal(table.p, table.p.T)
    assert abs(np.trace(table.p)) <= 1e-8
    assert np.sum(np.diag(table.p) + 7 / 40) == pytest.approx(7.0, abs=1e-8)


def test_overlaps_depend_only_on_the_span(goe_spectral, rng):
    s = goe_spectral(25)
    family = random_family(25, 4, seed=3)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    rotated = type(family)(labels=family.labels, vectors=family.vectors @ q)
    np.testing.assert_allclose(overlaps(s, family).p, overlaps(s, rotated).p, atol=1e-10)


def test_clt_statistic_values():
    p = np.zeros((100, 100))
    assert clt_statistic(_table(p, 50), 0) == 0.0
    p[3, 3] = 0.1
    assert clt_statistic(_table(p, 50), 3) == pytest.approx(1.0)


def test_clt_statistic_rejects_complex_case():
    with pytest.raises(ValueError, match="beta"):
        clt_statistic(_table(np.zeros((4, 4)), 2), 0, beta=2)


def test_hat_p_values():
    p = np.zeros((100, 100))
    assert hat_p(_table(p, 25), 1, 2) == 0.0
    p[1, 2] = p[2, 1] = 0.05
    assert hat_p(_table(p, 25), 1, 2) == pytest.approx(1.0)


def test_psi_value_and_monotonicity():
    assert psi(0.1, 100, 10_000) == pytest.approx(0.01 + np.sqrt(1e-3))
    assert psi(0.1, 100, 10_000) == pytest.approx(0.04162, abs=1e-5)
    values = [psi(s, 10, 500) for s in np.linspace(0.05, 1.0, 20)]
    assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("s", [0.0, -1.0])
def test_psi_rejects_non_positive_time(s):
    with pytest.raises(ValueError):
        psi(s, 10, 100)


def test_gaussian_matching_target():
    assert gaussian_matching_target(1) == 0.0
    assert gaussian_matching_target(2) == 2.0
    assert gaussian_matching_target(4) == 12.0
    assert gaussian_matching_target(6) == 120.0

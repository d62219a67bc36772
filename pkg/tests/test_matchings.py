"""Tests for particle configurations and the matching-based observables."""

from itertools import permutations
from math import prod

import numpy as np
import pytest

from rmt.matchings import (
    configuration,
    double_factorial,
    enumerate_pair_assignments,
    enumerate_perfect_matchings,
    f_polynomial,
    g4_symmetrized,
    g_polynomial,
    h4_fermionic,
    m_factor,
    move,
    neighbors,
    projection_matrix,
    single_site,
)
from rmt.observables import coordinate_family, overlaps, random_family
from rmt.spectral import SpectralData
from utils.errors import EnumerationLimitError


def test_configuration_drops_empty_sites():
    c = configuration(5, {0: 2, 3: 0, 1: 1})
    assert c.occupancy == ((0, 2), (1, 1))
    assert c.total == 3
    assert str(c) == "{0:2, 1:1}"


@pytest.mark.parametrize("occupancy", [{}, {7: 1}, {0: -1}])
def test_configuration_rejects_invalid_occupancy(occupancy):
    with pytest.raises(ValueError):
        configuration(5, occupancy)


def test_move():
    c = single_site(6, 2, 2)
    moved = move(c, 2, 4)
    assert moved.as_dict() == {2: 1, 4: 1}
    assert move(moved, 4, 2) == c
    assert move(c, 0, 1) is c
    assert move(c, 2, 2) is c


def test_move_rejects_out_of_range_sites():
    with pytest.raises(ValueError):
        move(single_site(3, 0, 1), 0, 3)


def test_neighbors_of_single_particle():
    c = single_site(4, 1, 1)
    assert sorted(n.sites for n in neighbors(c)) == [(0,), (2,), (3,)]


def test_m_factor_values():
    assert m_factor(single_site(4, 0, 1)) == 1
    assert m_factor(configuration(4, {0: 2, 1: 1})) == 3
    assert m_factor(single_site(4, 0, 3)) == 15
    assert double_factorial(-1) == double_factorial(0) == 1
    assert double_factorial(7) == 105


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 3), (3, 15), (4, 105)])
def test_perfect_matching_counts(n, expected):
    matchings = enumerate_perfect_matchings(single_site(3, 0, n))
    assert len(matchings) == expected
    assert len(set(frozenset(frozenset(e) for e in m) for m in matchings)) == expected


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 6), (3, 90)])
def test_pair_assignment_counts(n, expected):
    assignments = enumerate_pair_assignments(single_site(3, 0, n))
    assert len(assignments) == expected
    for sigma in assignments:
        slots = sorted(x for _, pair in sigma for x in pair)
        assert slots == list(range(1, 2 * n + 1))
        assert all(a < b for _, (a, b) in sigma)


def test_enumerations_are_capped():
    with pytest.raises(EnumerationLimitError):
        enumerate_perfect_matchings(single_site(3, 0, 7))
    with pytest.raises(EnumerationLimitError) as info:
        enumerate_pair_assignments(configuration(3, {0: 3, 1: 3}))
    assert info.value.bound == 5


def test_f_single_site_is_power_of_diagonal(goe_spectral):
    s = goe_spectral(12)
    table = overlaps(s, random_family(12, 3, seed=1))
    for n in (1, 2, 3):
        assert f_polynomial(table, single_site(12, 4, n)) == pytest.approx(table.p[4, 4] ** n, rel=1e-12)


def test_f_two_sites_by_hand(goe_spectral):
    s = goe_spectral(10)
    table = overlaps(s, random_family(10, 2, seed=5))
    p = table.p
    value = f_polynomial(table, configuration(10, {1: 1, 6: 1}))
    assert value == pytest.approx(p[1, 1] * p[6, 6] + 2 * p[1, 6] ** 2, rel=1e-12)


def test_f_matches_permutation_bruteforce(goe_spectral):
    s = goe_spectral(20)
    table = overlaps(s, random_family(20, 4, seed=6))
    c = configuration(20, {3: 2, 11: 1})
    sites = [3, 3, 3, 3, 11, 11]
    # every ordering of the 6 vertices read as consecutive pairs; each matching appears 2³·3! times
    total = sum(
        prod(table.p[sites[order[2 * e]], sites[order[2 * e + 1]]] for e in range(3))
        for order in permutations(range(6))
    )
    assert f_polynomial(table, c) == pytest.approx(total / 48 / m_factor(c), abs=1e-12)


def test_f_rejects_mismatched_configuration(goe_spectral):
    table = overlaps(goe_spectral(5), random_family(5, 2, seed=0))
    with pytest.raises(ValueError):
        f_polynomial(table, single_site(6, 0, 1))


def test_g_single_particle(goe_spectral):
    s = goe_spectral(8)
    family = random_family(8, 3, seed=2)
    w = projection_matrix(s, family)
    assert g_polynomial(s, family, [0, 2], single_site(8, 5, 1)) == pytest.approx(w[0, 5] * w[2, 5], rel=1e-12)


def test_g_repeated_label_reduces_to_power(goe_spectral):
    s = goe_spectral(8)
    family = random_family(8, 2, seed=3)
    w = projection_matrix(s, family)
    c = single_site(8, 1, 3)
    assert g_polynomial(s, family, [1] * 6, c) == pytest.approx(w[1, 1] ** 6 / m_factor(c), rel=1e-12)


def test_g_matches_permutation_bruteforce(goe_spectral):
    s = goe_spectral(9)
    family = random_family(9, 6, seed=4)
    w = projection_matrix(s, family)
    c = configuration(9, {2: 2, 7: 1})
    vertex_sites = [2, 2, 7]
    labels = [0, 1, 2, 3, 4, 5]
    mean = np.mean(
        [
            prod(w[labels[order[2 * v]], site] * w[labels[order[2 * v + 1]], site] for v, site in enumerate(vertex_sites))
            for order in permutations(range(6))
        ]
    )
    assert g_polynomial(s, family, labels, c) == pytest.approx(mean / m_factor(c), abs=1e-12)


def test_g_rejects_wrong_label_count(goe_spectral):
    s = goe_spectral(6)
    with pytest.raises(ValueError, match="labels"):
        g_polynomial(s, random_family(6, 4, seed=0), [0, 1, 2], single_site(6, 0, 2))


def test_four_point_observables_vanish_on_disjoint_supports():
    n = 8
    s = SpectralData(lambdas=np.arange(n, dtype=float), vectors=np.eye(n))
    family = coordinate_family(n, [0, 1, 2, 3])
    assert g4_symmetrized(s, family, 0, 1, 2, 3, 5, 6) == 0.0
    assert h4_fermionic(s, family, 0, 1, 2, 3, 5, 6) == 0.0


def test_g4_diagonal_prefactor(goe_spectral):
    s = goe_spectral(10)
    family = random_family(10, 4, seed=7)
    w = projection_matrix(s, family)
    expected = 100 / 3 * w[0, 4] * w[2, 4] * w[1, 4] * w[3, 4]
    assert g4_symmetrized(s, family, 0, 1, 2, 3, 4, 4) == pytest.approx(expected, rel=1e-12)


def test_four_point_symmetries(goe_spectral):
    s = goe_spectral(10)
    family = random_family(10, 4, seed=8)
    g = g4_symmetrized(s, family, 0, 1, 2, 3, 2, 7)
    assert g4_symmetrized(s, family, 1, 0, 3, 2, 2, 7) == pytest.approx(g, rel=1e-12)
    assert g4_symmetrized(s, family, 0, 1, 2, 3, 7, 2) == pytest.approx(g, rel=1e-12)
    h = h4_fermionic(s, family, 0, 1, 2, 3, 2, 7)
    assert h4_fermionic(s, family, 0, 1, 2, 3, 7, 2) == pytest.approx(h, abs=1e-12)
    assert h4_fermionic(s, family, 0, 1, 2, 3, 4, 4) == 0.0


def test_h4_direct_assembly(goe_spectral):
    s = goe_spectral(10)
    family = random_family(10, 4, seed=9)
    w = projection_matrix(s, family)
    a1, a2, b1, b2 = 0, 1, 2, 3
    j, k = 1, 5

    def mom(x1, x2, x3, x4):
        return w[a1, x1] * w[b1, x2] * w[a2, x3] * w[b2, x4]

    z = mom(j, j, k, k) + mom(j, k, j, k) + mom(j, k, k, j) + mom(k, j, j, k) + mom(k, j, k, j) + mom(k, k, j, j)
    y = mom(j, j, k, k) + mom(k, k, j, j)
    expected = 100 / 2 * y - 100 / 6 * z
    assert h4_fermionic(s, family, a1, a2, b1, b2, j, k) == pytest.approx(expected, abs=1e-12)


def test_four_point_observables_reject_repeated_labels(goe_spectral):
    s = goe_spectral(6)
    with pytest.raises(ValueError, match="distinct"):
        g4_symmetrized(s, random_family(6, 4, seed=0), 0, 0, 1, 2, 1, 2)

"""Particle configurations and the matching-based moment observables.

A configuration ξ puts ξ_i particles on site i (an eigenvector index). Two combinatorial
objects are built on it:

- perfect matchings of the doubled vertex set {(i, a) : 1 ≤ a ≤ 2ξ_i}, which define the
  perfect-matching observable f(ξ) from overlaps p_kℓ;
- pair assignments σ sending each undoubled vertex (i, a), 1 ≤ a ≤ ξ_i, to a pair
  σ_1 < σ_2 of label slots, the pairs partitioning ⟦1, 2n⟧; they define the symmetrized
  observable g(ξ) from raw eigenvector projections.

Enumerations are exact and capped: (2n−1)!! matchings, (2n)!/2ⁿ assignments.
"""

from functools import lru_cache
from itertools import permutations
from math import factorial, prod
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from rmt.observables import OverlapTable, TestFamily
from rmt.spectral import SpectralData
from utils.errors import EnumerationLimitError, InvalidInputError

MAX_MATCHING_PARTICLES = 6
MAX_ASSIGNMENT_PARTICLES = 5

Vertex = Tuple[int, int]
Matching = Tuple[Tuple[Vertex, Vertex], ...]
Assignment = Tuple[Tuple[Vertex, Tuple[int, int]], ...]


class ParticleConfiguration(BaseModel):
    """ξ ∈ ℕ^N stored sparsely as sorted (site, multiplicity) pairs."""

    model_config = ConfigDict(frozen=True)

    n_sites: int
    occupancy: Tuple[Tuple[int, int], ...]

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if isinstance(data, dict) and isinstance(data.get("occupancy"), Mapping):
            data = {**data, "occupancy": tuple(sorted(data["occupancy"].items()))}
        return data

    @model_validator(mode="after")
    def _check(self) -> "ParticleConfiguration":
        sites = [site for site, _ in self.occupancy]
        if list(self.occupancy) != sorted(self.occupancy) or len(set(sites)) != len(sites):
            raise InvalidInputError("occupancy must list each site once, sorted")
        for site, multiplicity in self.occupancy:
            if not 0 <= site < self.n_sites:
                raise InvalidInputError(f"site {site} outside [0, {self.n_sites})")
            if multiplicity < 1:
                raise InvalidInputError(f"site {site} has multiplicity {multiplicity} < 1")
        if not self.occupancy:
            raise InvalidInputError("a configuration needs at least one particle")
        return self

    @property
    def total(self) -> int:
        return sum(m for _, m in self.occupancy)

    @property
    def sites(self) -> Tuple[int, ...]:
        return tuple(site for site, _ in self.occupancy)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.occupancy)

    def count(self, site: int) -> int:
        return self.as_dict().get(site, 0)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{site}:{m}" for site, m in self.occupancy) + "}"


def configuration(n_sites: int, occupancy: Mapping[int, int]) -> ParticleConfiguration:
    """Build a configuration from a {site: multiplicity} map, dropping zero entries."""
    cleaned = {int(site): int(m) for site, m in occupancy.items() if m != 0}
    return ParticleConfiguration(n_sites=n_sites, occupancy=tuple(sorted(cleaned.items())))


def single_site(n_sites: int, site: int, n: int) -> ParticleConfiguration:
    """n particles stacked on one site."""
    return configuration(n_sites, {site: n})


def move(c: ParticleConfiguration, i: int, j: int) -> ParticleConfiguration:
    """ξ^{ij}: move one particle from i to j; unchanged when ξ_i = 0 or i = j."""
    for name, site in (("i", i), ("j", j)):
        if not 0 <= site < c.n_sites:
            raise InvalidInputError(f"site {name}={site} outside [0, {c.n_sites})")
    occupancy = c.as_dict()
    if occupancy.get(i, 0) == 0 or i == j:
        return c
    occupancy[i] -= 1
    occupancy[j] = occupancy.get(j, 0) + 1
    return configuration(c.n_sites, occupancy)


def neighbors(c: ParticleConfiguration) -> List[ParticleConfiguration]:
    """All configurations ξ^{kℓ} with k occupied and ℓ ≠ k."""
    return [move(c, k, l) for k in c.sites for l in range(c.n_sites) if l != k]


def double_factorial(m: int) -> int:
    """m!! with (−1)!! = 0!! = 1."""
    if m < -1:
        raise InvalidInputError(f"double factorial undefined for {m}")
    return prod(range(m, 0, -2)) if m > 0 else 1


def m_factor(c: ParticleConfiguration) -> int:
    """ℳ(ξ) = ∏_k (2ξ_k − 1)!!, exact."""
    return prod(double_factorial(2 * m - 1) for _, m in c.occupancy)


def _check_cap(c: ParticleConfiguration, bound: int, what: str) -> None:
    if c.total > bound:
        raise EnumerationLimitError(what, c.total, bound)


@lru_cache(maxsize=None)
def _pairings(n_points: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    # All perfect matchings of {0, …, n_points−1}; first point paired with each other point.
    if n_points == 0:
        return ((),)
    result = []
    for partner in range(1, n_points):
        rest = [x for x in range(1, n_points) if x != partner]
        for sub in _pairings(n_points - 2):
            result.append(((0, partner),) + tuple((rest[a], rest[b]) for a, b in sub))
    return tuple(result)


def doubled_vertices(c: ParticleConfiguration) -> List[Vertex]:
    """𝒱_ξ: vertices (i, a) for 1 ≤ a ≤ 2ξ_i."""
    return [(site, a) for site, m in c.occupancy for a in range(1, 2 * m + 1)]


def particle_vertices(c: ParticleConfiguration) -> List[Vertex]:
    """𝒮_ξ: vertices (i, a) for 1 ≤ a ≤ ξ_i."""
    return [(site, a) for site, m in c.occupancy for a in range(1, m + 1)]


def enumerate_perfect_matchings(c: ParticleConfiguration) -> List[Matching]:
    """Perfect matchings of the complete graph on the doubled vertex set; (2n−1)!! of them."""
    _check_cap(c, MAX_MATCHING_PARTICLES, "perfect matchings")
    vertices = doubled_vertices(c)
    return [tuple((vertices[a], vertices[b]) for a, b in pairing) for pairing in _pairings(len(vertices))]


def enumerate_pair_assignments(c: ParticleConfiguration) -> List[Assignment]:
    """Maps σ from particle vertices to ordered slot pairs σ_1 < σ_2 partitioning ⟦1, 2n⟧."""
    _check_cap(c, MAX_ASSIGNMENT_PARTICLES, "pair assignments")
    vertices = particle_vertices(c)
    n = len(vertices)
    assignments: List[Assignment] = []
    for pairing in _pairings(2 * n):
        slots = [(a + 1, b + 1) for a, b in pairing]
        for order in permutations(range(n)):
            assignments.append(tuple((vertices[v], slots[order[v]]) for v in range(n)))
    return assignments


def _edge_products(table: OverlapTable, c: ParticleConfiguration) -> Iterator[float]:
    for matching in enumerate_perfect_matchings(c):
        yield prod(float(table.p[u[0], v[0]]) for u, v in matching)


def f_polynomial(table: OverlapTable, c: ParticleConfiguration) -> float:
    """ℳ(ξ)⁻¹ Σ_G ∏_{e∈G} p(e), evaluated on one frame."""
    if c.n_sites != table.n:
        raise InvalidInputError(f"configuration has {c.n_sites} sites, table has N={table.n}")
    return float(sum(_edge_products(table, c)) / m_factor(c))


def projection_matrix(s: SpectralData, family: TestFamily) -> np.ndarray:
    """W[a, k] = ⟨q_{labels[a]}, u_k⟩."""
    return family.vectors.T @ s.vectors


def g_polynomial(
    s: SpectralData,
    family: TestFamily,
    labels: Sequence[int],
    c: ParticleConfiguration,
    projections: np.ndarray = None,
) -> float:
    """
    2ⁿ/((2n)! ℳ(ξ)) Σ_σ ∏_{v=(k,a)} ⟨q_{α_σ1(v)}, u_k⟩⟨q_{α_σ2(v)}, u_k⟩, on one frame.

    `labels` lists the 2n family labels α_1 … α_2n filling the slots.
    """
    n = c.total
    if len(labels) != 2 * n:
        raise InvalidInputError(f"{n} particles need {2 * n} labels, got {len(labels)}")
    if c.n_sites != s.n:
        raise InvalidInputError(f"configuration has {c.n_sites} sites, frame has N={s.n}")
    w = projection_matrix(s, family) if projections is None else projections
    rows = [family.column(label) for label in labels]
    total = 0.0
    for sigma in enumerate_pair_assignments(c):
        term = 1.0
        for (site, _), (a, b) in sigma:
            term *= w[rows[a - 1], site] * w[rows[b - 1], site]
        total += term
    return float(2**n * total / (factorial(2 * n) * m_factor(c)))


def _four_point_rows(family: TestFamily, a1: int, a2: int, b1: int, b2: int) -> Tuple[int, int, int, int]:
    labels = (a1, a2, b1, b2)
    if len(set(labels)) != 4:
        raise InvalidInputError(f"four-point observables need pairwise distinct labels, got {labels}")
    return family.column(a1), family.column(b1), family.column(a2), family.column(b2)


def _mom(w: np.ndarray, rows: Tuple[int, int, int, int], x1: int, x2: int, x3: int, x4: int) -> float:
    # ⟨q_α1,u_x1⟩⟨q_β1,u_x2⟩⟨q_α2,u_x3⟩⟨q_β2,u_x4⟩
    r_a1, r_b1, r_a2, r_b2 = rows
    return float(w[r_a1, x1] * w[r_b1, x2] * w[r_a2, x3] * w[r_b2, x4])


def g4_symmetrized(
    s: SpectralData,
    family: TestFamily,
    a1: int,
    a2: int,
    b1: int,
    b2: int,
    j: int,
    k: int,
    projections: np.ndarray = None,
) -> float:
    """
    Symmetrized four-point observable g(j, k) on one frame.

    j = k gives (N²/3)·⟨q_α1,u_k⟩⟨q_β1,u_k⟩⟨q_α2,u_k⟩⟨q_β2,u_k⟩; j ≠ k gives (N²/6)·Z with Z the
    sum over the six placements of two j's and two k's in the four slots.
    """
    rows = _four_point_rows(family, a1, a2, b1, b2)
    w = projection_matrix(s, family) if projections is None else projections
    n = s.n
    if j == k:
        return n**2 / 3.0 * _mom(w, rows, k, k, k, k)
    z = (
        _mom(w, rows, j, j, k, k)
        + _mom(w, rows, j, k, j, k)
        + _mom(w, rows, j, k, k, j)
        + _mom(w, rows, k, j, j, k)
        + _mom(w, rows, k, j, k, j)
        + _mom(w, rows, k, k, j, j)
    )
    return n**2 / 6.0 * z


def h4_fermionic(
    s: SpectralData,
    family: TestFamily,
    a1: int,
    a2: int,
    b1: int,
    b2: int,
    j: int,
    k: int,
    projections: np.ndarray = None,
) -> float:
    """h(j, k) = (N²/2)·Y − g(j, k) with Y = mom(j,j,k,k) + mom(k,k,j,j); h(j, j) = 0."""
    rows = _four_point_rows(family, a1, a2, b1, b2)
    if j == k:
        return 0.0
    w = projection_matrix(s, family) if projections is None else projections
    y = _mom(w, rows, j, j, k, k) + _mom(w, rows, k, k, j, j)
    return s.n**2 / 2.0 * y - g4_symmetrized(s, family, a1, a2, b1, b2, j, k, projections=w)

"""Test-vector families, overlap observables p_kℓ and the scaled statistics built on them."""

from math import prod
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from rmt.spectral import SpectralData
from utils.errors import InvalidInputError
from utils.seeding import SeedLike, as_rng

GRAM_TOL = 1e-10


class TestFamily(BaseModel):
    """Orthonormal family (q_α)_{α∈I}; column a of `vectors` is q_{labels[a]}."""

    __test__ = False  # not a pytest class
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    labels: List[int]
    vectors: np.ndarray

    @field_validator("vectors", mode="before")
    @classmethod
    def _frozen(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float, copy=True)
        if array.ndim == 1:
            array = array[:, None]
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def _check(self) -> "TestFamily":
        n, m = self.vectors.shape
        if not 1 <= m <= n:
            raise InvalidInputError(f"family size must lie in [1, N={n}], got {m}")
        if len(self.labels) != m or len(set(self.labels)) != m:
            raise InvalidInputError("family labels must be distinct, one per vector")
        residual = float(np.max(np.abs(self.vectors.T @ self.vectors - np.eye(m))))
        if residual > GRAM_TOL:
            raise InvalidInputError(f"family is not orthonormal (Gram residual {residual:.3e})")
        return self

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def size(self) -> int:
        return self.vectors.shape[1]

    def column(self, label: int) -> int:
        """Column position of the vector with the given label."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidInputError(f"label {label} not in family") from None


class OverlapTable(BaseModel):
    """All overlaps p_kℓ of a frame against a family, diagonal centred by |I|/N."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    family: TestFamily
    spectral: SpectralData
    projections: np.ndarray
    p: np.ndarray

    @property
    def n(self) -> int:
        return self.p.shape[0]

    @property
    def set_size(self) -> int:
        return self.family.size


def coordinate_family(n: int, indices: Sequence[int]) -> TestFamily:
    """Standard basis vectors e_α for α in `indices` (0-based)."""
    indices = [int(i) for i in indices]
    if len(set(indices)) != len(indices):
        raise InvalidInputError(f"duplicate indices in coordinate family: {indices}")
    if any(not 0 <= i < n for i in indices):
        raise InvalidInputError(f"coordinate indices must lie in [0, {n})")
    vectors = np.zeros((n, len(indices)))
    vectors[indices, np.arange(len(indices))] = 1.0
    return TestFamily(labels=indices, vectors=vectors)


def random_family(n: int, m: int, seed: SeedLike = None) -> TestFamily:
    """m orthonormal vectors from the QR factorization of a Gaussian N×m draw."""
    if not 1 <= m <= n:
        raise InvalidInputError(f"random family size must lie in [1, {n}], got {m}")
    rng = as_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, m)))
    q = q * np.sign(np.diag(r))
    return TestFamily(labels=list(range(m)), vectors=q)


def overlaps(s: SpectralData, family: TestFamily) -> OverlapTable:
    """p_kℓ = Σ_α ⟨q_α,u_k⟩⟨q_α,u_ℓ⟩ − δ_kℓ |I|/N via the |I|×N projection matrix."""
    if family.n != s.n:
        raise InvalidInputError(f"family dimension {family.n} does not match spectral dimension {s.n}")
    projections = family.vectors.T @ s.vectors
    p = projections.T @ projections
    p = 0.5 * (p + p.T)
    p[np.diag_indices(s.n)] -= family.size / s.n
    p.flags.writeable = False
    projections.flags.writeable = False
    return OverlapTable(family=family, spectral=s, projections=projections, p=p)


def overlaps_bruteforce(s: SpectralData, family: TestFamily) -> np.ndarray:
    """Double-loop evaluation of the overlap table."""
    n = s.n
    p = np.zeros((n, n))
    for k in range(n):
        for l in range(n):
            total = 0.0
            for a in range(family.size):
                q = family.vectors[:, a]
                total += float(q @ s.vectors[:, k]) * float(q @ s.vectors[:, l])
            p[k, l] = total - (family.size / n if k == l else 0.0)
    return p


def clt_statistic(table: OverlapTable, k: int, beta: int = 1) -> float:
    """√(βN²/(2|I|)) · p_kk; only the real symmetric case β = 1 is supported."""
    if beta != 1:
        raise InvalidInputError(f"only beta=1 (real symmetric) is supported, got beta={beta}")
    n, m = table.n, table.set_size
    return float(np.sqrt(beta * n**2 / (2.0 * m)) * table.p[k, k])


def hat_p(table: OverlapTable, k: int, l: int) -> float:
    """(N/√|I|) · p_kℓ."""
    return float(table.n / np.sqrt(table.set_size) * table.p[k, l])


def hat_p_matrix(table: OverlapTable) -> np.ndarray:
    """The full rescaled table (N/√|I|) · p."""
    return table.n / np.sqrt(table.set_size) * table.p


def psi(s: float, set_size: int, n: int) -> float:
    """Ψ(s) = |I|/(N^{3/2}s²) + √(|I|/(N²s³))."""
    if s <= 0:
        raise InvalidInputError(f"psi needs s > 0, got {s}")
    return float(set_size / (n**1.5 * s**2) + np.sqrt(set_size / (n**2 * s**3)))


def matching_moment(table: OverlapTable, configuration) -> float:
    """(N/√|I|)^n f(ξ), the rescaled perfect-matching observable of an n-particle configuration."""
    from rmt.matchings import f_polynomial

    n_particles = configuration.total
    return float((table.n / np.sqrt(table.set_size)) ** n_particles * f_polynomial(table, configuration))


def gaussian_matching_target(n_particles: int) -> float:
    """Limit of E[(N/√|I|)^n f(ξ)]: 2^{n/2}(n−1)!! for even n, 0 for odd n."""
    if n_particles % 2:
        return 0.0
    return float(2 ** (n_particles // 2) * prod(range(n_particles - 1, 0, -2)))

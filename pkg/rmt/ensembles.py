"""Samplers for generalized Wigner matrices, GOE, the Ornstein–Uhlenbeck interpolation and Dyson Brownian motion.

Variance conventions: off-diagonal GOE entries have variance 1/N and diagonal entries 2/N, the
stationary law of dH = dB/√N − H/2 ds.
"""

import json
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from rmt.spectral import SpectralData, SymmetricMatrix, fix_signs
from utils.errors import EigenvalueCollisionError, InvalidInputError
from utils.logger import get_logger
from utils.seeding import SeedLike, as_rng

logger = get_logger(__name__)

SINKHORN_TOL = 1e-12
SINKHORN_MAX_ITER = 10_000
COLLISION_GAP = 1e-12
DEFAULT_DT = 1e-4


class EntryDistribution(str, Enum):
    """Normalized entry laws: mean 0, variance 1, all moments finite."""

    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    UNIFORM = "uniform"

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        if self is EntryDistribution.GAUSSIAN:
            return rng.standard_normal(size)
        if self is EntryDistribution.RADEMACHER:
            return rng.choice(np.array([-1.0, 1.0]), size=size)
        # Uniform on [−√3, √3] has unit variance.
        return rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=size)


class VarianceProfile(BaseModel):
    """Symmetric entry variances σ_ij² with unit column sums and c/N ≤ σ_ij² ≤ C/N."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sigma2: np.ndarray
    c_lower: float
    c_upper: float

    @field_validator("sigma2", mode="before")
    @classmethod
    def _check(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float, copy=True)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InvalidInputError(f"variance profile must be square, got shape {array.shape}")
        if not np.array_equal(array, array.T):
            raise InvalidInputError("variance profile must be symmetric")
        if np.max(np.abs(array.sum(axis=0) - 1.0)) > 1e-10:
            raise InvalidInputError("variance profile columns must sum to 1")
        array.flags.writeable = False
        return array

    @property
    def dim(self) -> int:
        return self.sigma2.shape[0]


class DbmTrajectory(BaseModel):
    """Snapshots of a Dyson Brownian motion path."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: List[float]
    states: List[SpectralData]
    seed: Optional[int] = None
    dt: float

    def to_json(self) -> str:
        payload = {
            "times": self.times,
            "lambdas": [state.lambdas.tolist() for state in self.states],
            "seed": self.seed,
            "dt": self.dt,
        }
        return json.dumps(payload)

    def export(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        return path


def _sinkhorn_symmetric(matrix: np.ndarray) -> np.ndarray:
    # Symmetric Sinkhorn–Knopp: scale D A D until every row sums to one.
    d = np.ones(matrix.shape[0])
    for _ in range(SINKHORN_MAX_ITER):
        sums = matrix @ d * d
        if np.max(np.abs(sums - 1.0)) < SINKHORN_TOL:
            break
        d = d / np.sqrt(sums)
    balanced = matrix * np.outer(d, d)
    return 0.5 * (balanced + balanced.T)


def build_variance_profile(n: int, spread: float = 0.0, seed: SeedLike = None) -> VarianceProfile:
    """Random variance profile: entries 1 + spread·u_ij, Sinkhorn-balanced, divided by N."""
    if n < 2:
        raise InvalidInputError(f"variance profile needs N >= 2, got {n}")
    if not 0.0 <= spread < 1.0:
        raise InvalidInputError(f"spread must lie in [0, 1), got {spread}")
    if spread == 0.0:
        return VarianceProfile(sigma2=np.full((n, n), 1.0 / n), c_lower=1.0, c_upper=1.0)

    rng = as_rng(seed)
    u = rng.uniform(-1.0, 1.0, size=(n, n))
    u = np.triu(u) + np.triu(u, 1).T
    base = _sinkhorn_symmetric(1.0 + spread * u) * n
    # Column sums of base/N are one up to the Sinkhorn tolerance; fold the rest into the diagonal.
    base += np.diag(n - base.sum(axis=0))
    c_lower, c_upper = float(base.min()), float(base.max())
    if c_lower <= 0.0:
        raise InvalidInputError(f"spread {spread} too large: lower variance constant {c_lower:.3g} <= 0")
    logger.debug(f"variance profile N={n}, spread={spread}: c={c_lower:.3f}, C={c_upper:.3f}")
    return VarianceProfile(sigma2=base / n, c_lower=c_lower, c_upper=c_upper)


def sample_wigner(profile: VarianceProfile, distribution: EntryDistribution, seed: SeedLike = None) -> SymmetricMatrix:
    """Generalized Wigner sample: independent upper triangle, entry (i,j) with variance σ_ij²."""
    rng = as_rng(seed)
    n = profile.dim
    x = distribution.draw(rng, (n, n))
    upper = np.triu(x * np.sqrt(profile.sigma2))
    return SymmetricMatrix(entries=upper + np.triu(upper, 1).T)


def sample_goe(n: int, seed: SeedLike = None) -> SymmetricMatrix:
    """GOE sample with off-diagonal variance 1/N and diagonal variance 2/N."""
    rng = as_rng(seed)
    a = rng.standard_normal((n, n))
    return SymmetricMatrix(entries=(a + a.T) / np.sqrt(2.0 * n))


def ou_interpolate(h0: SymmetricMatrix, s: float, seed: SeedLike = None) -> SymmetricMatrix:
    """Exact-in-law matrix OU at time s: e^{−s/2} H0 + √(1 − e^{−s}) GOE."""
    if s < 0:
        raise InvalidInputError(f"OU time must be >= 0, got {s}")
    if s == 0:
        return h0
    goe = sample_goe(h0.dim, seed)
    entries = np.exp(-s / 2.0) * h0.entries + np.sqrt(-np.expm1(-s)) * goe.entries
    return SymmetricMatrix(entries=entries)


def _symmetric_increment(rng: np.random.Generator, n: int, dt: float) -> np.ndarray:
    # B_ij (i<j) standard, B_ii/√2 standard.
    a = rng.standard_normal((n, n)) * np.sqrt(dt)
    return (a + a.T) / np.sqrt(2.0)


def _orthonormalize(frame: np.ndarray) -> np.ndarray:
    # Gram–Schmidt through QR, keeping the orientation of each column.
    q, r = np.linalg.qr(frame)
    return q * np.sign(np.diag(r))


def integrate_dbm(
    start: SpectralData,
    s_end: float,
    dt: float = DEFAULT_DT,
    seed: SeedLike = None,
    snapshot_times: Optional[Sequence[float]] = None,
    noise_scale: float = 1.0,
) -> DbmTrajectory:
    """
    Euler–Maruyama integration of the coupled eigenvalue/eigenvector SDEs.

    Both equations share one symmetric Brownian increment per step. The frame is
    re-orthonormalized and the spectrum re-sorted after every step. noise_scale=0 leaves the
    deterministic drift (used by tests against an ODE solver).
    """
    if dt <= 0:
        raise InvalidInputError(f"dt must be positive, got {dt}")
    if not 0 <= s_end <= 1:
        raise InvalidInputError(f"s_end must lie in [0, 1], got {s_end}")
    rng = as_rng(seed)
    recorded_seed = seed if isinstance(seed, int) else None
    n = start.n
    n_steps = int(round(s_end / dt))
    requested = sorted(set(snapshot_times)) if snapshot_times is not None else [0.0, s_end]
    snapshot_steps = {int(round(t / dt)): t for t in requested}

    lambdas = np.array(start.lambdas, dtype=float)
    frame = np.array(start.vectors, dtype=float)
    off_diagonal = ~np.eye(n, dtype=bool)
    times: List[float] = []
    states: List[SpectralData] = []

    def record(step: int) -> None:
        times.append(snapshot_steps[step])
        states.append(SpectralData(lambdas=lambdas.copy(), vectors=fix_signs(frame)))

    if 0 in snapshot_steps:
        record(0)
    logger.debug(f"integrate_dbm: N={n}, steps={n_steps}, dt={dt}")
    for step in range(1, n_steps + 1):
        diff = lambdas[:, None] - lambdas[None, :]
        inv = np.zeros_like(diff)
        inv[off_diagonal] = 1.0 / diff[off_diagonal]
        d_b = noise_scale * _symmetric_increment(rng, n, dt)

        d_lambda = np.diag(d_b) / np.sqrt(n) + (inv.sum(axis=1) / n - lambdas / 2.0) * dt
        # du_k = Σ_ℓ dB_kℓ/(√N(λ_k−λ_ℓ)) u_ℓ − (1/2N) Σ_ℓ dt/(λ_k−λ_ℓ)² u_k
        generator = (d_b * inv).T / np.sqrt(n)
        generator[np.diag_indices(n)] = -(inv**2).sum(axis=1) * dt / (2.0 * n)
        frame = _orthonormalize(frame + frame @ generator)
        lambdas = lambdas + d_lambda

        order = np.argsort(lambdas, kind="stable")
        lambdas, frame = lambdas[order], frame[:, order]
        gaps = np.diff(lambdas)
        if gaps.size and gaps.min() < COLLISION_GAP:
            k = int(np.argmin(gaps))
            raise EigenvalueCollisionError(step * dt, (k, k + 1), float(gaps[k]))
        if step in snapshot_steps:
            record(step)

    return DbmTrajectory(times=times, states=states, seed=recorded_seed, dt=dt)

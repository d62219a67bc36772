"""Semicircle law, its Stieltjes transform, classical locations and the advection characteristics."""

from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import optimize

from rmt.spectral import SpectralPoint
from utils.errors import InvalidInputError

FD_STEP = 1e-5


class Quantiles(BaseModel):
    """Classical eigenvalue locations γ_1 < … < γ_N of the semicircle."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    gammas: np.ndarray

    @field_validator("gammas", mode="before")
    @classmethod
    def _frozen(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float, copy=True)
        array.flags.writeable = False
        return array


def rho_sc(energy):
    """Semicircle density √((4 − E²)₊) / 2π; accepts scalars or arrays."""
    energy = np.asarray(energy, dtype=float)
    density = np.sqrt(np.clip(4.0 - energy**2, 0.0, None)) / (2.0 * np.pi)
    return float(density) if density.ndim == 0 else density


def cumulative(energy: float) -> float:
    """∫_{−2}^{E} ρ_sc, in closed form."""
    if energy <= -2.0:
        return 0.0
    if energy >= 2.0:
        return 1.0
    return float(
        energy * np.sqrt(4.0 - energy**2) / (4.0 * np.pi) + np.arcsin(energy / 2.0) / np.pi + 0.5
    )


def _sqrt_branch(z: complex) -> complex:
    # √(z² − 4) with the branch making z + √(z² − 4) lie in the upper half plane.
    root = np.sqrt(complex(z) ** 2 - 4.0)
    return root if np.imag(z + root) > 0 else -root


def m_sc_complex(z: complex) -> complex:
    """Stieltjes transform of the semicircle at a complex point with Im z > 0."""
    if not np.imag(z) > 0:
        raise InvalidInputError(f"m_sc needs Im z > 0, got {z}")
    return complex((-z + _sqrt_branch(z)) / 2.0)


def m_sc(z: SpectralPoint) -> complex:
    """m_sc(z) = ∫ ρ_sc(x) / (x − z) dx, the root of m² + z m + 1 = 0 in the upper half plane."""
    return m_sc_complex(z.z)


def quantiles(n: int) -> Quantiles:
    """γ_i solving ∫_{−2}^{γ_i} ρ_sc = i/N, i = 1..N, by bracketed root finding."""
    if n < 1:
        raise InvalidInputError(f"quantiles need N >= 1, got {n}")
    gammas = np.empty(n)
    for i in range(1, n + 1):
        target = i / n
        if i == n:
            gammas[i - 1] = 2.0
            continue
        gammas[i - 1] = optimize.brentq(lambda e: cumulative(e) - target, -2.0, 2.0, xtol=1e-15, rtol=1e-15)
    # Exact odd symmetry γ_i = −γ_{N−i}.
    for i in range(1, n):
        j = n - i
        if i < j:
            mean = 0.5 * (gammas[i - 1] - gammas[j - 1])
            gammas[i - 1], gammas[j - 1] = mean, -mean
        elif i == j:
            gammas[i - 1] = 0.0
    return Quantiles(n=n, gammas=gammas)


def quantile_index_scale(i: int, n: int) -> float:
    """N^{-2/3} î^{-1/3} with î = min(i, N + 1 − i) for the 0-based index i."""
    hat_i = min(i + 1, n - i)
    return 1.0 / (n ** (2.0 / 3.0) * hat_i ** (1.0 / 3.0))


def characteristic_complex(z: complex, s: float) -> complex:
    """z_s = ½(e^{s/2}(z + √(z²−4)) + e^{−s/2}(z − √(z²−4)))."""
    if s < 0:
        raise InvalidInputError(f"characteristic time must be >= 0, got {s}")
    if s == 0:
        return complex(z)
    root = _sqrt_branch(z)
    return complex(0.5 * (np.exp(s / 2.0) * (z + root) + np.exp(-s / 2.0) * (z - root)))


def characteristic(z: SpectralPoint, s: float) -> SpectralPoint:
    """The characteristic started at z, evaluated at time s ≥ 0."""
    if s == 0:
        return z
    return SpectralPoint.from_complex(characteristic_complex(z.z, s))


def advection_residual(h0: Callable[[complex], complex], z: SpectralPoint, s: float, step: float = FD_STEP) -> float:
    """
    |∂_s h_s(z) − (m_sc(z) + z/2) ∂_z h_s(z)| for h_s(z) = h0(z_s), by central differences.

    ∂_z is taken along the real axis, which is exact for holomorphic h0.
    """
    zc = z.z

    def h(point: complex, time: float) -> complex:
        return complex(h0(characteristic_complex(point, time)))

    if s >= step:
        d_s = (h(zc, s + step) - h(zc, s - step)) / (2.0 * step)
    else:
        d_s = (-3.0 * h(zc, s) + 4.0 * h(zc, s + step) - h(zc, s + 2.0 * step)) / (2.0 * step)
    d_z = (h(zc + step, s) - h(zc - step, s)) / (2.0 * step)
    return float(abs(d_s - (m_sc_complex(zc) + zc / 2.0) * d_z))

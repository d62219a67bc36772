"""Entry-replacement operator, micro-intervals and the Poisson-regularized observables.

Z(z₁, z₂), v(k, ℓ), v_ℓ(α) and q_ℓℓ are smoothed versions of the overlaps p: every
eigenvalue contributes through a Poisson kernel η/((λ − E)² + η²), and integrating a
kernel over an interval is an arctan difference. The interval centres are the eigenvalues
themselves (`centers="eigenvalues"`); no regularized eigenvalues are constructed.
"""

from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import integrate, linalg

from rmt.observables import OverlapTable, TestFamily, hat_p_matrix, overlaps
from rmt.semicircle import quantile_index_scale
from rmt.spectral import (
    SpectralData,
    SpectralPoint,
    SymmetricMatrix,
    resolvent_matrix,
    resolvent_quadratic,
    stieltjes,
)
from utils.errors import InvalidInputError
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_DELTA2 = 0.05
DEFAULT_EPSILON2 = 0.10


class MicroInterval(BaseModel):
    """I_δ₂(x) = [x ± N^{-δ₂}N^{-2/3}î^{-1/3}] and Î_δ₂(x) of half its width."""

    model_config = ConfigDict(frozen=True)

    center: float
    index: int
    n: int
    half_width: float

    @model_validator(mode="after")
    def _check(self) -> "MicroInterval":
        if not self.half_width > 0:
            raise InvalidInputError(f"micro-interval width must be positive, got {self.half_width}")
        return self

    @property
    def hat_half_width(self) -> float:
        return self.half_width / 2.0

    @property
    def bounds(self) -> Tuple[float, float]:
        return self.center - self.half_width, self.center + self.half_width

    @property
    def hat_bounds(self) -> Tuple[float, float]:
        return self.center - self.hat_half_width, self.center + self.hat_half_width


class RegParams(BaseModel):
    """Regularization exponents; η_k = N^{-ε₂}N^{-2/3}k̂^{-1/3}."""

    model_config = ConfigDict(frozen=True)

    delta2: float = DEFAULT_DELTA2
    epsilon2: float = DEFAULT_EPSILON2
    centers: Literal["eigenvalues"] = "eigenvalues"

    @model_validator(mode="after")
    def _check(self) -> "RegParams":
        if not self.delta2 > 0:
            raise InvalidInputError(f"delta2 must be positive, got {self.delta2}")
        if not self.epsilon2 > self.delta2:
            raise InvalidInputError(f"epsilon2 ({self.epsilon2}) must exceed delta2 ({self.delta2})")
        return self

    def eta(self, i: int, n: int) -> float:
        return n ** (-self.epsilon2) * quantile_index_scale(i, n)


def micro_interval(x: float, i: int, n: int, delta2: float) -> MicroInterval:
    if not 0 <= i < n:
        raise InvalidInputError(f"index {i} outside [0, {n})")
    return MicroInterval(center=x, index=i, n=n, half_width=n ** (-delta2) * quantile_index_scale(i, n))


def theta(m: SymmetricMatrix, a: int, b: int, w: float) -> SymmetricMatrix:
    """Θ_w^{(a,b)} M: the mirrored entries (a,b) and (b,a) replaced by w·m_ab."""
    if not 0.0 <= w <= 1.0:
        raise InvalidInputError(f"w must lie in [0, 1], got {w}")
    for name, index in (("a", a), ("b", b)):
        if not 0 <= index < m.dim:
            raise InvalidInputError(f"index {name}={index} outside [0, {m.dim})")
    entries = np.array(m.entries, copy=True)
    entries[a, b] = w * m.entries[a, b]
    entries[b, a] = entries[a, b]
    return SymmetricMatrix(entries=entries)


def theta_resolvent(m: SymmetricMatrix, a: int, b: int, w: float, z: SpectralPoint) -> np.ndarray:
    """(Θ_w^{(a,b)} M − z)⁻¹."""
    replaced = theta(m, a, b, w)
    return linalg.inv(replaced.entries - z.z * np.eye(m.dim))


def count_eigs(lambdas: np.ndarray, iv: MicroInterval, hat: bool = False) -> int:
    """|{i : λ_i ∈ I}| for the closed interval I (Î if `hat`), by binary search."""
    lo, hi = iv.hat_bounds if hat else iv.bounds
    lambdas = np.asarray(lambdas)
    return int(np.searchsorted(lambdas, hi, side="right") - np.searchsorted(lambdas, lo, side="left"))


def b3_event(lambdas: np.ndarray, k: int, l: int, delta2: float, delta3: float) -> bool:
    """Both 𝒩(I_δ₂(λ_k)) and 𝒩(I_δ₂(λ_ℓ)) are at most N^{δ₃}."""
    n = len(lambdas)
    bound = n**delta3
    return all(count_eigs(lambdas, micro_interval(lambdas[i], i, n, delta2)) <= bound for i in (k, l))


def _poisson(lambdas: np.ndarray, z: complex) -> np.ndarray:
    # Im 1/(λ − z) = η/((λ − E)² + η²)
    return z.imag / ((lambdas - z.real) ** 2 + z.imag**2)


def z_resolvent(s: SpectralData, f: TestFamily, z1: SpectralPoint, z2: SpectralPoint) -> float:
    """
    Z(z₁, z₂) from resolvent quadratic forms and traces:

    |I|⁻¹ Σ_{α,β} Im⟨q_α,G₁q_β⟩ Im⟨q_α,G₂q_β⟩ − 2N⁻¹ Σ_α ⟨q_α, Im G₁ Im G₂ q_α⟩ + N⁻²|I| tr Im G₁ Im G₂.
    """
    n, m = s.n, f.size
    im1 = np.imag(resolvent_matrix(s, z1))
    im2 = np.imag(resolvent_matrix(s, z2))
    q = f.vectors
    first = float(np.sum((q.T @ im1 @ q) * (q.T @ im2 @ q))) / m
    product = im1 @ im2
    second = -2.0 / n * float(np.trace(q.T @ product @ q))
    third = m / n**2 * float(np.trace(product))
    return first + second + third


def z_spectral(t: OverlapTable, lambdas: np.ndarray, z1: SpectralPoint, z2: SpectralPoint) -> float:
    """|I|⁻¹ Σ_{i,j} K_i(z₁) K_j(z₂) p_ij², K the Poisson kernel."""
    lambdas = np.asarray(lambdas, dtype=float)
    k1 = _poisson(lambdas, z1.z)
    k2 = _poisson(lambdas, z2.z)
    return float(k1 @ (t.p**2) @ k2) / t.set_size


def _arctan_masses(lambdas: np.ndarray, iv: MicroInterval, eta: float) -> np.ndarray:
    # ∫_Î η/((λ_i − E)² + η²) dE for every i
    lo, hi = iv.hat_bounds
    return np.arctan((hi - lambdas) / eta) - np.arctan((lo - lambdas) / eta)


def _index_masses(s: SpectralData, k: int, params: RegParams) -> np.ndarray:
    iv = micro_interval(float(s.lambdas[k]), k, s.n, params.delta2)
    return _arctan_masses(s.lambdas, iv, params.eta(k, s.n))


def v_from_table(t: OverlapTable, k: int, l: int, params: RegParams) -> float:
    s = t.spectral
    hat = hat_p_matrix(t)
    return float(_index_masses(s, k, params) @ (hat**2) @ _index_masses(s, l, params)) / np.pi**2


def v_observable(s: SpectralData, f: TestFamily, k: int, l: int, params: Optional[RegParams] = None) -> float:
    """
    v(k, ℓ) = N²/π² ∫_{Î(λ_k)} ∫_{Î(λ_ℓ)} Z(E₁ + iη_k, E₂ + iη_ℓ) dE₁ dE₂.

    The double integral factorizes per (i, j) into arctan differences, so
    v = π⁻² Σ_{i,j} hat_p_ij² A_i(k) A_j(ℓ) with A_i(k) the kernel mass of λ_i over Î(λ_k).
    """
    return v_from_table(overlaps(s, f), k, l, params or RegParams())


def window_factor(n: int, params: Optional[RegParams] = None) -> float:
    """(2/π)·arctan(N^{ε₂−δ₂}/2): the kernel mass of λ_k over its own Î(λ_k)."""
    params = params or RegParams()
    return float(2.0 / np.pi * np.arctan(n ** (params.epsilon2 - params.delta2) / 2.0))


def domination_margin(s: SpectralData, f: TestFamily, k: int, l: int, params: Optional[RegParams] = None) -> float:
    """v(k, ℓ) − window_factor²·hat_p_kℓ²; nonnegative since the (k, ℓ) term is one summand of v."""
    params = params or RegParams()
    t = overlaps(s, f)
    own = window_factor(s.n, params) ** 2 * float(hat_p_matrix(t)[k, l] ** 2)
    margin = v_from_table(t, k, l, params) - own
    if margin < 0:
        logger.warning(f"negative domination margin {margin:.3e} at (k, l)=({k}, {l})")
    return margin


def v_entry(s: SpectralData, f: TestFamily, l: int, alpha: int, params: Optional[RegParams] = None) -> float:
    """v_ℓ(α) = π⁻¹ ∫_{Î(λ_ℓ)} Im(⟨q_α,G q_α⟩ − m_N) dE, exactly: π⁻¹ Σ_k (⟨q_α,u_k⟩² − 1/N) A_k(ℓ)."""
    params = params or RegParams()
    q = f.vectors[:, f.column(alpha)]
    weights = (s.vectors.T @ q) ** 2 - 1.0 / s.n
    return float(weights @ _index_masses(s, l, params)) / np.pi


def q_ll(s: SpectralData, f: TestFamily, l: int, params: Optional[RegParams] = None) -> float:
    """(N/√|I|) Σ_α v_ℓ(α)."""
    params = params or RegParams()
    total = sum(v_entry(s, f, l, alpha, params) for alpha in f.labels)
    return float(s.n / np.sqrt(f.size) * total)


def v_observable_quadrature(s: SpectralData, f: TestFamily, k: int, l: int, params: Optional[RegParams] = None) -> float:
    """v(k, ℓ) by adaptive 2-D quadrature of z_spectral over Î(λ_k) × Î(λ_ℓ)."""
    params = params or RegParams()
    t = overlaps(s, f)
    eta_k, eta_l = params.eta(k, s.n), params.eta(l, s.n)
    lo1, hi1 = micro_interval(float(s.lambdas[k]), k, s.n, params.delta2).hat_bounds
    lo2, hi2 = micro_interval(float(s.lambdas[l]), l, s.n, params.delta2).hat_bounds

    def integrand(e2: float, e1: float) -> float:
        return z_spectral(t, s.lambdas, SpectralPoint(re=e1, im=eta_k), SpectralPoint(re=e2, im=eta_l))

    value, _ = integrate.dblquad(integrand, lo1, hi1, lo2, hi2, epsabs=0.0, epsrel=1e-11)
    return float(s.n**2 / np.pi**2 * value)


def v_entry_quadrature(s: SpectralData, f: TestFamily, l: int, alpha: int, params: Optional[RegParams] = None) -> float:
    """v_ℓ(α) by adaptive quadrature of the resolvent integrand."""
    params = params or RegParams()
    q = f.vectors[:, f.column(alpha)]
    eta = params.eta(l, s.n)
    lo, hi = micro_interval(float(s.lambdas[l]), l, s.n, params.delta2).hat_bounds

    def integrand(energy: float) -> float:
        z = SpectralPoint(re=energy, im=eta)
        return float(np.imag(resolvent_quadratic(s, q, q, z) - stieltjes(s, z)))

    value, _ = integrate.quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)
    return float(value / np.pi)

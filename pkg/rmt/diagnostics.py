"""Empirical versions of the local-law, rigidity, QUE and level-repulsion estimates."""

from typing import List

import numpy as np
from scipy import stats

from rmt.observables import OverlapTable, psi
from rmt.semicircle import cumulative, m_sc, quantile_index_scale, quantiles
from rmt.spectral import SpectralData, SpectralPoint, stieltjes
from utils.errors import InvalidInputError

_cumulative = np.vectorize(cumulative, otypes=[float])

# The sup over N indices grows like log N at accessible sizes, not like a power of N
RIGIDITY_LOG_FACTOR = 2.0


def local_law_grid(n: int, omega: float, n_e: int = 9, n_eta: int = 5, e_max: float = 3.0) -> List[SpectralPoint]:
    """Points of 𝒟_ω: E on a uniform grid of [−e_max, e_max], η log-spaced in [N^{-1+ω}, 1]."""
    if not 0 < omega < 1:
        raise InvalidInputError(f"omega must lie in (0, 1), got {omega}")
    energies = np.linspace(-e_max, e_max, n_e)
    etas = np.geomspace(n ** (-1.0 + omega), 1.0, n_eta)
    return [SpectralPoint(re=float(e), im=float(eta)) for e in energies for eta in etas]


def local_law_residual(s: SpectralData, z_grid: List[SpectralPoint], scaled: bool = False) -> float:
    """max_z |m_N(z) − m_sc(z)|; with `scaled`, each residual is multiplied by Nη first."""
    residuals = []
    for z in z_grid:
        diff = abs(stieltjes(s, z) - m_sc(z))
        residuals.append(diff * s.n * z.im if scaled else diff)
    return float(max(residuals))


def rigidity_residual(lambdas: np.ndarray) -> float:
    """max_k |λ_k − γ_k| N^{2/3} k̂^{1/3}."""
    lambdas = np.asarray(lambdas, dtype=float)
    n = len(lambdas)
    gammas = quantiles(n).gammas
    scale = np.array([quantile_index_scale(i, n) for i in range(n)])
    return float(np.max(np.abs(lambdas - gammas) / scale))


def rigidity_bound(n: int, factor: float = RIGIDITY_LOG_FACTOR) -> float:
    """Tolerance for rigidity_residual at size N: factor · log N."""
    return float(factor * np.log(n))


def normalized_gaps(lambdas: np.ndarray) -> np.ndarray:
    """(λ_{i+1} − λ_i) N^{2/3} î^{1/3} for i = 0 … N−2."""
    lambdas = np.asarray(lambdas, dtype=float)
    n = len(lambdas)
    scale = np.array([quantile_index_scale(i, n) for i in range(n - 1)])
    return np.diff(lambdas) / scale


def ks_to_semicircle(lambdas: np.ndarray) -> float:
    """Kolmogorov–Smirnov distance between the empirical spectral distribution and ρ_sc."""
    return float(stats.kstest(np.asarray(lambdas, dtype=float), _cumulative).statistic)


def que_ratio(t: OverlapTable, s: float) -> float:
    """sup_{k,ℓ} |p_kℓ| / Ψ(s)."""
    return float(np.max(np.abs(t.p)) / psi(s, t.set_size, t.n))

"""Deterministic identities of the spectral, semicircle, greenreg and matchings layers, checked on random instances."""

from itertools import combinations_with_replacement
from math import factorial
from typing import Any, Callable, Dict, List

import numpy as np
from scipy import integrate, linalg

from experiments.base import Experiment, Row
from rmt import greenreg, matchings
from rmt.observables import overlaps, random_family
from rmt.semicircle import (
    advection_residual,
    characteristic_complex,
    cumulative,
    m_sc,
    quantiles,
    rho_sc,
)
from rmt.spectral import (
    SpectralData,
    SpectralPoint,
    SymmetricMatrix,
    decompose,
    green_derivative,
    orthonormality_residual,
    reconstruction_residual,
    resolvent_matrix,
    resolvent_quadratic,
    stieltjes,
    ward_residual,
)

# identity -> largest admissible residual
THRESHOLDS: Dict[str, float] = {
    "reconstruction": 1e-9,
    "orthonormality": 1e-10,
    "resolvent_dense_inverse": 1e-9,
    "stieltjes_trace": 1e-12,
    "ward": 1e-9,
    "green_derivative": 1e-5,
    "key_identity": 1e-9,
    "quantile_integral": 1e-10,
    "quantile_symmetry": 1e-10,
    "cumulative_quadrature": 1e-10,
    "m_sc_quadratic": 1e-12,
    "m_sc_quadrature": 1e-8,
    "advection": 1e-6,
    "characteristic": 0.0,
    "theta": 1e-14,
    "count_eigs": 0.0,
    "v_quadrature": 1e-8,
    "v_entry_quadrature": 1e-9,
    "domination": 1e-12,
    "single_site_reduction": 1e-12,
    "matching_counts": 0.0,
    "single_eigenvalue": 1e-15,
}

POINTS_PER_CHECK = 4
FD_STEP = 1e-5


def _random_point(rng: np.random.Generator, e_max: float = 2.5, eta_range=(0.05, 1.0)) -> SpectralPoint:
    eta = float(np.exp(rng.uniform(np.log(eta_range[0]), np.log(eta_range[1]))))
    return SpectralPoint(re=float(rng.uniform(-e_max, e_max)), im=eta)


def _unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


class IdentitySuite(Experiment):
    """
    Every row is one random instance at the configured N; each column is the residual of
    one identity on that instance. The summary reports the worst residual per identity.
    """

    name = "identity-suite"

    def sample(self, index: int, rng: np.random.Generator) -> Row:
        h = self.draw_matrix(rng)
        s = decompose(h)
        checks: Dict[str, Callable[[], float]] = {
            "reconstruction": lambda: reconstruction_residual(s, h),
            "orthonormality": lambda: orthonormality_residual(s.vectors),
            "resolvent_dense_inverse": lambda: self._dense_inverse(s, h, rng),
            "stieltjes_trace": lambda: self._stieltjes_trace(s, rng),
            "ward": lambda: max(ward_residual(s, int(rng.integers(s.n)), _random_point(rng)) for _ in range(POINTS_PER_CHECK)),
            "green_derivative": lambda: self._green_derivative(s, h, rng),
            "key_identity": lambda: self._key_identity(s, rng),
            "quantile_integral": lambda: self._quantile_integral(s.n),
            "quantile_symmetry": lambda: self._quantile_symmetry(s.n),
            "cumulative_quadrature": lambda: self._cumulative_quadrature(rng),
            "m_sc_quadratic": lambda: self._m_sc_quadratic(rng),
            "m_sc_quadrature": lambda: self._m_sc_quadrature(rng),
            "advection": lambda: self._advection(rng),
            "characteristic": lambda: self._characteristic(rng),
            "theta": lambda: self._theta(h, rng),
            "count_eigs": lambda: self._count_eigs(s, rng),
            "v_quadrature": lambda: self._v_quadrature(s, rng),
            "v_entry_quadrature": lambda: self._v_entry_quadrature(s, rng),
            "domination": lambda: self._domination(s, rng),
            "single_site_reduction": lambda: self._single_site(s, rng),
            "matching_counts": self._matching_counts,
            "single_eigenvalue": self._single_eigenvalue,
        }
        return {key: float(check()) for key, check in checks.items()}

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        report = {}
        for key, threshold in THRESHOLDS.items():
            worst = float(np.max(self.column(rows, key)))
            report[key] = {"max_residual": worst, "threshold": threshold, "passed": worst <= threshold}
        return {"instances": len(rows), "n": self.config.n, "identities": report}

    def gates(self, summary: Dict[str, Any]) -> Dict[str, bool]:
        return {key: entry["passed"] for key, entry in summary["identities"].items()}

    # spectral

    def _dense_inverse(self, s: SpectralData, h: SymmetricMatrix, rng: np.random.Generator) -> float:
        worst = 0.0
        for _ in range(POINTS_PER_CHECK):
            z = _random_point(rng)
            dense = linalg.inv(h.entries - z.z * np.eye(s.n))
            q1, q2 = _unit_vector(rng, s.n), _unit_vector(rng, s.n)
            diagonal = q1 @ dense @ q1
            worst = max(worst, abs(resolvent_quadratic(s, q1, q1, z) - diagonal) / abs(diagonal))
            dense_form = q1 @ dense @ q2
            norm = float(np.linalg.norm(dense, 2))
            worst = max(worst, abs(resolvent_quadratic(s, q1, q2, z) - dense_form) / norm)
        return worst

    def _stieltjes_trace(self, s: SpectralData, rng: np.random.Generator) -> float:
        z = _random_point(rng)
        trace = np.trace(resolvent_matrix(s, z)) / s.n
        m = stieltjes(s, z)
        return abs(m - trace) / abs(m)

    def _green_derivative(self, s: SpectralData, h: SymmetricMatrix, rng: np.random.Generator) -> float:
        worst = 0.0
        n = s.n
        for _ in range(POINTS_PER_CHECK):
            z = _random_point(rng, eta_range=(0.1, 1.0))
            a, b = (int(x) for x in rng.integers(n, size=2))
            i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
            direction = np.zeros((n, n))
            direction[i, j] = direction[j, i] = 1.0
            shifted = lambda t: linalg.inv(h.entries + t * direction - z.z * np.eye(n))[a, b]  # noqa: E731
            numeric = (shifted(FD_STEP) - shifted(-FD_STEP)) / (2.0 * FD_STEP)
            exact = green_derivative(s, a, b, i, j, z)
            g = resolvent_matrix(s, z)
            scale = abs(g[a, i] * g[j, b]) + abs(g[a, j] * g[i, b])
            worst = max(worst, abs(numeric - exact) / max(scale, 1e-300))
        return worst

    # greenreg

    def _key_identity(self, s: SpectralData, rng: np.random.Generator) -> float:
        family = random_family(s.n, self.config.resolved_set_size, rng)
        table = overlaps(s, family)
        worst = 0.0
        for _ in range(POINTS_PER_CHECK):
            z1 = _random_point(rng, e_max=2.0, eta_range=(1e-3, 1e-1))
            z2 = _random_point(rng, e_max=2.0, eta_range=(1e-3, 1e-1))
            spectral = greenreg.z_spectral(table, s.lambdas, z1, z2)
            resolvent = greenreg.z_resolvent(s, family, z1, z2)
            worst = max(worst, abs(resolvent - spectral) / (1.0 + abs(spectral)))
        return worst

    def _theta(self, h: SymmetricMatrix, rng: np.random.Generator) -> float:
        n = h.dim
        a, b = (int(x) for x in rng.integers(n, size=2))
        w = float(rng.uniform())
        identity = float(np.max(np.abs(greenreg.theta(h, a, b, 1.0).entries - h.entries)))
        affine = w * greenreg.theta(h, a, b, 1.0).entries + (1.0 - w) * greenreg.theta(h, a, b, 0.0).entries
        linear = float(np.max(np.abs(greenreg.theta(h, a, b, w).entries - affine)))
        return max(identity, linear)

    def _count_eigs(self, s: SpectralData, rng: np.random.Generator) -> float:
        mismatches = 0
        for _ in range(POINTS_PER_CHECK):
            i = int(rng.integers(s.n))
            iv = greenreg.micro_interval(float(rng.uniform(-2.2, 2.2)), i, s.n, float(rng.uniform(-1.0, 0.5)))
            lo, hi = iv.bounds
            scan = sum(1 for lam in s.lambdas if lo <= lam <= hi)
            mismatches += int(greenreg.count_eigs(s.lambdas, iv) != scan)
        return float(mismatches)

    def _v_quadrature(self, s: SpectralData, rng: np.random.Generator) -> float:
        family = random_family(s.n, self.config.resolved_set_size, rng)
        k, l = (int(x) for x in rng.integers(s.n, size=2))
        exact = greenreg.v_observable(s, family, k, l)
        numeric = greenreg.v_observable_quadrature(s, family, k, l)
        return abs(exact - numeric) / max(abs(exact), 1e-12)

    def _v_entry_quadrature(self, s: SpectralData, rng: np.random.Generator) -> float:
        family = random_family(s.n, self.config.resolved_set_size, rng)
        l = int(rng.integers(s.n))
        alpha = int(rng.choice(family.labels))
        exact = greenreg.v_entry(s, family, l, alpha)
        numeric = greenreg.v_entry_quadrature(s, family, l, alpha)
        return abs(exact - numeric) / max(abs(exact), 1e-8)

    def _domination(self, s: SpectralData, rng: np.random.Generator) -> float:
        family = random_family(s.n, self.config.resolved_set_size, rng)
        worst = 0.0
        for _ in range(POINTS_PER_CHECK):
            k, l = (int(x) for x in rng.integers(s.n, size=2))
            v = greenreg.v_observable(s, family, k, l)
            margin = greenreg.domination_margin(s, family, k, l)
            worst = max(worst, -v, -margin)
        return worst

    # semicircle

    def _quantile_integral(self, n: int) -> float:
        gammas = quantiles(n).gammas
        return max(abs(cumulative(g) - (i + 1) / n) for i, g in enumerate(gammas))

    def _quantile_symmetry(self, n: int) -> float:
        gammas = quantiles(n).gammas
        worst = max((abs(gammas[i - 1] + gammas[n - i - 1]) for i in range(1, n)), default=0.0)
        if n % 2 == 0:
            worst = max(worst, abs(gammas[n // 2 - 1]))
        return worst

    def _cumulative_quadrature(self, rng: np.random.Generator) -> float:
        energy = float(rng.uniform(-2.0, 2.0))
        numeric, _ = integrate.quad(rho_sc, -2.0, energy, epsabs=1e-14, epsrel=1e-13, limit=200)
        return abs(cumulative(energy) - numeric)

    def _m_sc_quadratic(self, rng: np.random.Generator) -> float:
        worst = 0.0
        for _ in range(POINTS_PER_CHECK):
            z = _random_point(rng, e_max=4.0, eta_range=(1e-3, 10.0))
            m = m_sc(z)
            worst = max(worst, abs(m * m + z.z * m + 1.0))
        return worst

    def _m_sc_quadrature(self, rng: np.random.Generator) -> float:
        z = _random_point(rng, eta_range=(0.1, 1.0))
        real, _ = integrate.quad(lambda x: rho_sc(x) * np.real(1.0 / (x - z.z)), -2.0, 2.0, epsabs=1e-13, limit=400)
        imag, _ = integrate.quad(lambda x: rho_sc(x) * np.imag(1.0 / (x - z.z)), -2.0, 2.0, epsabs=1e-13, limit=400)
        exact = m_sc(z)
        return abs(exact - complex(real, imag)) / abs(exact)

    def _advection(self, rng: np.random.Generator) -> float:
        poles = rng.uniform(-2.0, 2.0, size=3) - 1j * rng.uniform(0.5, 2.0, size=3)
        weights = rng.uniform(-1.0, 1.0, size=3)
        field = lambda z: complex(np.sum(weights / (poles - z)))  # noqa: E731
        worst = 0.0
        for _ in range(POINTS_PER_CHECK):
            z = _random_point(rng, e_max=3.0, eta_range=(0.1, 1.0))
            worst = max(worst, advection_residual(field, z, float(rng.uniform(0.0, 1.0))))
        return worst

    def _characteristic(self, rng: np.random.Generator) -> float:
        z = _random_point(rng, e_max=3.0, eta_range=(1e-3, 1.0))
        violations = int(characteristic_complex(z.z, 0.0) != z.z)
        heights = [characteristic_complex(z.z, t).imag for t in np.linspace(0.0, 1.0, 21)]
        violations += sum(1 for lower, upper in zip(heights, heights[1:]) if not upper > lower)
        return float(violations)

    # matchings

    def _single_site(self, s: SpectralData, rng: np.random.Generator) -> float:
        table = overlaps(s, random_family(s.n, self.config.resolved_set_size, rng))
        worst = 0.0
        for n_particles in range(1, 5):
            k = int(rng.integers(s.n))
            c = matchings.single_site(s.n, k, n_particles)
            worst = max(worst, abs(matchings.f_polynomial(table, c) - table.p[k, k] ** n_particles))
        return worst

    def _matching_counts(self) -> float:
        mismatches = 0
        for n_particles in range(1, 6):
            for shape in _shapes(n_particles):
                c = matchings.configuration(len(shape), dict(enumerate(shape)))
                expected = matchings.double_factorial(2 * n_particles - 1)
                mismatches += int(len(matchings.enumerate_perfect_matchings(c)) != expected)
                if n_particles <= 4:
                    expected = factorial(2 * n_particles) // 2**n_particles
                    mismatches += int(len(matchings.enumerate_pair_assignments(c)) != expected)
        return float(mismatches)

    def _single_eigenvalue(self) -> float:
        x = 0.7
        s = decompose(SymmetricMatrix(entries=[[x]]))
        errors = [abs(s.lambdas[0] - x), abs(s.vectors[0, 0] - 1.0)]
        zero = decompose(SymmetricMatrix(entries=[[0.0]]))
        e1 = np.array([1.0])
        errors.append(abs(resolvent_quadratic(zero, e1, e1, SpectralPoint(re=0.0, im=1.0)) - 1j))
        family = random_family(1, 1, 0)
        point = SpectralPoint(re=0.1, im=0.2)
        errors.append(abs(greenreg.z_resolvent(zero, family, point, point)))
        errors.append(abs(greenreg.v_entry(zero, family, 0, 0)))
        return float(max(errors))


def _shapes(n_particles: int) -> List[List[int]]:
    """Integer partitions of n, largest part first."""
    shapes = set()
    for size in range(1, n_particles + 1):
        for parts in combinations_with_replacement(range(1, n_particles + 1), size):
            if sum(parts) == n_particles:
                shapes.add(tuple(sorted(parts, reverse=True)))
    return [list(shape) for shape in sorted(shapes)]

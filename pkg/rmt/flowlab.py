"""Rotation generator X_kℓ, the Dyson generator by finite differences, and flow right-hand sides.

The eigenvector diffusion has generator L = ½ Σ_{k<ℓ} X_kℓ² / (N(λ_k − λ_ℓ)²), where X_kℓ
generates the plane rotation of (u_k, u_ℓ). X_kℓ² F is the second θ-derivative of F along
that rotation, so L F is computed from central second differences on rotated frames and
compared against each flow equation's right-hand side assembled from pointwise values.
"""

from enum import Enum
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from rmt import matchings
from rmt.matchings import ParticleConfiguration, move
from rmt.observables import TestFamily, overlaps, random_family
from rmt.spectral import SpectralData
from utils.errors import InvalidInputError, MissingValueError
from utils.logger import get_logger
from utils.seeding import SeedLike, as_rng

logger = get_logger(__name__)

DEFAULT_STEP = 1e-4
MIN_STEP = 1e-6
MAX_STEP = 1e-3
MIN_GAP = 0.1

Pair = Tuple[int, int]


class FlowKind(str, Enum):
    F_MATCHING = "f_matching"
    G_PAIRED = "g_paired"
    G4 = "g4"
    H4 = "h4"
    CONSTANT = "constant"


class FlowObservable(BaseModel):
    """
    A frame functional bound to its configuration or index pair.

    f_matching and g_paired are bound to a particle configuration (g_paired also to
    2n family labels); g4 and h4 to four distinct labels (α1, α2, β1, β2) and a pair (j, k).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: FlowKind
    family: Optional[TestFamily] = None
    configuration: Optional[ParticleConfiguration] = None
    labels: Tuple[int, ...] = ()
    pair: Optional[Pair] = None
    constant: float = 1.0

    def evaluate(self, s: SpectralData) -> float:
        if self.kind is FlowKind.CONSTANT:
            return self.constant
        if self.kind is FlowKind.F_MATCHING:
            return matchings.f_polynomial(overlaps(s, self.family), self.configuration)
        if self.kind is FlowKind.G_PAIRED:
            return matchings.g_polynomial(s, self.family, self.labels, self.configuration)
        a1, a2, b1, b2 = self.labels
        j, k = self.pair
        if self.kind is FlowKind.G4:
            return matchings.g4_symmetrized(s, self.family, a1, a2, b1, b2, j, k)
        return matchings.h4_fermionic(s, self.family, a1, a2, b1, b2, j, k)

    def rebind(self, key: Hashable) -> "FlowObservable":
        """The same observable family at another configuration or index pair."""
        if self.kind in (FlowKind.G4, FlowKind.H4):
            return self.model_copy(update={"pair": tuple(key)})
        return self.model_copy(update={"configuration": key})

    @property
    def key(self) -> Hashable:
        if self.kind in (FlowKind.G4, FlowKind.H4):
            return self.pair
        return self.configuration


def rotate_pair(s: SpectralData, k: int, l: int, theta: float) -> SpectralData:
    """u_k ← cos θ u_k − sin θ u_ℓ, u_ℓ ← sin θ u_k + cos θ u_ℓ; eigenvalues and signs untouched."""
    if k == l:
        raise InvalidInputError("rotate_pair needs two distinct indices")
    for name, index in (("k", k), ("l", l)):
        if not 0 <= index < s.n:
            raise InvalidInputError(f"index {name}={index} outside [0, {s.n})")
    c, sn = np.cos(theta), np.sin(theta)
    frame = np.array(s.vectors, copy=True)
    u_k, u_l = s.vectors[:, k], s.vectors[:, l]
    frame[:, k] = c * u_k - sn * u_l
    frame[:, l] = sn * u_k + c * u_l
    return SpectralData(lambdas=s.lambdas, vectors=frame)


def _second_difference(func: Callable[[SpectralData], float], s: SpectralData, k: int, l: int, h: float, f0: float) -> float:
    return (func(rotate_pair(s, k, l, h)) - 2.0 * f0 + func(rotate_pair(s, k, l, -h))) / h**2


def _check_step(h: float) -> None:
    if not MIN_STEP <= h <= MAX_STEP:
        raise InvalidInputError(f"finite-difference step must lie in [{MIN_STEP}, {MAX_STEP}], got {h}")


def apply_generator_sq(o: FlowObservable, s: SpectralData, k: int, l: int, h: float = DEFAULT_STEP) -> float:
    """(F(h) − 2F(0) + F(−h))/h² for F(θ) = o(rotate_pair(s, k, l, θ)) ≈ X_kℓ² o."""
    _check_step(h)
    return _second_difference(o.evaluate, s, k, l, h, o.evaluate(s))


def _weight(lambdas: np.ndarray, n: int, k: int, l: int) -> float:
    return 1.0 / (n * (lambdas[k] - lambdas[l]) ** 2)


def _value(values: Mapping, key) -> float:
    try:
        return float(values[key])
    except KeyError:
        raise MissingValueError(key) from None


def _pair_value(values: Mapping[Pair, float], a: int, b: int) -> float:
    # Pair observables are symmetric in (j, k); accept either orientation.
    if (a, b) in values:
        return float(values[(a, b)])
    if (b, a) in values:
        return float(values[(b, a)])
    raise MissingValueError((a, b))


def _configuration_rhs(
    values: Mapping[ParticleConfiguration, float],
    lambdas: np.ndarray,
    c: ParticleConfiguration,
    n: int,
    scale: float,
) -> float:
    lambdas = np.asarray(lambdas, dtype=float)
    base = _value(values, c)
    occupancy = c.as_dict()
    total = 0.0
    for k, xi_k in occupancy.items():
        for l in range(n):
            if l == k:
                continue
            coefficient = scale * xi_k * (1 + 2 * occupancy.get(l, 0))
            total += coefficient * (_value(values, move(c, k, l)) - base) * _weight(lambdas, n, k, l)
    return total


def emf_rhs(values: Mapping[ParticleConfiguration, float], lambdas, c: ParticleConfiguration, n: int) -> float:
    """Σ_{k≠ℓ} 2ξ_k(1+2ξ_ℓ)(f(ξ^{kℓ}) − f(ξ)) / (N(λ_k−λ_ℓ)²)."""
    return _configuration_rhs(values, lambdas, c, n, 2.0)


def emf2_rhs(values: Mapping[ParticleConfiguration, float], lambdas, c: ParticleConfiguration, n: int) -> float:
    """Σ_{k≠ℓ} ξ_k(1+2ξ_ℓ)(g(ξ^{kℓ}) − g(ξ)) / (N(λ_k−λ_ℓ)²)."""
    return _configuration_rhs(values, lambdas, c, n, 1.0)


def _zeta(j: int, k: int, site: int) -> int:
    return 1 if site in (j, k) else 0


def emfnew1_rhs(values: Mapping[Pair, float], lambdas, j: int, k: int, n: int) -> float:
    """
    Σ_{ℓ≠k} ζ_k(1+2ζ_ℓ)(g(j,ℓ) − g(j,k))/(N(λ_ℓ−λ_k)²)
    + Σ_{ℓ≠j} ζ_j(1+2ζ_ℓ)(g(ℓ,k) − g(j,k))/(N(λ_ℓ−λ_j)²),

    with ζ the indicator of {j, k}.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    base = _pair_value(values, j, k)
    total = 0.0
    for l in range(n):
        if l != k:
            total += (1 + 2 * _zeta(j, k, l)) * (_pair_value(values, j, l) - base) * _weight(lambdas, n, l, k)
        if l != j:
            total += (1 + 2 * _zeta(j, k, l)) * (_pair_value(values, l, k) - base) * _weight(lambdas, n, l, j)
    return total


def fermionic_rhs(values: Mapping[Pair, float], lambdas, j: int, k: int, n: int) -> float:
    """
    Σ_{ℓ≠j,k} (h(ℓ,k) − h(j,k))/(N(λ_j−λ_ℓ)²) + Σ_{ℓ≠j,k} (h(j,ℓ) − h(j,k))/(N(λ_k−λ_ℓ)²).

    h(j, j) is identically zero, so its right-hand side is zero.
    """
    if j == k:
        return 0.0
    lambdas = np.asarray(lambdas, dtype=float)
    base = _pair_value(values, j, k)
    total = 0.0
    for l in range(n):
        if l in (j, k):
            continue
        total += (_pair_value(values, l, k) - base) * _weight(lambdas, n, j, l)
        total += (_pair_value(values, j, l) - base) * _weight(lambdas, n, k, l)
    return total


def _neighbor_keys(o: FlowObservable, n: int) -> List[Hashable]:
    if o.kind is FlowKind.CONSTANT:
        return []
    if o.kind in (FlowKind.G4, FlowKind.H4):
        j, k = o.pair
        keys = {(j, k)}
        for l in range(n):
            keys.update({(j, l), (l, k)})
        return sorted(keys)
    return [o.configuration, *matchings.neighbors(o.configuration)]


def neighbor_values(o: FlowObservable, s: SpectralData) -> Dict[Hashable, float]:
    """Pointwise values of the bound observable family at every key its right-hand side reads."""
    return {key: o.rebind(key).evaluate(s) for key in _neighbor_keys(o, s.n)}


def flow_rhs(o: FlowObservable, s: SpectralData, values: Optional[Mapping] = None) -> float:
    """The flow equation's right-hand side for the observable's kind."""
    if o.kind is FlowKind.CONSTANT:
        return 0.0
    values = neighbor_values(o, s) if values is None else values
    if o.kind is FlowKind.F_MATCHING:
        return emf_rhs(values, s.lambdas, o.configuration, s.n)
    if o.kind is FlowKind.G_PAIRED:
        return emf2_rhs(values, s.lambdas, o.configuration, s.n)
    j, k = o.pair
    if o.kind is FlowKind.G4:
        return emfnew1_rhs(values, s.lambdas, j, k, s.n)
    return fermionic_rhs(values, s.lambdas, j, k, s.n)


def generator_action(o: FlowObservable, s: SpectralData, h: float = DEFAULT_STEP) -> float:
    """L F at the frame, with one Richardson refinement of the (h, h/2) second differences."""
    _check_step(h)
    f0 = o.evaluate(s)
    total = 0.0
    for k in range(s.n):
        for l in range(k + 1, s.n):
            coarse = _second_difference(o.evaluate, s, k, l, h, f0)
            fine = _second_difference(o.evaluate, s, k, l, h / 2.0, f0)
            total += (4.0 * fine - coarse) / 3.0 * _weight(s.lambdas, s.n, k, l)
    return 0.5 * total


class FlowResidual(BaseModel):
    """Generator image against the assembled right-hand side at one frame."""

    model_config = ConfigDict(frozen=True)

    kind: FlowKind
    generator: float
    rhs: float
    absolute: float
    relative: float
    strict_relative: float
    half_rate_relative: Optional[float] = None


def _relative(diff: float, generator: float, rhs: float, values: Mapping, s: SpectralData) -> float:
    # Finite-difference error scales with the largest supplied value times the total pair weight;
    # L F itself can cancel to far below that, so it alone is not a usable scale.
    pair_weight = sum(_weight(s.lambdas, s.n, k, l) for k in range(s.n) for l in range(k + 1, s.n))
    value_scale = max((abs(v) for v in values.values()), default=0.0) * pair_weight
    scale = max(abs(generator), abs(rhs), value_scale)
    return diff / scale if scale > 0 else diff


def generator_flow_residual(o: FlowObservable, s: SpectralData, h: float = DEFAULT_STEP) -> FlowResidual:
    """
    |L F − RHS| for the observable's flow equation.

    `relative` is divided by the weighted value scale and is what gates use; `strict_relative` is
    divided by max(|L F|, |RHS|) only. For f_matching the residual against the same equation at
    half rate is also reported.
    """
    values = neighbor_values(o, s)
    generator = generator_action(o, s, h)
    rhs = flow_rhs(o, s, values)
    absolute = abs(generator - rhs)
    half = None
    if o.kind is FlowKind.F_MATCHING:
        half = _relative(abs(generator - 0.5 * rhs), generator, 0.5 * rhs, values, s)
    if o.kind is FlowKind.CONSTANT:
        relative = absolute
    else:
        relative = _relative(absolute, generator, rhs, values, s)
    strict_scale = max(abs(generator), abs(rhs))
    strict = absolute / strict_scale if strict_scale > 0 else absolute
    logger.debug(f"flow residual {o.kind.value} at {o.key}: abs={absolute:.3e}, rel={relative:.3e}")
    return FlowResidual(
        kind=o.kind,
        generator=generator,
        rhs=rhs,
        absolute=absolute,
        relative=relative,
        strict_relative=strict,
        half_rate_relative=half,
    )


def random_spectrum(n: int, seed: SeedLike = None, min_gap: float = MIN_GAP) -> np.ndarray:
    """Ascending λ with consecutive gaps min_gap + Exp(min_gap), centred at zero."""
    rng = as_rng(seed)
    gaps = min_gap + rng.exponential(min_gap, size=n - 1)
    lambdas = np.concatenate([[0.0], np.cumsum(gaps)])
    return lambdas - lambdas.mean()


def random_instance(n: int, seed: SeedLike = None, min_gap: float = MIN_GAP) -> SpectralData:
    """Haar-distributed orthogonal frame with a well-separated random spectrum."""
    rng = as_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    frame = q * np.sign(np.diag(r))
    return SpectralData(lambdas=random_spectrum(n, rng, min_gap), vectors=frame)


def random_observable(kind: FlowKind, n: int, seed: SeedLike = None, diagonal: bool = False) -> FlowObservable:
    """
    A random binding of the given kind on an N-site instance.

    f_matching: |I| = 3 random family, ξ of one or two particles; g_paired: ξ = {a:2, b:1} with
    six distinct labels; g4/h4: four distinct coordinate labels and j ≠ k (j = k if `diagonal`).
    """
    rng = as_rng(seed)
    if kind is FlowKind.CONSTANT:
        return FlowObservable(kind=kind, constant=float(rng.uniform(-1.0, 1.0)))
    a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
    if kind is FlowKind.F_MATCHING:
        shape = {a: 2} if rng.random() < 0.5 else {a: 1, b: 1}
        return FlowObservable(
            kind=kind, family=random_family(n, 3, rng), configuration=matchings.configuration(n, shape)
        )
    if kind is FlowKind.G_PAIRED:
        return FlowObservable(
            kind=kind,
            family=random_family(n, 6, rng),
            configuration=matchings.configuration(n, {a: 2, b: 1}),
            labels=tuple(range(6)),
        )
    family = random_family(n, 4, rng)
    pair = (a, a) if diagonal else (a, b)
    return FlowObservable(kind=kind, family=family, labels=(0, 1, 2, 3), pair=pair)


def f_matching_verdict(relative: Sequence[float], half_rate: Sequence[float], tol: float) -> str:
    """
    Empirical status of the perfect-matching flow as a pointwise identity.

    "pointwise" when the full-rate residual passes, "pointwise_half_rate" when only the
    half-rate one does, "indeterminate" otherwise.
    """
    if len(relative) == 0 or len(half_rate) == 0:
        return "indeterminate"
    if max(relative) <= tol:
        return "pointwise"
    if max(half_rate) <= tol:
        return "pointwise_half_rate"
    return "indeterminate"

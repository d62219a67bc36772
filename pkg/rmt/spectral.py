"""Dense symmetric eigendecomposition and resolvent evaluations built from it.

Everything here works from the spectral decomposition H = U diag(λ) Uᵀ, so the resolvent
G(z) = Σ_i u_i u_iᵀ / (λ_i − z) never needs a matrix inverse.
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy import linalg

from utils.errors import InvalidInputError
from utils.logger import get_logger

logger = get_logger(__name__)

ORTHONORMALITY_TOL = 1e-10
SIGN_THRESHOLD = 1e-12
UNIT_NORM_TOL = 1e-10


def _frozen(array: np.ndarray, dtype=float) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


class SymmetricMatrix(BaseModel):
    """Dense real symmetric N×N matrix, the ensemble sample H."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _check_entries(cls, value) -> np.ndarray:
        array = np.asarray(value, dtype=float)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
            raise InvalidInputError(f"expected a non-empty square matrix, got shape {array.shape}")
        if not np.array_equal(array, array.T, equal_nan=True):
            raise InvalidInputError("matrix is not exactly symmetric")
        return _frozen(array)

    @classmethod
    def from_upper(cls, array: np.ndarray) -> "SymmetricMatrix":
        """Build from the upper triangle (diagonal included) of a square array."""
        upper = np.triu(np.asarray(array, dtype=float))
        return cls(entries=upper + np.triu(upper, 1).T)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


class SpectralPoint(BaseModel):
    """A point z = E + iη of the upper half plane."""

    model_config = ConfigDict(frozen=True)

    re: float
    im: float

    @field_validator("im")
    @classmethod
    def _upper_half_plane(cls, value: float) -> float:
        if not value > 0:
            raise InvalidInputError(f"spectral point must have positive imaginary part, got {value}")
        return value

    @classmethod
    def from_complex(cls, z: complex) -> "SpectralPoint":
        return cls(re=float(np.real(z)), im=float(np.imag(z)))

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)


class SpectralData(BaseModel):
    """Ascending eigenvalues with an orthonormal eigenvector frame (column i is u_i)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lambdas: np.ndarray
    vectors: np.ndarray

    @field_validator("lambdas", "vectors", mode="before")
    @classmethod
    def _as_frozen(cls, value) -> np.ndarray:
        return _frozen(value)

    @model_validator(mode="after")
    def _check_invariants(self) -> "SpectralData":
        n = self.lambdas.shape[0]
        if self.lambdas.ndim != 1 or self.vectors.shape != (n, n):
            raise InvalidInputError(
                f"shape mismatch: lambdas {self.lambdas.shape}, vectors {self.vectors.shape}"
            )
        if np.any(np.diff(self.lambdas) < 0):
            raise InvalidInputError("eigenvalues must be sorted ascending")
        residual = orthonormality_residual(self.vectors)
        if residual > ORTHONORMALITY_TOL:
            raise InvalidInputError(f"eigenvector frame is not orthonormal (residual {residual:.3e})")
        return self

    @property
    def n(self) -> int:
        return self.lambdas.shape[0]

    def vector(self, i: int) -> np.ndarray:
        return self.vectors[:, i]

    def satisfies_sign_convention(self) -> bool:
        """True if the first coordinate above SIGN_THRESHOLD of every u_i is positive."""
        return all(_leading_sign(self.vectors[:, i]) > 0 for i in range(self.n))


def orthonormality_residual(frame: np.ndarray) -> float:
    """max |UᵀU − Id|."""
    frame = np.asarray(frame, dtype=float)
    return float(np.max(np.abs(frame.T @ frame - np.eye(frame.shape[1])))) if frame.size else 0.0


def _leading_sign(column: np.ndarray) -> float:
    nonzero = np.flatnonzero(np.abs(column) > SIGN_THRESHOLD)
    if nonzero.size == 0:
        return 1.0
    return float(np.sign(column[nonzero[0]]))


def fix_signs(frame: np.ndarray) -> np.ndarray:
    """Flip columns so that their first non-negligible coordinate is positive."""
    frame = np.array(frame, dtype=float, copy=True)
    for i in range(frame.shape[1]):
        if _leading_sign(frame[:, i]) < 0:
            frame[:, i] *= -1.0
    return frame


def decompose(m: SymmetricMatrix) -> SpectralData:
    """Full eigendecomposition with ascending eigenvalues and sign-fixed eigenvectors."""
    if not np.all(np.isfinite(m.entries)):
        bad = np.argwhere(~np.isfinite(m.entries))
        raise InvalidInputError(
            f"matrix has {len(bad)} non-finite entries, first at index {tuple(int(x) for x in bad[0])}"
        )
    lambdas, vectors = linalg.eigh(m.entries)
    order = np.argsort(lambdas, kind="stable")
    lambdas = lambdas[order]
    vectors = fix_signs(vectors[:, order])
    logger.debug(f"decompose: N={m.dim}, spectrum [{lambdas[0]:.4f}, {lambdas[-1]:.4f}]")
    return SpectralData(lambdas=lambdas, vectors=vectors)


def reconstruct(s: SpectralData) -> SymmetricMatrix:
    """U diag(λ) Uᵀ, symmetrized to remove rounding asymmetry."""
    dense = (s.vectors * s.lambdas) @ s.vectors.T
    return SymmetricMatrix(entries=0.5 * (dense + dense.T))


def reconstruction_residual(s: SpectralData, m: SymmetricMatrix) -> float:
    """max |U diag(λ) Uᵀ − M| relative to max(1, |M|_max)."""
    dense = (s.vectors * s.lambdas) @ s.vectors.T
    scale = max(1.0, float(np.max(np.abs(m.entries))))
    return float(np.max(np.abs(dense - m.entries))) / scale


def _unit(q: np.ndarray, n: int, name: str) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (n,):
        raise InvalidInputError(f"{name} has shape {q.shape}, expected ({n},)")
    norm = float(np.linalg.norm(q))
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise InvalidInputError(f"{name} is not a unit vector (norm {norm:.12f})")
    return q


def _spectral_sum(s: SpectralData, q1: np.ndarray, q2: np.ndarray, z: complex) -> complex:
    # Unrestricted in z; the public entry points insist on z in the upper half plane.
    w1 = s.vectors.T @ q1
    w2 = s.vectors.T @ q2
    return complex(np.sum(w1 * w2 / (s.lambdas - z)))


def resolvent_quadratic(s: SpectralData, q1: np.ndarray, q2: np.ndarray, z: SpectralPoint) -> complex:
    """⟨q1, G(z) q2⟩ = Σ_i ⟨q1,u_i⟩⟨q2,u_i⟩ / (λ_i − z)."""
    q1 = _unit(q1, s.n, "q1")
    q2 = _unit(q2, s.n, "q2")
    return _spectral_sum(s, q1, q2, z.z)


def resolvent_matrix(s: SpectralData, z: SpectralPoint) -> np.ndarray:
    """Full resolvent G(z) as a complex N×N array."""
    return (s.vectors / (s.lambdas - z.z)) @ s.vectors.T


def resolvent_entry(s: SpectralData, a: int, b: int, z: SpectralPoint) -> complex:
    """G_ab(z) from the spectral sum on basis vectors."""
    return complex(np.sum(s.vectors[a, :] * s.vectors[b, :] / (s.lambdas - z.z)))


def stieltjes(s: SpectralData, z: SpectralPoint) -> complex:
    """m_N(z) = N⁻¹ Σ_i (λ_i − z)⁻¹."""
    return complex(np.mean(1.0 / (s.lambdas - z.z)))


def green_derivative(s: SpectralData, a: int, b: int, i: int, j: int, z: SpectralPoint) -> complex:
    """
    Derivative of G_ab(z) along the symmetric off-diagonal pair (i, j).

    Both mirror entries H_ij and H_ji move together, giving −G_ai G_jb − G_aj G_ib.
    """
    if i == j:
        raise InvalidInputError("green_derivative needs an off-diagonal pair (i != j)")
    for name, index in (("a", a), ("b", b), ("i", i), ("j", j)):
        if not 0 <= index < s.n:
            raise InvalidInputError(f"index {name}={index} outside [0, {s.n})")
    g = lambda x, y: resolvent_entry(s, x, y, z)  # noqa: E731
    return -g(a, i) * g(j, b) - g(a, j) * g(i, b)


def ward_residual(s: SpectralData, a: int, z: SpectralPoint, g: Optional[np.ndarray] = None) -> float:
    """Relative residual of Σ_j |G_aj|² = Im G_aa / Im z."""
    g = resolvent_matrix(s, z) if g is None else g
    lhs = float(np.sum(np.abs(g[a, :]) ** 2))
    rhs = float(np.imag(g[a, a])) / z.im
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)

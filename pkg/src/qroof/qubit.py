"""Exact 2x2 complex linear algebra, Bloch geometry and the binary entropy family."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.special import xlogy

# Tolerance policy shared by every module.
STRUCT_TOL = 1e-12
CLOSED_FORM_TOL = 1e-10
ORACLE_TOL = 1e-4

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class InvalidStateError(ValueError):
    """Raised when a matrix or Bloch vector does not describe a qubit state."""


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def as_mat2(m) -> np.ndarray:
    """Coerce ``m`` to a finite complex 2x2 array."""
    arr = np.asarray(m, dtype=complex)
    if arr.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix has non-finite entries")
    return arr


def as_ket(a, tol: float = CLOSED_FORM_TOL) -> np.ndarray:
    """Coerce ``a`` to a unit 2-vector, raising if it is not normalized."""
    v = np.asarray(a, dtype=complex)
    if v.shape != (2,):
        raise DomainError(f"expected a 2-vector, got shape {v.shape}")
    if abs(np.vdot(v, v).real - 1.0) > tol:
        raise DomainError("vector is not normalized")
    return v


def det2(m: np.ndarray) -> np.ndarray:
    """Determinant of a (stack of) 2x2 matrices."""
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def trace2(m: np.ndarray) -> np.ndarray:
    return m[..., 0, 0] + m[..., 1, 1]


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A qubit density matrix.

    The matrix is validated on construction (Hermitian, unit trace,
    positive semi-definite, all at ``STRUCT_TOL``) and stored read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = as_mat2(self.matrix).copy()
        if abs(m[0, 1] - np.conj(m[1, 0])) > STRUCT_TOL or abs(m[0, 0].imag) > STRUCT_TOL \
                or abs(m[1, 1].imag) > STRUCT_TOL:
            raise InvalidStateError("matrix is not Hermitian")
        tr = trace2(m).real
        if abs(tr - 1.0) > STRUCT_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        if det2(m).real < -STRUCT_TOL or m[0, 0].real < -STRUCT_TOL or m[1, 1].real < -STRUCT_TOL:
            raise InvalidStateError("matrix is not positive semi-definite")
        # symmetrize away sub-tolerance noise
        m[0, 0] = m[0, 0].real
        m[1, 1] = m[1, 1].real
        m[1, 0] = np.conj(m[0, 1])
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_bloch(cls, b) -> "DensityOperator":
        return density_from_bloch(b)

    @classmethod
    def from_ket(cls, a) -> "DensityOperator":
        v = np.asarray(a, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @property
    def bloch(self) -> np.ndarray:
        return bloch_from_density(self)

    @property
    def det(self) -> float:
        return float(det2(self.matrix).real)

    def is_pure(self, tol: float = CLOSED_FORM_TOL) -> bool:
        return self.det <= tol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, DensityOperator):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        x = self.bloch
        return f"DensityOperator(bloch=({x[0]:.6g}, {x[1]:.6g}, {x[2]:.6g}))"


StateLike = Union[DensityOperator, np.ndarray, Sequence]


def as_density(rho: StateLike) -> DensityOperator:
    if isinstance(rho, DensityOperator):
        return rho
    return DensityOperator(np.asarray(rho))


def density_from_bloch(b) -> DensityOperator:
    """Density operator ``(1 + x1 s1 + x2 s2 + x3 s3) / 2`` for Bloch vector ``b``."""
    x = np.asarray(b, dtype=float)
    if x.shape != (3,) or not np.all(np.isfinite(x)):
        raise InvalidStateError("Bloch vector must be three finite reals")
    if x @ x > 1.0 + STRUCT_TOL:
        raise InvalidStateError(f"Bloch vector has norm {math.sqrt(x @ x)!r} > 1")
    return DensityOperator(bloch_matrix(x))


def bloch_matrix(x: np.ndarray) -> np.ndarray:
    """Unchecked, broadcasting version of :func:`density_from_bloch` on raw arrays."""
    x = np.asarray(x, dtype=float)
    m = np.empty(x.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = (1 + x[..., 2]) / 2
    m[..., 1, 1] = (1 - x[..., 2]) / 2
    m[..., 0, 1] = (x[..., 0] - 1j * x[..., 1]) / 2
    m[..., 1, 0] = (x[..., 0] + 1j * x[..., 1]) / 2
    return m


def bloch_from_density(rho: StateLike) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    return bloch_coords(m)


def bloch_coords(m: np.ndarray) -> np.ndarray:
    """Pauli coordinates ``(x1, x2, x3)`` of a (stack of) Hermitian 2x2 matrices."""
    off = m[..., 1, 0]
    return np.stack([2 * off.real, 2 * off.imag, (m[..., 0, 0] - m[..., 1, 1]).real], axis=-1) + 0.0


def ket_bloch(a: np.ndarray) -> np.ndarray:
    """Bloch vectors of a stack of unit kets, shape (..., 2) -> (..., 3)."""
    cross = a[..., 1] * np.conj(a[..., 0])
    p0 = np.abs(a[..., 0]) ** 2
    p1 = np.abs(a[..., 1]) ** 2
    return np.stack([2 * cross.real, 2 * cross.imag, p0 - p1], axis=-1)


def bloch_ket(x: np.ndarray) -> np.ndarray:
    """A unit ket whose projector has Bloch vector ``x`` (|x| = 1)."""
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    theta = math.acos(max(-1.0, min(1.0, x[2])))
    phi = math.atan2(x[1], x[0])
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


class Spectrum2(NamedTuple):
    lambda_hi: float
    lambda_lo: float


def eigvals_hermitian(m: np.ndarray):
    """Closed-form eigenvalues (hi, lo) of a stack of Hermitian 2x2 matrices."""
    tr = trace2(m).real
    # half the eigenvalue gap, free of the cancellation in tr^2/4 - det
    root = np.hypot((m[..., 0, 0] - m[..., 1, 1]).real / 2, np.abs(m[..., 0, 1]))
    return tr / 2 + root, tr / 2 - root


def eig2(m, hermitian: bool = True) -> Spectrum2:
    """Eigenvalues of a Hermitian 2x2 matrix by the quadratic formula, descending.

    >>> eig2(np.diag([0.25, 0.75]))
    Spectrum2(lambda_hi=0.75, lambda_lo=0.25)
    """
    m = np.asarray(m.matrix if isinstance(m, DensityOperator) else m, dtype=complex)
    if m.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not hermitian or np.max(np.abs(m - dagger(m))) > CLOSED_FORM_TOL:
        raise DomainError("eig2 requires a Hermitian matrix")
    hi, lo = eigvals_hermitian(m)
    return Spectrum2(float(hi), float(lo))


def _log_scale(base: float | None) -> float:
    return 1.0 if base is None else 1.0 / math.log(base)


def entropy_of_spectrum(lam_hi, lam_lo, base: float | None = None):
    """``-sum lambda log lambda`` with ``0 log 0 = 0``; broadcasts."""
    lo = np.clip(lam_lo, 0.0, 1.0)
    hi = np.clip(lam_hi, 0.0, 1.0)
    return -(xlogy(hi, hi) + xlogy(lo, lo)) * _log_scale(base)


def von_neumann_entropy(rho: StateLike, base: float | None = None) -> float:
    """Von Neumann entropy of a qubit state, in nats unless ``base`` is given.

    Pass ``base=2`` for bits.
    """
    rho = as_density(rho)
    hi, lo = eigvals_hermitian(rho.matrix)
    return float(entropy_of_spectrum(hi, lo, base))


def _check_unit_interval(x, name: str):
    x = np.asarray(x, dtype=float)
    if np.any(x < -STRUCT_TOL) or np.any(x > 1 + STRUCT_TOL) or np.any(np.isnan(x)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return np.clip(x, 0.0, 1.0)


def binary_entropy(x, base: float | None = None):
    """h(x) = -x log x - (1-x) log(1-x)."""
    x = _check_unit_interval(x, "x")
    out = -(xlogy(x, x) + (1 - x) * np.log1p(-x, where=x < 1, out=np.zeros_like(x)))
    out = out * _log_scale(base) + 0.0
    return float(out) if out.ndim == 0 else out


def h1(x, base: float | None = None):
    """h((1 + x) / 2) for x in [0, 1]."""
    x = _check_unit_interval(x, "x")
    # h is symmetric about 1/2, so evaluate at the small side (1 - x) / 2
    return binary_entropy((1 - x) / 2, base)


def h2(x, base: float | None = None):
    """h1(sqrt(1 - x^2)): the entropy of a pure-input image with concurrence ``x``."""
    x = _check_unit_interval(x, "x")
    # (1 - sqrt(1 - x^2)) / 2 without cancellation for small x
    small = x * x / (2 * (1 + np.sqrt(1 - x * x)))
    return binary_entropy(np.clip(small, 0.0, 0.5), base)

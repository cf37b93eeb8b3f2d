"""The anti-linear Hermitian operator attached to a Kraus pair.

An anti-linear map on C^2 is stored as a matrix ``alpha`` with the action
``v -> alpha @ conj(v)``.  Composition rules follow from that:

* linear ``L`` after anti-linear ``alpha``: matrix ``L @ alpha``
* anti-linear ``alpha`` after linear ``L``: matrix ``alpha @ conj(L)``
* anti-linear after anti-linear: a *linear* map ``alpha1 @ conj(alpha2)``

Hermiticity of the anti-linear map (``<a|theta|b> = <b|theta|a>``) is
equivalent to ``alpha`` being symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelSpec, kraus_of
from .qubit import DomainError, as_ket, as_mat2, dagger, det2

# residual bound for the symmetry of alpha
HERMITIAN_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class AntilinearOperator:
    alpha: np.ndarray

    def __post_init__(self):
        a = as_mat2(self.alpha).copy()
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.alpha))))
        return abs(self.alpha[0, 1] - self.alpha[1, 0]) <= tol * scale

    def apply(self, v) -> np.ndarray:
        return self.alpha @ np.conj(np.asarray(v, dtype=complex))

    def square(self) -> np.ndarray:
        """The linear operator theta^2."""
        return self.alpha @ np.conj(self.alpha)

    def sandwich(self, rho) -> np.ndarray:
        """The linear operator ``theta rho theta``."""
        m = np.asarray(rho, dtype=complex)
        return self.alpha @ np.conj(m) @ np.conj(self.alpha)

    def scaled(self, c: complex) -> "AntilinearOperator":
        return AntilinearOperator(c * self.alpha)

    def __add__(self, other):
        return AntilinearOperator(self.alpha + other.alpha)

    def __neg__(self):
        return AntilinearOperator(-self.alpha)

    def __repr__(self):
        return f"AntilinearOperator(alpha={np.array2string(self.alpha, precision=6)})"


# Spin flip (a0, a1) -> (a1*, -a0*): anti-unitary, not Hermitian.
SPIN_FLIP = AntilinearOperator(np.array([[0, 1], [-1, 0]], dtype=complex))


def theta_from_kraus(A, B) -> AntilinearOperator:
    """Entry-wise formula for ``theta_{A,B}``.

    ``theta_{A,B} = -theta_{B,A}`` holds exactly.  Trace preservation is not needed.
    """
    a, b = as_mat2(A), as_mat2(B)
    a00, a01, a10, a11 = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    b00, b01, b10, b11 = b[0, 0], b[0, 1], b[1, 0], b[1, 1]
    alpha = np.empty((2, 2), dtype=complex)
    alpha[0, 0] = 2 * np.conj(b10 * a00 - a10 * b00)
    alpha[1, 1] = 2 * np.conj(a01 * b11 - b01 * a11)
    # grouped so that swapping A and B negates alpha exactly
    alpha[0, 1] = alpha[1, 0] = np.conj((a00 * b11 - a11 * b00) + (a01 * b10 - a10 * b01))
    return AntilinearOperator(alpha)


def theta_spinflip_form(A, B) -> AntilinearOperator:
    """``A^+ theta_f B - B^+ theta_f A``: the same operator via the spin flip."""
    a, b = as_mat2(A), as_mat2(B)
    f = SPIN_FLIP.alpha
    return AntilinearOperator(dagger(a) @ f @ np.conj(b) - dagger(b) @ f @ np.conj(a))


def theta_of(channel: ChannelSpec) -> AntilinearOperator:
    k = kraus_of(channel)
    return theta_from_kraus(k.A, k.B)


def theta_module_change(theta: AntilinearOperator, mu) -> AntilinearOperator:
    """Theta of the pair mixed by ``mu``: ``(det mu)^* theta``."""
    mu = as_mat2(mu)
    return theta.scaled(np.conj(det2(mu)))


def theta_conjugate_transform(theta: AntilinearOperator, c1, c2) -> AntilinearOperator:
    """Theta of ``(C1 A C2, C1 B C2)``: ``(det C1)^* C2^+ theta C2``."""
    c1, c2 = as_mat2(c1), as_mat2(c2)
    return AntilinearOperator(np.conj(det2(c1)) * dagger(c2) @ theta.alpha @ np.conj(c2))


def pure_expectation(theta: AntilinearOperator, a, b=None) -> complex:
    """``<a|theta|b>`` (``b`` defaults to ``a``); vectors must be normalized."""
    a = as_ket(a)
    b = a if b is None else as_ket(b)
    return complex(np.conj(a) @ theta.alpha @ np.conj(b))


def expectation_batch(alpha: np.ndarray, kets: np.ndarray) -> np.ndarray:
    """``<a|theta|a>`` for a stack of kets of shape (..., 2), unchecked."""
    c = np.conj(kets)
    return (alpha[0, 0] * c[..., 0] * c[..., 0] + 2 * alpha[0, 1] * c[..., 0] * c[..., 1]
            + alpha[1, 1] * c[..., 1] * c[..., 1])


def antisymmetric_identity_residual(A, B, a) -> float:
    """Norm of ``(A(x)B - B(x)A)|aa> - 1/2 <a|theta|a>^* (|01> - |10>)``."""
    a_vec = as_ket(a)
    A, B = as_mat2(A), as_mat2(B)
    aa = np.kron(a_vec, a_vec)
    lhs = (np.kron(A, B) - np.kron(B, A)) @ aa
    singlet = np.array([0, 1, -1, 0], dtype=complex)
    rhs = 0.5 * np.conj(pure_expectation(theta_from_kraus(A, B), a_vec)) * singlet
    return float(np.linalg.norm(lhs - rhs))

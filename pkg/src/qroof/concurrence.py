"""Closed-form concurrence of length-two qubit channels.

Four routes to the same number:

* ``concurrence_pure``  -- the defining value ``2 sqrt(det T(pi))`` at pure states
* ``concurrence_theta`` -- the flat-roof formula built from the anti-linear operator
* ``concurrence_canonical`` -- the sum of two squared linear forms for canonical pairs
* ``concurrence_named`` -- phase and amplitude damping closed forms

``concurrence_spectral`` evaluates ``lambda_1 - lambda_2`` through matrix
square roots and serves as an independent check of ``concurrence_theta``.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Tuple

import numpy as np
import scipy.linalg

from .channels import (
    AmplitudeDamping,
    Canonical,
    ChannelSpec,
    KrausPair,
    PhaseDamping,
    apply_channel,
    apply_kraus,
    kraus_of,
)
from .qubit import (
    DomainError,
    StateLike,
    as_density,
    bloch_coords,
    det2,
    trace2,
)
from .theta import AntilinearOperator, theta_from_kraus, theta_of

ZERO_CUTOFF = 1e-12


def _clean(c: float) -> float:
    return 0.0 if c < ZERO_CUTOFF else float(c)


def concurrence_pure(channel: ChannelSpec, pi: StateLike) -> float:
    """``2 sqrt(det T(pi))`` for a pure state ``pi``."""
    pi = as_density(pi)
    if not pi.is_pure():
        raise DomainError("concurrence_pure needs a pure state")
    d = det2(apply_channel(channel, pi).matrix).real
    return _clean(2 * math.sqrt(max(0.0, d)))


def pure_concurrence_functional(channel: ChannelSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Batched ``2 sqrt(det T(|a><a|))`` on a stack of unit kets.

    Works for pairs that are not trace preserving as well.
    """
    kraus = kraus_of(channel)

    def g(kets: np.ndarray) -> np.ndarray:
        proj = kets[..., :, None] * np.conj(kets[..., None, :])
        d = det2(apply_kraus(kraus, proj)).real
        return 2 * np.sqrt(np.maximum(d, 0.0))

    return g


def concurrence_theta_squared(alpha: np.ndarray, m: np.ndarray) -> np.ndarray:
    """``Tr(rho theta rho theta) - 2 det(rho) |det alpha|`` for any (stack of) 2x2 ``m``.

    This is a real quadratic polynomial in ``m``; it is evaluated without
    positivity checks so it can be polarized.
    """
    sandwich = alpha @ np.conj(m) @ np.conj(alpha)
    tr = trace2(m @ sandwich).real
    return tr - 2 * det2(m).real * abs(det2(alpha))


def _sqrt_psd2(m: np.ndarray) -> np.ndarray:
    """Square root of a 2x2 positive semidefinite matrix, closed form."""
    s = math.sqrt(max(0.0, det2(m).real))
    t = math.sqrt(max(0.0, trace2(m).real + 2 * s))
    return (m + s * np.eye(2)) / t if t > 0 else np.zeros((2, 2), dtype=complex)


def concurrence_theta(theta: AntilinearOperator, rho: StateLike) -> float:
    """Concurrence ``sqrt(max(0, Tr(rho theta rho theta) - 2 det(rho) |det alpha|))``.

    Evaluated as ``(mu1 - mu2) / (sqrt(mu1) + sqrt(mu2))`` with ``mu`` the
    eigenvalues of the Hermitian ``sqrt(rho) theta rho theta sqrt(rho)``.
    The gap ``mu1 - mu2`` is a sum of squares and ``sqrt(mu1 mu2)`` is a
    determinant, so the result keeps absolute accuracy near ``C = 0`` and at
    pure states, where the direct square root would amplify rounding.
    """
    rho = as_density(rho)
    s = _sqrt_psd2(rho.matrix)
    tau = s @ theta.alpha @ np.conj(s)
    h = tau @ tau.conj().T
    gap = math.hypot((h[0, 0] - h[1, 1]).real, 2 * abs(h[0, 1]))
    root1 = math.sqrt(max(0.0, (trace2(h).real + gap) / 2))
    if root1 == 0.0:
        return 0.0
    # sqrt(mu1 mu2) = |det tau| = det(rho) |det alpha|, free of cancellation
    root2 = max(0.0, det2(rho.matrix).real) * abs(det2(theta.alpha)) / root1
    return _clean(gap / (root1 + root2))


def concurrence_spectral(theta: AntilinearOperator, rho: StateLike) -> float:
    """``max(0, lambda_1 - lambda_2)`` from the eigenvalues of
    ``(sqrt(rho) theta rho theta sqrt(rho))^(1/2)``."""
    rho = as_density(rho)
    s = scipy.linalg.sqrtm(rho.matrix)
    inner = s @ theta.sandwich(rho.matrix) @ s
    inner = (inner + inner.conj().T) / 2
    w = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    lam = np.sort(np.sqrt(w))[::-1]
    return _clean(max(0.0, lam[0] - lam[1]))


def canonical_roots(spec: Canonical) -> Tuple[complex, complex]:
    """The two square roots entering the second linear form, signed so their product is >= 0."""
    x = spec.b10 * spec.a00 * np.conj(spec.b01 * spec.a11)
    w = cmath.sqrt(x)
    w_partner = cmath.sqrt(np.conj(x))
    if (w * w_partner).real < 0:
        w_partner = -w_partner
    return w, w_partner


def canonical_linear_values(spec: Canonical, rho: StateLike) -> Tuple[float, float]:
    """``(L1(rho), L2(rho))`` with ``C = 2 sqrt(L1^2 + L2^2)``."""
    if not isinstance(spec, Canonical):
        raise DomainError("canonical concurrence needs a Canonical spec")
    m = as_density(rho).matrix
    l1 = m[0, 0].real * abs(spec.b10 * spec.a00) - m[1, 1].real * abs(spec.b01 * spec.a11)
    w, w_partner = canonical_roots(spec)
    l2 = 1j * (m[0, 1] * w - m[1, 0] * w_partner)
    return float(l1), float(l2.real)


def concurrence_canonical(spec: Canonical, rho: StateLike) -> float:
    l1, l2 = canonical_linear_values(spec, rho)
    return _clean(2 * math.hypot(l1, l2))


def concurrence_named(spec: ChannelSpec, rho: StateLike) -> float:
    """Closed forms for phase damping and amplitude damping."""
    rho = as_density(rho)
    if isinstance(spec, PhaseDamping):
        x1, x2, _ = bloch_coords(rho.matrix)
        return _clean(math.sqrt((1 - abs(spec.z) ** 2) * (x1 * x1 + x2 * x2)))
    if isinstance(spec, AmplitudeDamping):
        p = spec.p
        return _clean(2 * math.sqrt(p * (1 - p)) * rho.matrix[1, 1].real)
    raise DomainError(f"no named closed form for {type(spec).__name__}; use the theta path")


def concurrence(channel: ChannelSpec, rho: StateLike) -> Tuple[float, str]:
    """Concurrence of ``rho`` under ``channel`` and the name of the route used."""
    if isinstance(channel, (PhaseDamping, AmplitudeDamping)):
        return concurrence_named(channel, rho), "named-closed-form"
    if isinstance(channel, Canonical):
        return concurrence_canonical(channel, rho), "canonical"
    if isinstance(channel, KrausPair):
        return concurrence_theta(theta_from_kraus(channel.A, channel.B), rho), "theta"
    raise DomainError(f"not a channel spec: {channel!r}")


def concurrence_via_theta(channel: ChannelSpec, rho: StateLike) -> float:
    return concurrence_theta(theta_of(channel), rho)


def concurrence_batch(channel: ChannelSpec, m: np.ndarray) -> np.ndarray:
    """Theta-route concurrence for a stack of density matrices, unchecked."""
    alpha = theta_of(channel).alpha
    c2 = concurrence_theta_squared(alpha, m)
    c = np.sqrt(np.maximum(c2, 0.0))
    return np.where(c < ZERO_CUTOFF, 0.0, c)


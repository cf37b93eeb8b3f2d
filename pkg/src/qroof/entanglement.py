"""Entanglement E(T; rho), entropy with respect to a channel H(T; rho), and 1-shot capacities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._search import compass_minimize
from .channels import AmplitudeDamping, ChannelSpec, apply_kraus, kraus_of
from .concurrence import concurrence, concurrence_theta_squared
from .qubit import (
    DensityOperator,
    DomainError,
    StateLike,
    as_density,
    binary_entropy,
    bloch_matrix,
    eigvals_hermitian,
    entropy_of_spectrum,
    h2,
    von_neumann_entropy,
)
from .theta import theta_from_kraus

# concurrence may overshoot 1 by rounding
C_OVERSHOOT = 1e-9


def _trace_preserving(channel: ChannelSpec):
    kraus = kraus_of(channel)
    if not kraus.is_trace_preserving:
        raise DomainError("E and H are defined for trace-preserving channels only")
    return kraus


def _h2_of_concurrence(c):
    c = np.asarray(c, dtype=float)
    if np.any(c > 1 + C_OVERSHOOT):
        raise DomainError("concurrence exceeds 1")
    return h2(np.clip(c, 0.0, 1.0))


def entanglement_E(channel: ChannelSpec, rho: StateLike, base: float | None = None) -> float:
    """``E(T; rho) = h2(C(T; rho))``."""
    _trace_preserving(channel)
    c, _ = concurrence(channel, rho)
    return float(_h2_of_concurrence(c)) * (1.0 if base is None else 1.0 / math.log(base))


def entropy_H(channel: ChannelSpec, rho: StateLike, base: float | None = None) -> float:
    """``H(T; rho) = S(T(rho)) - E(T; rho)``, the best Holevo quantity of ensembles averaging to rho."""
    kraus = _trace_preserving(channel)
    rho = as_density(rho)
    s = von_neumann_entropy(DensityOperator(apply_kraus(kraus, rho.matrix)), base)
    h = s - entanglement_E(channel, rho, base)
    return 0.0 if -1e-9 < h < 0 else h


def output_entropy_functional(channel: ChannelSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Batched ``S(T(|a><a|))`` on a stack of unit kets, for the roof oracle."""
    kraus = _trace_preserving(channel)

    def g(kets: np.ndarray) -> np.ndarray:
        proj = kets[..., :, None] * np.conj(kets[..., None, :])
        hi, lo = eigvals_hermitian(apply_kraus(kraus, proj))
        return entropy_of_spectrum(hi, lo)

    return g


def entropy_H_batch(channel: ChannelSpec, bloch: np.ndarray) -> np.ndarray:
    """``H(T; rho)`` on a stack of Bloch vectors, theta route, unchecked."""
    kraus = kraus_of(channel)
    alpha = theta_from_kraus(kraus.A, kraus.B).alpha
    m = bloch_matrix(bloch)
    hi, lo = eigvals_hermitian(apply_kraus(kraus, m))
    s = entropy_of_spectrum(hi, lo)
    c = np.sqrt(np.maximum(concurrence_theta_squared(alpha, m), 0.0))
    return s - h2(np.clip(c, 0.0, 1.0))


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    maximizer_r: float
    maximizer_state: DensityOperator
    converged: bool = True


def amplitude_damping_objective(p: float, r):
    """``h(p r) - h((1 - sqrt(1 - 4 p (1-p) r^2)) / 2)``: H on the diagonal state with rho11 = r."""
    r = np.asarray(r, dtype=float)
    c2 = 4 * p * (1 - p) * r * r
    small = c2 / (2 * (1 + np.sqrt(np.clip(1 - c2, 0.0, 1.0))))
    return binary_entropy(p * r) - binary_entropy(np.clip(small, 0.0, 0.5))


def _diag_state(r: float) -> DensityOperator:
    return DensityOperator(np.diag([1 - r, r]))


def capacity_amplitude_damping(p: float, tol: float = 1e-12) -> CapacityResult:
    """1-shot capacity of amplitude damping by ternary search over diagonal inputs.

    The objective is concave in ``r`` so the search brackets its unique maximizer.
    """
    if not 0.0 < p <= 1.0:
        raise DomainError(f"amplitude damping needs 0 < p <= 1, got {p!r}")
    if tol < 1e-12:
        raise DomainError("tol must be at least 1e-12")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        third = (hi - lo) / 3
        m1, m2 = lo + third, hi - third
        if amplitude_damping_objective(p, m1) < amplitude_damping_objective(p, m2):
            lo = m1
        else:
            hi = m2
        if third == 0.0:
            break
    r0 = (lo + hi) / 2
    return CapacityResult(float(amplitude_damping_objective(p, r0)), r0, _diag_state(r0))


def capacity_numeric(channel: ChannelSpec, tol: float = 1e-9, starts: int = 8,
                     budget: int = 40_000, seed: int = 0) -> CapacityResult:
    """Maximize ``H(T; rho)`` over input states by multi-start compass search.

    For an :class:`AmplitudeDamping` spec only diagonal inputs are searched;
    otherwise the whole Bloch ball.  ``maximizer_r`` is the ``rho11`` entry
    of the maximizing state.
    """
    kraus = _trace_preserving(channel)
    rng = np.random.default_rng(seed)
    if isinstance(channel, AmplitudeDamping):
        x0 = rng.uniform(0.0, 1.0, size=(starts, 1))

        def f(r):
            zeros = np.zeros_like(r[:, 0])
            return -entropy_H_batch(kraus, np.stack([zeros, zeros, 1 - 2 * r[:, 0]], axis=-1))

        res = compass_minimize(f, x0, step=0.25, min_step=tol, max_evals=budget // starts,
                               project=lambda r: np.clip(r, 0.0, 1.0))
        best = int(np.argmin(res.f))
        r0 = float(res.x[best, 0])
        state = _diag_state(r0)
    else:
        x0 = rng.normal(size=(starts, 3))
        x0 *= (rng.uniform(size=(starts, 1)) ** (1 / 3)) / np.linalg.norm(x0, axis=1, keepdims=True)

        def f(x):
            return -entropy_H_batch(kraus, x)

        res = compass_minimize(f, x0, step=0.25, min_step=tol, max_evals=budget // starts,
                               project=_project_ball)
        best = int(np.argmin(res.f))
        state = DensityOperator(bloch_matrix(res.x[best]))
        r0 = float(state.matrix[1, 1].real)
    return CapacityResult(float(-res.f[best]), r0, state, bool(res.converged[best]))


def _project_ball(x: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(x, axis=-1, keepdims=True)
    return x / np.maximum(n, 1.0)

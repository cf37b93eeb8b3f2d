"""Brute-force convex and concave roofs over pure-state decompositions.

A functional ``g`` on pure states is passed as a callable that takes a stack
of unit kets of shape ``(N, 2)`` and returns ``N`` real values.  Use
:func:`from_state_function` to wrap a plain ``DensityOperator -> float``
function.

Decompositions of ``rho`` into ``m`` pure states are parametrized by
``m x 2`` isometries (mixers): ``psi_j = sum_k V_jk sqrt(lambda_k) e_k`` over
the eigenbasis of ``rho``.  The search generates the isometry as the polar
factor of ``m`` free kets ``u_j`` (log-norm, polar angle, azimuth each), so
every parameter vector yields a valid decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ._search import compass_minimize
from .qubit import (
    CLOSED_FORM_TOL,
    DensityOperator,
    DomainError,
    StateLike,
    as_density,
    dagger,
)

PureFunctional = Callable[[np.ndarray], np.ndarray]

DEFAULT_BUDGET = 20_000
DEFAULT_STARTS = 20
MIN_BUDGET = 1_000
LENGTHS = (2, 3, 4)
DROP_WEIGHT = 1e-12
MIN_STEP = 1e-7
REFINE_SHARE = 0.2
REFINE_STARTS = 3
# a refined decomposition may exceed the best value found by at most this much
FLAT_SLACK = 1e-8


@dataclass(frozen=True, eq=False)
class PureDecomposition:
    weights: Tuple[float, ...]
    states: Tuple[DensityOperator, ...]
    kets: np.ndarray

    @property
    def members(self) -> List[Tuple[float, DensityOperator]]:
        return list(zip(self.weights, self.states))

    def __len__(self):
        return len(self.weights)

    def average(self) -> np.ndarray:
        return sum(w * s.matrix for w, s in self.members)

    def average_residual(self, rho: StateLike) -> float:
        return float(np.max(np.abs(self.average() - as_density(rho).matrix)))

    def evaluate(self, g: PureFunctional) -> np.ndarray:
        return np.asarray(g(self.kets), dtype=float)


@dataclass(frozen=True, eq=False)
class RoofResult:
    value: float
    decomposition: PureDecomposition
    member_values: Tuple[float, ...]
    converged: bool
    evaluations: int


def from_state_function(fn: Callable[[DensityOperator], float]) -> PureFunctional:
    """Adapt a scalar ``DensityOperator -> float`` function to the batched interface."""
    def g(kets):
        flat = kets.reshape(-1, 2)
        out = np.array([fn(DensityOperator.from_ket(a)) for a in flat], dtype=float)
        return out.reshape(kets.shape[:-1])
    return g


def _eigen_factor(rho: DensityOperator) -> np.ndarray:
    """``R = diag(sqrt(lambda)) E^T`` so that the rows of ``V @ R`` are the unnormalized members."""
    lam, vecs = np.linalg.eigh(rho.matrix)
    lam = np.clip(lam[::-1], 0.0, None)
    vecs = vecs[:, ::-1]
    return np.sqrt(lam)[:, None] * vecs.T


def _split_rows(psi: np.ndarray):
    """Weights and normalized kets from unnormalized rows; zero rows get weight 0."""
    w = np.sum(np.abs(psi) ** 2, axis=-1)
    safe = w > 1e-300
    norm = np.sqrt(np.where(safe, w, 1.0))
    kets = np.where(safe[..., None], psi / norm[..., None], np.array([1.0, 0.0]))
    return np.where(safe, w, 0.0), kets


def decomposition_from_mixer(rho: StateLike, mixer) -> PureDecomposition:
    """Pure decomposition of ``rho`` induced by an ``m x 2`` isometry.

    Members of weight below 1e-12 are dropped.  A pure ``rho`` gives the
    single-member decomposition ``{(1, rho)}``.
    """
    rho = as_density(rho)
    v = np.asarray(mixer, dtype=complex)
    if v.ndim != 2 or v.shape[1] != 2 or not 2 <= v.shape[0] <= 4:
        raise DomainError(f"mixer must be m x 2 with 2 <= m <= 4, got shape {v.shape}")
    if np.max(np.abs(dagger(v) @ v - np.eye(2))) > CLOSED_FORM_TOL:
        raise DomainError("mixer columns are not orthonormal")
    if rho.is_pure():
        return _trivial(rho)
    w, kets = _split_rows(v @ _eigen_factor(rho))
    keep = w >= DROP_WEIGHT
    return _make(w[keep], kets[keep])


def _trivial(rho: DensityOperator) -> PureDecomposition:
    lam, vecs = np.linalg.eigh(rho.matrix)
    ket = vecs[:, -1]
    return PureDecomposition((1.0,), (rho,), ket[None, :])


def _make(weights: np.ndarray, kets: np.ndarray) -> PureDecomposition:
    weights = weights / weights.sum()
    states = tuple(DensityOperator.from_ket(a) for a in kets)
    return PureDecomposition(tuple(float(x) for x in weights), states, kets.copy())


def _frame_kets(params: np.ndarray, m: int) -> np.ndarray:
    p = params.reshape(params.shape[0], m, 3)
    r = np.exp(0.5 * np.clip(p[..., 0], -30.0, 30.0))
    half = p[..., 1] / 2
    return np.stack([r * np.cos(half), r * np.exp(1j * p[..., 2]) * np.sin(half)], axis=-1)


def _polar_isometry(u: np.ndarray) -> np.ndarray:
    """Polar factor ``M (M^+ M)^(-1/2)`` for a stack of m x 2 matrices."""
    left, _, right = np.linalg.svd(u, full_matrices=False)
    return left @ right


def _objective(g: PureFunctional, factor: np.ndarray, m: int, sign: float,
               spread_weight: float = 0.0):
    """Signed roof objective; ``spread_weight`` adds the weighted variance of member values."""
    def f(params):
        v = _polar_isometry(_frame_kets(params, m))
        w, kets = _split_rows(v @ factor)
        vals = np.asarray(g(kets.reshape(-1, 2)), dtype=float).reshape(w.shape)
        mean = np.sum(w * vals, axis=-1)
        out = sign * mean
        if spread_weight:
            out = out + spread_weight * np.sum(w * (vals - mean[:, None]) ** 2, axis=-1)
        return out
    return f


def _random_params(rng: np.random.Generator, k: int, m: int) -> np.ndarray:
    p = np.empty((k, m, 3))
    p[..., 0] = rng.normal(0.0, 0.5, size=(k, m))
    p[..., 1] = np.arccos(rng.uniform(-1.0, 1.0, size=(k, m)))
    p[..., 2] = rng.uniform(0.0, 2 * np.pi, size=(k, m))
    return p.reshape(k, 3 * m)


def _roof(g: PureFunctional, rho: StateLike, budget: int, starts: int, seed: int,
          sign: float) -> RoofResult:
    rho = as_density(rho)
    if rho.is_pure():
        dec = _trivial(rho)
        vals = dec.evaluate(g)
        return RoofResult(float(vals[0]), dec, (float(vals[0]),), True, 1)
    if budget < MIN_BUDGET:
        raise DomainError(f"budget must be at least {MIN_BUDGET}")
    if starts < len(LENGTHS):
        raise DomainError(f"need at least {len(LENGTHS)} starts")
    rng = np.random.default_rng(seed)
    factor = _eigen_factor(rho)
    search_budget = int(budget * (1 - REFINE_SHARE))
    per_start = search_budget // starts
    # start index i uses length LENGTHS[i % 3]
    candidates = []
    for j, m in enumerate(LENGTHS):
        idx = list(range(j, starts, len(LENGTHS)))
        x0 = _random_params(rng, len(idx), m)
        res = compass_minimize(_objective(g, factor, m, sign), x0, step=0.5,
                               min_step=MIN_STEP, max_evals=per_start)
        for row, i in enumerate(idx):
            candidates.append((float(res.f[row]), i, m, res.x[row], bool(res.converged[row])))
    total = per_start * starts
    # lowest value wins, ties go to the lowest start index
    candidates.sort(key=lambda c: (c[0], c[1]))
    best_f, _, m, x, converged = candidates[0]

    # Optimal decompositions need not be unique (a roof may be affine but not
    # constant on part of a leaf).  Slide towards equal member values while
    # keeping the value: refine the best few points with a variance penalty.
    refine = candidates[:REFINE_STARTS]
    refine_budget = (budget - total) // len(refine)
    for f0, _, m_r, x_r, _ in refine:
        res = compass_minimize(_objective(g, factor, m_r, sign, spread_weight=1.0),
                               x_r[None, :], step=0.05, min_step=MIN_STEP,
                               max_evals=refine_budget)
        total += int(res.evaluations[0])
        f_new = float(_objective(g, factor, m_r, sign)(res.x)[0])
        if f_new <= best_f + FLAT_SLACK and _spread(g, factor, m_r, res.x) < _spread(g, factor, m, x[None, :]):
            m, x, converged = m_r, res.x[0], bool(res.converged[0]) or converged
            best_f = min(best_f, f_new)

    v = _polar_isometry(_frame_kets(x[None, :], m))[0]
    dec = decomposition_from_mixer(rho, v)
    vals = dec.evaluate(g)
    value = float(np.dot(dec.weights, vals))
    return RoofResult(value, dec, tuple(float(x) for x in vals), converged, total)


def _spread(g, factor, m, x) -> float:
    v = _polar_isometry(_frame_kets(x, m))
    w, kets = _split_rows(v @ factor)
    vals = np.asarray(g(kets.reshape(-1, 2)), dtype=float).reshape(w.shape)
    vals = np.where(w[0] >= DROP_WEIGHT, vals[0], np.nan)
    return float(np.nanmax(vals) - np.nanmin(vals))


def roof_min(g: PureFunctional, rho: StateLike, budget: int = DEFAULT_BUDGET,
             starts: int = DEFAULT_STARTS, seed: int = 0) -> RoofResult:
    """Convex roof of ``g`` at ``rho``: the smallest ``sum w_j g(pi_j)`` found.

    The search is multi-start compass search over decompositions of length
    2, 3 and 4 with a seeded generator, so the value is an upper bound on
    the true convex roof and identical arguments give identical results.
    ``budget`` is the total number of decomposition evaluations.
    """
    return _roof(g, rho, budget, starts, seed, 1.0)


def roof_max(g: PureFunctional, rho: StateLike, budget: int = DEFAULT_BUDGET,
             starts: int = DEFAULT_STARTS, seed: int = 0) -> RoofResult:
    """Concave roof of ``g`` at ``rho`` (maximization counterpart of :func:`roof_min`)."""
    return _roof(g, rho, budget, starts, seed, -1.0)


def flatness_residual(result: RoofResult) -> float:
    """``max_j |g(pi_j) - value|`` over the members of the returned decomposition."""
    vals = np.asarray(result.member_values)
    return float(np.max(np.abs(vals - result.value)))


def random_mixer(rng: np.random.Generator, m: int) -> np.ndarray:
    """Haar-like random ``m x 2`` isometry."""
    z = rng.normal(size=(m, 2)) + 1j * rng.normal(size=(m, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def decomposition_value(g: PureFunctional, dec: PureDecomposition) -> float:
    return float(np.dot(dec.weights, dec.evaluate(g)))


def weighted_values(g: PureFunctional, decs: Sequence[PureDecomposition]) -> np.ndarray:
    return np.array([decomposition_value(g, d) for d in decs])

"""Batched compass (coordinate pattern) search.

All starts advance in lockstep so every poll of every start is evaluated in
a single vectorized call of the objective.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass
class SearchResult:
    x: np.ndarray          # (K, n) final points
    f: np.ndarray          # (K,) objective values at x
    converged: np.ndarray  # (K,) step fell below min_step before the budget ran out
    evaluations: np.ndarray  # (K,)


def compass_minimize(
    f: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    step: float = 0.5,
    min_step: float = 1e-7,
    max_evals: int = 1000,
    project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> SearchResult:
    """Minimize ``f`` from each row of ``x0`` by complete compass polling.

    ``f`` maps an (N, n) array of points to N values.  Each iteration polls
    ``x +- step * e_i`` plus one extrapolated point along the last
    successful move; the step halves after an unsuccessful poll.
    ``max_evals`` is the per-start budget.
    """
    x = np.array(x0, dtype=float)
    if project is not None:
        x = project(x)
    k, n = x.shape
    fx = np.asarray(f(x), dtype=float)
    evals = np.ones(k, dtype=int)
    steps = np.full(k, float(step))
    last_move = np.zeros_like(x)
    basis = np.concatenate([np.eye(n), -np.eye(n)])  # (2n, n)
    per_iter = 2 * n + 1

    while True:
        active = (steps >= min_step) & (evals + per_iter <= max_evals)
        if not active.any():
            break
        idx = np.flatnonzero(active)
        xa = x[idx]
        polls = xa[:, None, :] + steps[idx, None, None] * basis[None, :, :]
        extra = xa + 2.0 * last_move[idx]
        polls = np.concatenate([polls, extra[:, None, :]], axis=1)  # (ka, 2n+1, n)
        flat = polls.reshape(-1, n)
        if project is not None:
            flat = project(flat)
            polls = flat.reshape(polls.shape)
        vals = np.asarray(f(flat), dtype=float).reshape(len(idx), per_iter)
        vals = np.where(np.isfinite(vals), vals, np.inf)
        evals[idx] += per_iter
        best = np.argmin(vals, axis=1)
        best_val = vals[np.arange(len(idx)), best]
        improved = best_val < fx[idx]
        moved = idx[improved]
        new_x = polls[np.arange(len(idx)), best]
        last_move[moved] = new_x[improved] - x[moved]
        x[moved] = new_x[improved]
        fx[moved] = best_val[improved]
        stalled = idx[~improved]
        steps[stalled] *= 0.5
        last_move[stalled] = 0.0

    return SearchResult(x=x, f=fx, converged=steps < min_step, evaluations=evals)

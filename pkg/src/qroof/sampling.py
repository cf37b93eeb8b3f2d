"""Seeded random channels, states and matrices for property checks."""

from __future__ import annotations

import numpy as np

from .channels import KrausPair
from .qubit import DensityOperator, bloch_matrix


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(2)


def random_channel(rng: np.random.Generator) -> KrausPair:
    """Trace-preserving Kraus pair from a random 4x2 isometry."""
    q, r = np.linalg.qr(complex_gaussian(rng, (4, 2)))
    q = q * (np.diag(r) / np.abs(np.diag(r)))[None, :]
    return KrausPair(q[:2], q[2:])


def random_pair(rng: np.random.Generator) -> KrausPair:
    """Kraus pair with independent Gaussian entries (not trace preserving)."""
    return KrausPair(complex_gaussian(rng, (2, 2)), complex_gaussian(rng, (2, 2)))


def random_ket(rng: np.random.Generator) -> np.ndarray:
    v = complex_gaussian(rng, 2)
    return v / np.linalg.norm(v)


def random_bloch(rng: np.random.Generator, max_radius: float = 1.0) -> np.ndarray:
    """Uniform point in the ball of radius ``max_radius``."""
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * max_radius * rng.uniform() ** (1 / 3)


def random_state(rng: np.random.Generator, max_radius: float = 0.999) -> DensityOperator:
    """Mixed state, uniform in the Bloch ball shrunk to ``max_radius``."""
    return DensityOperator(bloch_matrix(random_bloch(rng, max_radius)))


def random_pure(rng: np.random.Generator) -> DensityOperator:
    return DensityOperator.from_ket(random_ket(rng))


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(complex_gaussian(rng, (2, 2)))
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]

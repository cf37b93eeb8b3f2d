"""Length-two completely positive maps, named channel families, ensembles and Holevo chi."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .qubit import (
    CLOSED_FORM_TOL,
    STRUCT_TOL,
    DensityOperator,
    DomainError,
    StateLike,
    as_density,
    as_mat2,
    dagger,
    entropy_of_spectrum,
    eigvals_hermitian,
    von_neumann_entropy,
)

ENSEMBLE_CAP = 16


@dataclass(frozen=True, eq=False)
class KrausPair:
    """Two Kraus operators defining ``T(X) = A X A^+ + B X B^+``.

    Trace preservation is not enforced here: the anti-linear operator
    attached to the pair is defined without it.  :func:`apply_channel`
    refuses pairs that are not trace preserving.
    """

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        for name in ("A", "B"):
            m = as_mat2(getattr(self, name)).copy()
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @property
    def is_trace_preserving(self) -> bool:
        gram = dagger(self.A) @ self.A + dagger(self.B) @ self.B
        return bool(np.max(np.abs(gram - np.eye(2))) <= CLOSED_FORM_TOL)

    @property
    def is_length_two(self) -> bool:
        """True when A and B are linearly independent (relative tolerance 1e-10)."""
        a, b = self.A.ravel(), self.B.ravel()
        scale = max(np.linalg.norm(a), np.linalg.norm(b))
        if scale == 0.0:
            return False
        sv = np.linalg.svd(np.stack([a, b]) / scale, compute_uv=False)
        return bool(sv[-1] > CLOSED_FORM_TOL)

    def mixed(self, mu) -> "KrausPair":
        """The pair ``(mu00 A + mu01 B, mu10 A + mu11 B)`` spanning the same module."""
        mu = as_mat2(mu)
        return KrausPair(mu[0, 0] * self.A + mu[0, 1] * self.B,
                         mu[1, 0] * self.A + mu[1, 1] * self.B)

    def conjugated(self, c1, c2) -> "KrausPair":
        """The pair ``(C1 A C2, C1 B C2)``."""
        c1, c2 = as_mat2(c1), as_mat2(c2)
        return KrausPair(c1 @ self.A @ c2, c1 @ self.B @ c2)

    def __call__(self, rho: StateLike) -> DensityOperator:
        return apply_channel(self, rho)


@dataclass(frozen=True)
class PhaseDamping:
    """``T_z``: keeps the diagonal, multiplies the off-diagonal entry by ``z``."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not abs(z) < 1:
            raise DomainError(f"phase damping needs |z| < 1, got {z!r}")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class AmplitudeDamping:
    """Amplitude damping with Kraus operators ``diag(1, sqrt p)`` and ``sqrt(1-p) |0><1|``.

    ``p = 1`` is admitted as the noiseless limit (second Kraus operator zero).
    """

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not 0.0 < p <= 1.0:
            raise DomainError(f"amplitude damping needs 0 < p <= 1, got {p!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class Canonical:
    """Canonical pair ``A = diag(a00, a11)``, ``B = antidiag(b01, b10)`` (trace preserving)."""

    a00: complex
    a11: complex
    b01: complex
    b10: complex

    def __post_init__(self):
        for name in ("a00", "a11", "b01", "b10"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        col0 = abs(self.a00) ** 2 + abs(self.b10) ** 2
        col1 = abs(self.a11) ** 2 + abs(self.b01) ** 2
        if abs(col0 - 1) > CLOSED_FORM_TOL or abs(col1 - 1) > CLOSED_FORM_TOL:
            raise DomainError("canonical form requires |a00|^2+|b10|^2 = |a11|^2+|b01|^2 = 1")


ChannelSpec = Union[KrausPair, PhaseDamping, AmplitudeDamping, Canonical]


def kraus_of(spec: ChannelSpec) -> KrausPair:
    """Kraus realization of a channel spec.

    Phase damping uses ``A = diag(1, z*)``, ``B = diag(0, sqrt(1 - |z|^2))``;
    the conjugate makes the off-diagonal entry scale by ``z`` rather than ``z*``.
    """
    if isinstance(spec, KrausPair):
        return spec
    if isinstance(spec, PhaseDamping):
        z = spec.z
        return KrausPair(np.diag([1.0, z.conjugate()]), np.diag([0.0, math.sqrt(1 - abs(z) ** 2)]))
    if isinstance(spec, AmplitudeDamping):
        p = spec.p
        return KrausPair(np.diag([1.0, math.sqrt(p)]),
                         np.array([[0.0, math.sqrt(1 - p)], [0.0, 0.0]]))
    if isinstance(spec, Canonical):
        return KrausPair(np.diag([spec.a00, spec.a11]),
                         np.array([[0.0, spec.b01], [spec.b10, 0.0]]))
    raise DomainError(f"not a channel spec: {spec!r}")


def channel_kind(spec: ChannelSpec) -> str:
    return {KrausPair: "kraus", PhaseDamping: "phase_damping",
            AmplitudeDamping: "amplitude_damping", Canonical: "canonical"}[type(spec)]


def apply_kraus(kraus: KrausPair, m: np.ndarray) -> np.ndarray:
    """``A m A^+ + B m B^+`` on a raw (stack of) 2x2 arrays, unchecked."""
    A, B = kraus.A, kraus.B
    return A @ m @ dagger(A) + B @ m @ dagger(B)


def apply_channel(channel: ChannelSpec, rho: StateLike) -> DensityOperator:
    kraus = kraus_of(channel)
    if not kraus.is_trace_preserving:
        raise DomainError("Kraus pair is not trace preserving; refusing to apply as a channel")
    return DensityOperator(apply_kraus(kraus, as_density(rho).matrix))


def output_entropy(channel: ChannelSpec, rho: StateLike, base: float | None = None) -> float:
    """``S(T(rho))``."""
    return von_neumann_entropy(apply_channel(channel, rho), base)


class Ensemble:
    """A finite list of weighted states with weights summing to one."""

    def __init__(self, members: Sequence[Tuple[float, StateLike]], cap: int = ENSEMBLE_CAP):
        members = [(float(w), as_density(s)) for w, s in members]
        if not members:
            raise DomainError("ensemble is empty")
        if len(members) > cap:
            raise DomainError(f"ensemble has {len(members)} members, cap is {cap}")
        if any(not w > 0 for w, _ in members):
            raise DomainError("ensemble weights must be positive")
        total = math.fsum(w for w, _ in members)
        if abs(total - 1.0) > STRUCT_TOL:
            raise DomainError(f"ensemble weights sum to {total!r}, expected 1")
        self.members = tuple(members)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.members])

    @property
    def states(self) -> Tuple[DensityOperator, ...]:
        return tuple(s for _, s in self.members)

    def __len__(self):
        return len(self.members)

    def average(self) -> DensityOperator:
        m = sum(w * s.matrix for w, s in self.members)
        return DensityOperator(m)

    def mapped(self, channel: ChannelSpec) -> "Ensemble":
        return Ensemble([(w, apply_channel(channel, s)) for w, s in self.members])


def holevo_chi(ensemble: Ensemble, channel: Optional[ChannelSpec] = None,
               base: float | None = None) -> float:
    """Holevo quantity ``S(av) - sum p_j S(rho_j)`` of ``T(ensemble)``.

    With no channel the identity is used.
    """
    if not isinstance(ensemble, Ensemble):
        raise DomainError("holevo_chi needs an Ensemble")
    e = ensemble if channel is None else ensemble.mapped(channel)
    mats = np.stack([s.matrix for s in e.states])
    hi, lo = eigvals_hermitian(mats)
    member_entropy = entropy_of_spectrum(hi, lo, base)
    chi = von_neumann_entropy(e.average(), base) - float(e.weights @ member_entropy)
    return chi

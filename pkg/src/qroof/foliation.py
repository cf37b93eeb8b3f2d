"""Leaves of constant concurrence in the Bloch ball and the optimal decompositions they carry.

The squared concurrence of a length-two channel is a positive semi-definite
quadratic form of rank at most two in the homogeneous Bloch coordinates
``(1, x1, x2, x3)``; it is the sum ``4 (L1^2 + L2^2)`` of two affine forms.
The leaves are the level sets of the pair ``(L1, L2)`` inside the ball:
chords when the linear parts are independent, discs when they are parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .channels import (
    AmplitudeDamping,
    Canonical,
    ChannelSpec,
    KrausPair,
    apply_kraus,
    kraus_of,
)
from .concurrence import canonical_roots, concurrence, concurrence_theta_squared
from .entanglement import entanglement_E
from .qubit import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityOperator,
    DomainError,
    StateLike,
    as_density,
    bloch_ket,
    det2,
    eigvals_hermitian,
    entropy_of_spectrum,
)
from .roof import PureDecomposition
from .theta import theta_of

# relative eigenvalue cutoff when ranking the quadratic form
RANK_TOL = 1e-9
PURE_TOL = 1e-12


class FoliationError(RuntimeError):
    """A computed leaf or decomposition failed its own consistency checks."""


@dataclass(frozen=True)
class LinearForm:
    """``L(x) = c0 + c1 x1 + c2 x2 + c3 x3`` on Bloch coordinates."""

    c0: float
    coeffs: Tuple[float, float, float]

    def __call__(self, x) -> float:
        if isinstance(x, DensityOperator):
            x = x.bloch
        return float(self.c0 + np.dot(self.coeffs, x))

    @property
    def is_zero(self) -> bool:
        return self.c0 == 0 and not any(self.coeffs)


@dataclass(frozen=True, eq=False)
class Leaf:
    """A leaf of the concurrence foliation through a given state.

    ``kind`` is ``"line"`` (a chord, two pure endpoints), ``"plane-disc"``
    (a disc bounded by a circle of pure states; ``endpoints`` then holds the
    diameter through the base point) or ``"point"`` (a pure state).
    """

    kind: str
    base_point: np.ndarray
    directions: Tuple[np.ndarray, ...]
    endpoints: Tuple[DensityOperator, ...]
    center: Optional[np.ndarray] = None
    radius: float = 0.0
    normal: Optional[np.ndarray] = field(default=None)

    def circle_point(self, phi: float) -> DensityOperator:
        if self.kind != "plane-disc":
            raise DomainError("circle_point is defined for plane-disc leaves only")
        e1, e2 = self.directions
        x = self.center + self.radius * (math.cos(phi) * e1 + math.sin(phi) * e2)
        return _pure_from_bloch(x)

    def sample(self, n: int = 20) -> np.ndarray:
        """``n`` Bloch points of the leaf (closed chord, or a grid over the disc)."""
        if self.kind == "point":
            return np.repeat(self.base_point[None, :], n, axis=0)
        if self.kind == "line":
            a, b = (e.bloch for e in self.endpoints)
            t = np.linspace(0.0, 1.0, n)[:, None]
            return (1 - t) * a + t * b
        e1, e2 = self.directions
        k = np.arange(n)
        rad = self.radius * np.sqrt((k + 0.5) / n)
        ang = k * math.pi * (3 - math.sqrt(5))
        return (self.center + rad[:, None] * (np.cos(ang)[:, None] * e1 + np.sin(ang)[:, None] * e2))


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    return -v if v[np.argmax(np.abs(v))] < 0 else v


def _pure_from_bloch(x: np.ndarray) -> DensityOperator:
    return DensityOperator.from_ket(bloch_ket(x))


def as_canonical(channel: ChannelSpec) -> Optional[Canonical]:
    """The channel as a :class:`Canonical` spec when it already has that shape."""
    if isinstance(channel, Canonical):
        return channel
    if isinstance(channel, AmplitudeDamping):
        p = channel.p
        return Canonical(1.0, math.sqrt(p), math.sqrt(1 - p), 0.0)
    return None


def canonical_forms(spec: Canonical) -> Tuple[LinearForm, LinearForm]:
    """The two affine forms with ``C = 2 sqrt(L1^2 + L2^2)`` for a canonical pair."""
    if not isinstance(spec, Canonical):
        raise DomainError("canonical_forms needs a Canonical spec")
    y0 = abs(spec.b10 * spec.a00)
    y1 = abs(spec.b01 * spec.a11)
    l1 = LinearForm((y0 - y1) / 2, (0.0, 0.0, (y0 + y1) / 2))
    w, w_partner = canonical_roots(spec)
    c1 = (0.5j * (w - w_partner)).real
    c2 = (0.5 * (w + w_partner)).real
    l2 = LinearForm(0.0, (float(c1), float(c2), 0.0))
    return l1, l2


_HERMITIAN_BASIS = (np.eye(2, dtype=complex) / 2, SIGMA_X / 2, SIGMA_Y / 2, SIGMA_Z / 2)


def concurrence_quadratic_form(channel: ChannelSpec) -> np.ndarray:
    """Symmetric 4x4 ``Q`` with ``C^2 = y^T Q y`` for ``y = (1, x1, x2, x3)``.

    Obtained by polarizing the theta formula on the Pauli basis; exact up to
    rounding because the formula is a quadratic polynomial in the matrix.
    """
    alpha = theta_of(channel).alpha
    basis = np.array(_HERMITIAN_BASIS)
    pair_sums = basis[:, None] + basis[None, :]
    diag = concurrence_theta_squared(alpha, basis)
    both = concurrence_theta_squared(alpha, pair_sums)
    q = (both - diag[:, None] - diag[None, :]) / 2
    np.fill_diagonal(q, diag)
    return (q + q.T) / 2


def general_forms(channel: ChannelSpec) -> Tuple[LinearForm, LinearForm]:
    """Affine forms of any length-two pair, from the spectral decomposition of ``Q``."""
    q = concurrence_quadratic_form(channel)
    mu, vecs = np.linalg.eigh(q)
    order = np.argsort(mu)[::-1]
    scale = max(mu[order[0]], 0.0)
    forms = []
    for k in order[:2]:
        if mu[k] <= RANK_TOL * scale or mu[k] <= 0:
            forms.append(LinearForm(0.0, (0.0, 0.0, 0.0)))
            continue
        v = math.sqrt(mu[k]) / 2 * vecs[:, k]
        forms.append(LinearForm(float(v[0]), (float(v[1]), float(v[2]), float(v[3]))))
    return forms[0], forms[1]


def foliation_forms(channel: ChannelSpec) -> Tuple[LinearForm, LinearForm]:
    """``(L1, L2)``: exact formulas for canonical pairs, spectral route otherwise."""
    spec = as_canonical(channel)
    if spec is not None:
        return canonical_forms(spec)
    return general_forms(channel)


def leaf_geometry(channel: ChannelSpec) -> Tuple[str, np.ndarray]:
    """``("line", direction)`` or ``("plane-disc", normal)`` for the whole foliation."""
    q3 = concurrence_quadratic_form(channel)[1:, 1:]
    mu, vecs = np.linalg.eigh(q3)
    top = mu[-1]
    if top <= 1e-14:
        # concurrence vanishes identically: every chord is a leaf, take the x1 axis
        return "line", np.array([1.0, 0.0, 0.0])
    rank = int(np.sum(mu > RANK_TOL * top))
    if rank == 1:
        return "plane-disc", _canonical_sign(vecs[:, -1])
    return "line", _canonical_sign(vecs[:, 0])


def _chord(base: np.ndarray, direction: np.ndarray) -> Tuple[float, float]:
    """Parameters ``t_plus >= 0 >= t_minus`` with ``|base + t direction| = 1``."""
    bd = float(base @ direction)
    disc = max(bd * bd - (float(base @ base) - 1.0), 0.0)
    root = math.sqrt(disc)
    return -bd + root, -bd - root


def _in_plane_axis(base: np.ndarray, normal: np.ndarray) -> np.ndarray:
    radial = base - (base @ normal) * normal
    if np.linalg.norm(radial) > 1e-12:
        return radial / np.linalg.norm(radial)
    for axis in np.eye(3):
        v = axis - (axis @ normal) * normal
        if np.linalg.norm(v) > 1e-6:
            return v / np.linalg.norm(v)
    raise AssertionError("unreachable")


def leaf_through(channel: ChannelSpec, rho: StateLike) -> Leaf:
    """The leaf of constant concurrence through ``rho``."""
    rho = as_density(rho)
    x = rho.bloch
    kind, vec = leaf_geometry(channel)
    if rho.det <= PURE_TOL:
        return Leaf("point", x, (), (rho,))
    if kind == "line":
        t_plus, t_minus = _chord(x, vec)
        ends = (_pure_from_bloch(x + t_plus * vec), _pure_from_bloch(x + t_minus * vec))
        return Leaf("line", x, (vec,), ends)
    normal = vec
    center = (x @ normal) * normal
    radius = math.sqrt(max(1.0 - float(center @ center), 0.0))
    e1 = _in_plane_axis(x, normal)
    e2 = np.cross(normal, e1)
    t_plus, t_minus = _chord(x, e1)
    ends = (_pure_from_bloch(x + t_plus * e1), _pure_from_bloch(x + t_minus * e1))
    return Leaf("plane-disc", x, (e1, e2), ends, center=center, radius=radius, normal=normal)


def optimal_decomposition(channel: ChannelSpec, rho: StateLike) -> PureDecomposition:
    """Two-member optimal decomposition of ``rho`` on its leaf.

    For a disc the diameter through ``rho`` is used (the x1 direction when
    ``rho`` sits on the disc's axis).  The result is checked: it averages to
    ``rho``, both members share one concurrence, and for trace-preserving
    channels its output entropy average equals ``E(T; rho)``.
    """
    rho = as_density(rho)
    leaf = leaf_through(channel, rho)
    if leaf.kind == "point":
        return PureDecomposition((1.0,), (rho,), bloch_ket(rho.bloch)[None, :])
    x = rho.bloch
    direction = leaf.directions[0]
    t_plus, t_minus = _chord(x, direction)
    w_plus = -t_minus / (t_plus - t_minus)
    kets = np.array([bloch_ket(e.bloch) for e in leaf.endpoints])
    dec = PureDecomposition((w_plus, 1.0 - w_plus), leaf.endpoints, kets)
    _check_decomposition(channel, rho, dec)
    return dec


def _check_decomposition(channel: ChannelSpec, rho: DensityOperator, dec: PureDecomposition):
    if dec.average_residual(rho) > 1e-10:
        raise FoliationError("decomposition does not average to rho")
    c = [concurrence(channel, s)[0] for s in dec.states]
    if abs(c[0] - c[1]) > 1e-10:
        raise FoliationError(f"leaf endpoints have different concurrence: {c}")
    kraus = kraus_of(channel)
    if kraus.is_trace_preserving:
        outs = np.stack([apply_kraus(kraus, s.matrix) for s in dec.states])
        hi, lo = eigvals_hermitian(outs)
        avg = float(np.dot(dec.weights, entropy_of_spectrum(hi, lo)))
        if abs(avg - entanglement_E(channel, rho)) > 1e-8:
            raise FoliationError("decomposition does not attain E(T; rho)")


def zero_concurrence_states(channel: ChannelSpec) -> List[DensityOperator]:
    """Pure states with vanishing concurrence (mapped to pure outputs).

    Canonical pairs use ``b10 a00 a0^2 = b01 a11 a1^2``; other pairs solve
    ``<a|theta|a> = 0``.  Returns up to two states, or an empty list when the
    concurrence vanishes identically.
    """
    spec = as_canonical(channel)
    if spec is not None:
        # <a|theta|a>^* = 2 (b10 a00 a0^2 - b01 a11 a1^2)
        coeffs = (spec.b10 * spec.a00, 0.0, -spec.b01 * spec.a11)
    else:
        alpha_bar = np.conj(theta_of(channel).alpha)
        coeffs = (alpha_bar[0, 0], 2 * alpha_bar[0, 1], alpha_bar[1, 1])
    kets = _solve_binary_quadratic(*coeffs)
    states: List[DensityOperator] = []
    for a in kets:
        s = DensityOperator.from_ket(a)
        if not any(np.allclose(s.matrix, t.matrix, atol=1e-12) for t in states):
            states.append(s)
    return states


def _solve_binary_quadratic(c0, c1, c2) -> List[np.ndarray]:
    """Unit kets ``a`` with ``c0 a0^2 + c1 a0 a1 + c2 a1^2 = 0``."""
    scale = max(abs(c0), abs(c1), abs(c2))
    if scale <= 1e-14:
        return []
    c0, c1, c2 = (complex(c) / scale for c in (c0, c1, c2))
    if abs(c0) <= 1e-14:
        out = [np.array([1.0, 0.0])]
        if abs(c1) > 1e-14:
            out.append(np.array([-c2 / c1, 1.0]))
        return [v / np.linalg.norm(v) for v in out]
    roots = np.roots([c0, c1, c2])
    return [np.array([t, 1.0]) / math.sqrt(abs(t) ** 2 + 1) for t in roots]


def pure_output_det(channel: ChannelSpec, state: StateLike) -> float:
    """``det T(pi)``; zero exactly when ``pi`` is mapped to a pure state."""
    return float(det2(apply_kraus(kraus_of(channel), as_density(state).matrix)).real)

"""Seeded property suite behind ``qroof verify``.

Every property draws from its own generator seeded with ``(seed, index)``,
so reports are reproducible byte for byte and independent of which other
properties run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .channels import AmplitudeDamping, Canonical, Ensemble, PhaseDamping, apply_kraus, holevo_chi
from .concurrence import (
    concurrence,
    concurrence_pure,
    concurrence_spectral,
    concurrence_theta,
    concurrence_via_theta,
    pure_concurrence_functional,
)
from .entanglement import (
    amplitude_damping_objective,
    capacity_amplitude_damping,
    capacity_numeric,
    entanglement_E,
    output_entropy_functional,
)
from .foliation import leaf_geometry, leaf_through, optimal_decomposition
from .qubit import DensityOperator, det2, h2, von_neumann_entropy
from .roof import decomposition_from_mixer, decomposition_value, flatness_residual, random_mixer, roof_min
from .sampling import (
    complex_gaussian,
    random_channel,
    random_ket,
    random_pair,
    random_pure,
    random_state,
)
from .theta import (
    antisymmetric_identity_residual,
    pure_expectation,
    theta_conjugate_transform,
    theta_from_kraus,
    theta_module_change,
    theta_spinflip_form,
)


@dataclass(frozen=True)
class PropertyReport:
    name: str
    worst: float
    tol: float
    count: int

    @property
    def passed(self) -> bool:
        return bool(self.worst <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} worst={self.worst:.3e}  tol={self.tol:.0e}  n={self.count}"


def random_canonical(rng: np.random.Generator) -> Canonical:
    t0, t1 = rng.uniform(0, math.pi / 2, size=2)
    ph = np.exp(2j * math.pi * rng.uniform(size=4))
    return Canonical(math.cos(t0) * ph[0], math.cos(t1) * ph[1],
                     math.sin(t1) * ph[2], math.sin(t0) * ph[3])


def _alpha_gap(t1, t2) -> float:
    return float(np.max(np.abs(t1.alpha - t2.alpha)))


def _theta_dual_path(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_pair(rng)
        worst = max(worst, _alpha_gap(theta_from_kraus(k.A, k.B), theta_spinflip_form(k.A, k.B)))
    return worst


def _theta_symmetric(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_pair(rng)
        a = theta_from_kraus(k.A, k.B).alpha
        worst = max(worst, abs(a[0, 1] - a[1, 0]))
    return worst


def _determinant_link(rng, n, budget):
    worst = 0.0
    for i in range(n):
        k = random_pair(rng) if i % 2 else random_channel(rng)
        a = random_ket(rng)
        lhs = 4 * det2(apply_kraus(k, np.outer(a, a.conj()))).real
        rhs = abs(pure_expectation(theta_from_kraus(k.A, k.B), a)) ** 2
        worst = max(worst, abs(lhs - rhs))
    return worst


def _module_change(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_pair(rng)
        mu = complex_gaussian(rng, (2, 2))
        k2 = k.mixed(mu)
        worst = max(worst, _alpha_gap(theta_from_kraus(k2.A, k2.B),
                                      theta_module_change(theta_from_kraus(k.A, k.B), mu)))
    return worst


def _conjugate_transform(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_pair(rng)
        c1, c2 = complex_gaussian(rng, (2, 2)), complex_gaussian(rng, (2, 2))
        k2 = k.conjugated(c1, c2)
        worst = max(worst, _alpha_gap(theta_from_kraus(k2.A, k2.B),
                                      theta_conjugate_transform(theta_from_kraus(k.A, k.B), c1, c2)))
    return worst


def _tensor_identity(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_pair(rng)
        worst = max(worst, antisymmetric_identity_residual(k.A, k.B, random_ket(rng)))
    return worst


def _concurrence_spectral(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_channel(rng)
        rho = random_state(rng)
        t = theta_from_kraus(k.A, k.B)
        worst = max(worst, abs(concurrence_theta(t, rho) - concurrence_spectral(t, rho)))
    return worst


def _concurrence_pure(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_channel(rng)
        pi = random_pure(rng)
        worst = max(worst, abs(concurrence_theta(theta_from_kraus(k.A, k.B), pi) - concurrence_pure(k, pi)))
    return worst


def _concurrence_closed_forms(rng, n, budget):
    worst = 0.0
    for i in range(n):
        if i % 3 == 0:
            spec = random_canonical(rng)
        elif i % 3 == 1:
            spec = PhaseDamping(complex(*rng.uniform(-0.7, 0.7, size=2)))
        else:
            spec = AmplitudeDamping(rng.uniform(0.01, 1.0))
        rho = random_state(rng)
        worst = max(worst, abs(concurrence(spec, rho)[0] - concurrence_via_theta(spec, rho)))
    return worst


def _concurrence_convexity(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_channel(rng)
        ra, rb = random_state(rng), random_state(rng)
        t = rng.uniform()
        mix = DensityOperator(t * ra.matrix + (1 - t) * rb.matrix)
        excess = (concurrence(k, mix)[0]
                  - t * concurrence(k, ra)[0] - (1 - t) * concurrence(k, rb)[0])
        worst = max(worst, excess)
    return max(worst, 0.0)


def _holevo_monotone(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_channel(rng)
        size = int(rng.integers(2, 6))
        w = rng.dirichlet(np.ones(size))
        ens = Ensemble([(float(wi), random_state(rng, 1.0)) for wi in w])
        worst = max(worst, holevo_chi(ens, k) - holevo_chi(ens))
    return max(worst, 0.0)


def _h2_shape(rng, n, budget):
    x = np.linspace(0.0, 1.0, 10_001)[1:-1]
    vals = h2(x)
    step = 1e-3
    inner = x[(x > step) & (x < 1 - step)]
    second = h2(inner + step) - 2 * h2(inner) + h2(inner - step)
    return float(max(0.0, -np.min(np.diff(vals)), -np.min(second)))


def _capacity_amplitude_damping(rng, n, budget):
    worst = 0.0
    for p in np.linspace(0.1, 0.9, 5):
        exact = capacity_amplitude_damping(float(p)).capacity
        worst = max(worst, abs(capacity_numeric(AmplitudeDamping(float(p))).capacity - exact))
        r = np.linspace(0.0, 1.0, 1001)
        f = amplitude_damping_objective(float(p), r)
        worst = max(worst, float(np.max(f[2:] - 2 * f[1:-1] + f[:-2])))
    return max(worst, 0.0)


def _leaf_constancy(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_channel(rng)
        leaf = leaf_through(k, random_state(rng))
        pts = leaf.sample(12)
        c = [concurrence(k, DensityOperator.from_bloch(x))[0] for x in pts]
        worst = max(worst, max(c) - min(c))
    return worst


def _module_invariance(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_channel(rng)
        mu = complex_gaussian(rng, (2, 2))
        kind1, v1 = leaf_geometry(k)
        kind2, v2 = leaf_geometry(k.mixed(mu))
        worst = max(worst, float(np.max(np.abs(v1 - v2))) if kind1 == kind2 else math.inf)
    return worst


def _foliation_decomposition(rng, n, budget):
    worst = 0.0
    for _ in range(n):
        k = random_channel(rng)
        rho = random_state(rng)
        dec = optimal_decomposition(k, rho)
        avg = sum(w * von_neumann_entropy(apply_kraus(k, s.matrix)) for w, s in dec.members)
        worst = max(worst, abs(avg - entanglement_E(k, rho)), dec.average_residual(rho))
    return worst


def _oracle_runs(rng, n, budget):
    """Shared oracle data: per instance, concurrence and E gaps, flatness, random-decomposition slack."""
    rows = []
    for i in range(n):
        k = random_channel(rng)
        rho = random_state(rng)
        seed = int(rng.integers(2**31))
        rc = roof_min(pure_concurrence_functional(k), rho, budget=budget, seed=seed)
        g = output_entropy_functional(k)
        re = roof_min(g, rho, budget=budget, seed=seed)
        other = decomposition_value(g, decomposition_from_mixer(rho, random_mixer(rng, 2 + i % 3)))
        rows.append((abs(rc.value - concurrence(k, rho)[0]),
                     abs(re.value - entanglement_E(k, rho)),
                     max(flatness_residual(rc), flatness_residual(re)),
                     max(re.value - other, 0.0)))
    return np.array(rows).reshape(-1, 4)


@dataclass(frozen=True)
class _Spec:
    name: str
    tol: float
    check: Callable
    scale: float = 1.0


_PROPERTIES = [
    _Spec("theta-dual-path", 1e-13, _theta_dual_path, 10),
    _Spec("theta-symmetric", 1e-14, _theta_symmetric, 10),
    _Spec("determinant-link", 1e-12, _determinant_link, 10),
    _Spec("module-change", 1e-13, _module_change, 4),
    _Spec("conjugate-transform", 1e-13, _conjugate_transform, 4),
    _Spec("tensor-identity", 1e-13, _tensor_identity, 4),
    _Spec("concurrence-spectral", 1e-12, _concurrence_spectral, 4),
    _Spec("concurrence-pure", 1e-12, _concurrence_pure, 4),
    _Spec("concurrence-closed-forms", 1e-12, _concurrence_closed_forms, 6),
    _Spec("concurrence-convexity", 1e-10, _concurrence_convexity, 10),
    _Spec("holevo-monotonicity", 1e-9, _holevo_monotone, 10),
    _Spec("h2-shape", 1e-9, _h2_shape, 0),
    _Spec("capacity-amplitude-damping", 1e-5, _capacity_amplitude_damping, 0),
    _Spec("leaf-constancy", 1e-10, _leaf_constancy, 2),
    _Spec("foliation-module-invariance", 1e-10, _module_invariance, 2),
    _Spec("foliation-decomposition", 1e-8, _foliation_decomposition, 2),
]

_ORACLE_PROPERTIES = [
    ("oracle-concurrence", 1e-4),
    ("oracle-entanglement", 2e-4),
    ("oracle-flatness", 1e-3),
    ("oracle-lower-bound", 2e-4),
]


def run_suite(seed: int, cases: int, budget: int = 20_000) -> List[PropertyReport]:
    """Run every property; ``cases`` sets the instance counts (oracle checks use exactly ``cases``)."""
    if cases < 1:
        raise ValueError("cases must be at least 1")
    reports = []
    for index, spec in enumerate(_PROPERTIES):
        rng = np.random.default_rng([seed, index])
        n = max(1, int(spec.scale * cases)) if spec.scale else 1
        reports.append(PropertyReport(spec.name, float(spec.check(rng, n, budget)), spec.tol, n))
    rng = np.random.default_rng([seed, len(_PROPERTIES)])
    data = _oracle_runs(rng, cases, budget)
    for col, (name, tol) in enumerate(_ORACLE_PROPERTIES):
        reports.append(PropertyReport(name, float(np.max(data[:, col])), tol, cases))
    return reports


def format_report(reports: List[PropertyReport], seed: int, cases: int, budget: int) -> str:
    failed = sum(not r.passed for r in reports)
    lines = [f"qroof verify  seed={seed}  cases={cases}  budget={budget}"]
    lines += [r.line() for r in reports]
    lines.append(f"{len(reports) - failed}/{len(reports)} properties passed")
    return "\n".join(lines) + "\n"

"""Acceptance criteria: oracle equivalence plus invariant suites.

Each test prints one PASS/FAIL line with its worst residual, the tolerance,
the instance count and the runtime against its limit.
"""

import cmath
import math
import time

import numpy as np
import pytest

from qroof.channels import AmplitudeDamping, Ensemble, PhaseDamping, apply_kraus, holevo_chi, kraus_of
from qroof.concurrence import concurrence, concurrence_theta, pure_concurrence_functional
from qroof.entanglement import (
    amplitude_damping_objective,
    capacity_amplitude_damping,
    capacity_numeric,
    entanglement_E,
    output_entropy_functional,
)
from qroof.foliation import leaf_through
from qroof.qubit import DensityOperator, det2, density_from_bloch, h2
from qroof.roof import (
    decomposition_from_mixer,
    decomposition_value,
    flatness_residual,
    random_mixer,
    roof_max,
    roof_min,
)
from qroof.sampling import complex_gaussian, random_channel, random_ket, random_pair, random_state
from qroof.theta import (
    antisymmetric_identity_residual,
    pure_expectation,
    theta_conjugate_transform,
    theta_from_kraus,
    theta_module_change,
    theta_spinflip_form,
)

SEED = 2024


def report(capsys, number, title, checks, elapsed, limit):
    """Print the criterion line; ``checks`` is a list of (label, worst, tol, n, ok)."""
    ok = all(c[4] for c in checks) and elapsed < limit
    parts = "; ".join(f"{label} worst={worst:.2e} tol={tol:.0e} n={n}" for label, worst, tol, n, _ in checks)
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2} {title}: {parts}; {elapsed:.2f}s < {limit:g}s"
    with capsys.disabled():
        print("\n" + line)
    return ok


def test_01_theta_dual_path(capsys):
    rng = np.random.default_rng([SEED, 1])
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        k = random_pair(rng)
        gap = theta_from_kraus(k.A, k.B).alpha - theta_spinflip_form(k.A, k.B).alpha
        worst = max(worst, float(np.max(np.abs(gap))))
    elapsed = time.perf_counter() - t0
    assert report(capsys, 1, "theta dual path", [("residual", worst, 1e-13, 500, worst < 1e-13)],
                  elapsed, 1.0)


def test_02_determinant_link(capsys):
    rng = np.random.default_rng([SEED, 2])
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(500):
        # alternate trace-preserving channels and arbitrary pairs
        k = random_channel(rng) if i % 2 else random_pair(rng)
        a = random_ket(rng)
        lhs = 4 * det2(apply_kraus(k, np.outer(a, a.conj()))).real
        rhs = abs(pure_expectation(theta_from_kraus(k.A, k.B), a)) ** 2
        worst = max(worst, abs(lhs - rhs))
    elapsed = time.perf_counter() - t0
    assert report(capsys, 2, "determinant link", [("residual", worst, 1e-12, 500, worst < 1e-12)],
                  elapsed, 1.0)


def test_03_flat_roof_equality(capsys):
    rng = np.random.default_rng([SEED, 3])
    t0 = time.perf_counter()
    c_gap = e_gap = flat = 0.0
    n = 200
    for i in range(n):
        k = random_channel(rng)
        rho = random_state(rng)
        c = concurrence_theta(theta_from_kraus(k.A, k.B), rho)
        rc = roof_min(pure_concurrence_functional(k), rho, seed=i)
        re = roof_min(output_entropy_functional(k), rho, seed=i)
        c_gap = max(c_gap, abs(rc.value - c))
        e_gap = max(e_gap, abs(re.value - h2(min(c, 1.0))))
        flat = max(flat, flatness_residual(rc), flatness_residual(re))
    elapsed = time.perf_counter() - t0
    checks = [("|roof C - C|", c_gap, 1e-4, n, c_gap <= 1e-4),
              ("|roof S.T - h2(C)|", e_gap, 2e-4, n, e_gap <= 2e-4),
              ("flatness", flat, 1e-3, 2 * n, flat <= 1e-3)]
    assert report(capsys, 3, "flat roof equality", checks, elapsed, 120.0)


def test_04_phase_damping(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    grid = np.linspace(-0.7, 0.7, 10)
    zs = [r * cmath.exp(1j * phi) for r, phi in
          [(0.0, 0.0), (0.25, 0.4), (0.5, 0.0), (0.75, -1.2), (0.95, 2.5)]]
    count = 0
    for z in zs:
        pair = kraus_of(PhaseDamping(z))
        for x1 in grid:
            for x2 in grid:
                rho = density_from_bloch([x1, x2, 0.0])
                closed = h2(math.sqrt((1 - abs(z) ** 2) * (x1 * x1 + x2 * x2)))
                worst = max(worst, abs(entanglement_E(pair, rho) - closed))
                count += 1
    # chord through diag(0.6, 0.4) with off-diagonal 0.3
    rho = DensityOperator(np.array([[0.6, 0.3], [0.3, 0.4]]))
    leaf = leaf_through(PhaseDamping(0.5), rho)
    ends = sorted(leaf.endpoints, key=lambda e: -e.matrix[0, 0].real)
    targets = [np.array([[0.9, 0.3], [0.3, 0.1]]), np.array([[0.1, 0.3], [0.3, 0.9]])]
    end_gap = max(float(np.max(np.abs(e.matrix - t))) for e, t in zip(ends, targets))
    elapsed = time.perf_counter() - t0
    checks = [("E vs theta pipeline", worst, 1e-10, count, worst < 1e-10),
              ("leaf endpoints", end_gap, 1e-12, 2, end_gap < 1e-12)]
    assert report(capsys, 4, "phase damping", checks, elapsed, 5.0)


def test_05_covariance_laws(capsys):
    rng = np.random.default_rng([SEED, 5])
    t0 = time.perf_counter()
    module = conj = tensor = 0.0
    for _ in range(200):
        k = random_pair(rng)
        theta = theta_from_kraus(k.A, k.B)
        mu = complex_gaussian(rng, (2, 2))
        k2 = k.mixed(mu)
        module = max(module, float(np.max(np.abs(
            theta_from_kraus(k2.A, k2.B).alpha - theta_module_change(theta, mu).alpha))))
        c1, c2 = complex_gaussian(rng, (2, 2)), complex_gaussian(rng, (2, 2))
        k3 = k.conjugated(c1, c2)
        conj = max(conj, float(np.max(np.abs(
            theta_from_kraus(k3.A, k3.B).alpha - theta_conjugate_transform(theta, c1, c2).alpha))))
        tensor = max(tensor, antisymmetric_identity_residual(k.A, k.B, random_ket(rng)))
    elapsed = time.perf_counter() - t0
    checks = [("module change", module, 1e-13, 200, module < 1e-13),
              ("conjugate transform", conj, 1e-13, 200, conj < 1e-13),
              ("tensor identity", tensor, 1e-13, 200, tensor < 1e-13)]
    assert report(capsys, 5, "covariance laws", checks, elapsed, 1.0)


def test_06_module_invariance(capsys):
    rng = np.random.default_rng([SEED, 6])
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        k = random_channel(rng)
        mu = complex_gaussian(rng, (2, 2))
        rho = random_state(rng)
        leaf1 = leaf_through(k, rho)
        leaf2 = leaf_through(k.mixed(mu), rho)
        if leaf1.kind != leaf2.kind:
            worst = math.inf
            continue
        for d1, d2 in zip(leaf1.directions, leaf2.directions):
            worst = max(worst, float(np.max(np.abs(d1 - d2))))
    elapsed = time.perf_counter() - t0
    assert report(capsys, 6, "Kraus-module foliation invariance",
                  [("direction gap", worst, 1e-10, 100, worst < 1e-10)], elapsed, 10.0)


def test_07_amplitude_damping_capacity(capsys):
    t0 = time.perf_counter()
    top = capacity_amplitude_damping(1.0)
    cap_gap = abs(top.capacity - math.log(2))
    r0_gap = abs(top.maximizer_r - 0.5)
    ps = np.round(np.linspace(0.1, 0.9, 9), 10)
    r = np.linspace(0.0, 1.0, 1000)
    concavity = -math.inf
    agreement = 0.0
    for p in ps:
        f = amplitude_damping_objective(p, r)
        concavity = max(concavity, float(np.max(f[2:] - 2 * f[1:-1] + f[:-2])))
        exact = capacity_amplitude_damping(p).capacity
        agreement = max(agreement, abs(capacity_numeric(AmplitudeDamping(p)).capacity - exact))
    elapsed = time.perf_counter() - t0
    checks = [("C(1) - ln 2", cap_gap, 1e-8, 1, cap_gap <= 1e-8),
              ("r0 - 1/2", r0_gap, 1e-6, 1, r0_gap <= 1e-6),
              ("max second difference", concavity, 1e-9, 9, concavity <= 1e-9),
              ("numeric vs 1-D", agreement, 1e-5, 9, agreement <= 1e-5)]
    assert report(capsys, 7, "amplitude-damping capacity", checks, elapsed, 30.0)


def test_08_holevo_monotonicity(capsys):
    rng = np.random.default_rng([SEED, 8])
    t0 = time.perf_counter()
    worst = -math.inf
    for _ in range(500):
        k = random_channel(rng)
        size = int(rng.integers(2, 7))
        w = rng.dirichlet(np.ones(size))
        ens = Ensemble([(float(x), random_state(rng, 1.0)) for x in w])
        worst = max(worst, holevo_chi(ens, k) - holevo_chi(ens))
    elapsed = time.perf_counter() - t0
    assert report(capsys, 8, "Holevo monotonicity",
                  [("max chi(T E) - chi(E)", worst, 1e-9, 500, worst <= 1e-9)], elapsed, 5.0)


def test_09_h2_shape(capsys):
    t0 = time.perf_counter()
    x = np.linspace(0.0, 1.0, 10_000)
    vals = h2(x)
    monotone = float(-np.min(np.diff(vals)))
    # central second differences with step 1e-3 at the interior grid points
    step = 1e-3
    inner = x[(x >= step) & (x <= 1 - step)]
    second = h2(inner + step) - 2 * h2(inner) + h2(inner - step)
    grid_second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
    convex = float(-min(np.min(second), np.min(grid_second)))
    elapsed = time.perf_counter() - t0
    checks = [("-min first difference", monotone, 1e-12, x.size, monotone <= 1e-12),
              ("-min second difference", convex, 1e-9, x.size, convex <= 1e-9)]
    assert report(capsys, 9, "h2 convex and nondecreasing", checks, elapsed, 1.0)


def test_10_roof_sandwich(capsys):
    rng = np.random.default_rng([SEED, 10])
    t0 = time.perf_counter()
    worst = 0.0
    n = 100
    for i in range(n):
        k = random_channel(rng)
        g = output_entropy_functional(k)
        rho = random_state(rng)
        lo = roof_min(g, rho, seed=i).value
        hi = roof_max(g, rho, seed=i).value
        for m in (2, 3, 4):
            v = decomposition_value(g, decomposition_from_mixer(rho, random_mixer(rng, m)))
            worst = max(worst, lo - v, v - hi)
    # concave roof of S(T_z(.)) depends on x3 only
    spread = 0.0
    z = 0.6 * cmath.exp(0.3j)
    g = output_entropy_functional(PhaseDamping(z))
    for x3 in (-0.5, 0.0, 0.4):
        values = []
        for radius, phi in [(0.0, 0.0), (0.5, 1.0), (0.8, -2.0)]:
            r = min(radius, 0.99 * math.sqrt(1 - x3 * x3))
            rho = density_from_bloch([r * math.cos(phi), r * math.sin(phi), x3])
            values.append(roof_max(g, rho).value)
        spread = max(spread, max(values) - min(values))
    elapsed = time.perf_counter() - t0
    checks = [("sandwich violation", worst, 2e-4, 3 * n, worst <= 2e-4),
              ("roof_max spread at fixed x3", spread, 2e-4, 9, spread <= 2e-4)]
    assert report(capsys, 10, "roof sandwich", checks, elapsed, 120.0)

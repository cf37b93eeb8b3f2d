import cmath
import math

import numpy as np
import pytest
from hypothesis import given

from qroof.channels import AmplitudeDamping, PhaseDamping, kraus_of
from qroof.qubit import DomainError, SIGMA_X
from qroof.sampling import complex_gaussian, random_ket, random_unitary
from qroof.theta import (
    AntilinearOperator,
    antisymmetric_identity_residual,
    pure_expectation,
    theta_conjugate_transform,
    theta_from_kraus,
    theta_module_change,
    theta_of,
    theta_spinflip_form,
)
from strategies import pairs


def test_amplitude_damping_theta():
    p = 0.3
    alpha = theta_of(AmplitudeDamping(p)).alpha
    assert np.allclose(alpha, np.diag([0, -2 * math.sqrt(p * (1 - p))]), atol=1e-15)


def test_phase_damping_theta():
    z = 0.6 * cmath.exp(0.7j)
    s = math.sqrt(1 - abs(z) ** 2)
    k = kraus_of(PhaseDamping(z))
    for alpha in (theta_from_kraus(k.A, k.B).alpha, theta_spinflip_form(k.A, k.B).alpha):
        assert np.allclose(alpha, [[0, s], [s, 0]], atol=1e-15)


def test_equal_pair_gives_zero():
    a = np.array([[1, 2j], [3, 4]])
    assert np.all(theta_from_kraus(a, a).alpha == 0)
    assert np.all(theta_spinflip_form(a, a).alpha == 0)


def test_identity_and_sigma_x():
    t1 = theta_from_kraus(np.eye(2), SIGMA_X).alpha
    t2 = theta_spinflip_form(np.eye(2), SIGMA_X).alpha
    assert np.max(np.abs(t1 - t2)) < 1e-14
    assert np.allclose(t1, [[2, 0], [0, -2]])


@given(pairs())
def test_dual_path_and_symmetry(k):
    t1 = theta_from_kraus(k.A, k.B)
    assert np.max(np.abs(t1.alpha - theta_spinflip_form(k.A, k.B).alpha)) < 1e-13
    assert t1.alpha[0, 1] == t1.alpha[1, 0]
    assert np.all(t1.alpha + theta_from_kraus(k.B, k.A).alpha == 0)


def test_module_change_examples():
    k = kraus_of(AmplitudeDamping(0.4))
    t = theta_from_kraus(k.A, k.B)
    assert np.allclose(theta_module_change(t, np.eye(2)).alpha, t.alpha)
    swapped = k.mixed(np.array([[0, 1], [1, 0]]))
    assert np.allclose(theta_from_kraus(swapped.A, swapped.B).alpha, -t.alpha)
    assert np.allclose(theta_module_change(t, np.diag([2j, 1])).alpha, -2j * t.alpha)


@given(pairs())
def test_module_change_matches_direct(k):
    mu = complex_gaussian(np.random.default_rng(abs(hash(k.A.tobytes())) % 2**32), (2, 2))
    k2 = k.mixed(mu)
    direct = theta_from_kraus(k2.A, k2.B).alpha
    assert np.max(np.abs(direct - theta_module_change(theta_from_kraus(k.A, k.B), mu).alpha)) < 1e-13


def test_conjugate_transform(rng):
    for _ in range(200):
        a, b = complex_gaussian(rng, (2, 2)), complex_gaussian(rng, (2, 2))
        c1, c2 = complex_gaussian(rng, (2, 2)), complex_gaussian(rng, (2, 2))
        direct = theta_from_kraus(c1 @ a @ c2, c1 @ b @ c2)
        law = theta_conjugate_transform(theta_from_kraus(a, b), c1, c2)
        assert np.max(np.abs(direct.alpha - law.alpha)) < 1e-13
        assert law.is_hermitian()


def test_unitary_c1_scales_by_conjugate_phase(rng):
    a, b = complex_gaussian(rng, (2, 2)), complex_gaussian(rng, (2, 2))
    u = random_unitary(rng)
    phase = np.linalg.det(u)
    t = theta_from_kraus(a, b)
    out = theta_conjugate_transform(t, u, np.eye(2))
    assert np.max(np.abs(out.alpha - np.conj(phase) * t.alpha)) < 1e-14


def test_pure_expectation_examples():
    t = AntilinearOperator(np.array([[0, 1], [1, 0]]))
    assert pure_expectation(t, [1, 0]) == 0
    assert pure_expectation(t, np.array([1, 1]) / math.sqrt(2)) == pytest.approx(1.0)
    c = 0.8
    assert pure_expectation(AntilinearOperator(np.diag([0, -c])), [0, 1]) == -c
    with pytest.raises(DomainError):
        pure_expectation(t, [1, 1])


@given(pairs())
def test_pairing_symmetric(k):
    rng = np.random.default_rng(7)
    a, b = random_ket(rng), random_ket(rng)
    t = theta_from_kraus(k.A, k.B)
    assert abs(pure_expectation(t, a, b) - pure_expectation(t, b, a)) < 1e-14 * max(1, np.max(np.abs(t.alpha)))


def test_antisymmetric_identity():
    a = np.array([[1, 2], [3, 4j]])
    assert antisymmetric_identity_residual(a, a, [0, 1]) == 0
    k = kraus_of(AmplitudeDamping(0.3))
    assert antisymmetric_identity_residual(k.A, k.B, [0, 1]) < 1e-13


@given(pairs())
def test_antisymmetric_identity_random(k):
    a = random_ket(np.random.default_rng(3))
    assert antisymmetric_identity_residual(k.A, k.B, a) < 1e-13


def test_operator_algebra():
    t = AntilinearOperator(np.array([[1, 2j], [2j, 3]]))
    v = np.array([1j, 2])
    assert np.allclose(t.apply(v), t.alpha @ np.conj(v))
    assert np.allclose(t.square() @ v, t.apply(t.apply(v)))
    assert np.allclose((t + (-t)).alpha, 0)
    assert t.is_hermitian()
    assert not AntilinearOperator(np.array([[0, 1], [-1, 0]])).is_hermitian()

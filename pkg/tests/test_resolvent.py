import cmath
import math

import numpy as np
import pytest

import helpers
from seqspectrum.errors import DivergenceError, PreconditionError, SingularMatrixError
from seqspectrum.linalg import CMatrix, CVector, operator_norm
from seqspectrum.resolvent import (
    _batched_spectral_norms,
    cauchy_coefficient,
    isometry_bound_check,
    pole_order_probe,
    resolvent_direct,
    resolvent_neumann,
    resolvent_norm_scan,
)
from seqspectrum.eigen import spectrum_info


def test_direct_matches_numpy_inverse():
    rng = np.random.default_rng(2)
    for _ in range(10):
        d = int(rng.integers(2, 7))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        lam = 5.0 + 1.0j  # comfortably outside the spectrum of a unit-scale matrix
        got = resolvent_direct(CMatrix(a), lam).data
        want = np.linalg.inv(lam * np.eye(d) - a)
        assert np.allclose(got, want, atol=1e-10)


def test_direct_diagonal_value():
    r = resolvent_direct(CMatrix(np.diag([0.5, 0.5])), 2.0)
    assert operator_norm(r) == pytest.approx(1.0 / 1.5, rel=1e-12)


def test_direct_at_eigenvalue_raises():
    with pytest.raises(SingularMatrixError):
        resolvent_direct(CMatrix(np.diag([1.0, 2.0])), 2.0)


def test_neumann_agrees_with_direct():
    rng = np.random.default_rng(8)
    for _ in range(10):
        d = int(rng.integers(2, 7))
        a = CMatrix(helpers.disk_matrix(rng, d))
        rho = spectrum_info(a).spectral_radius
        lam = (2.0 * rho + 0.1) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        res = resolvent_neumann(a, lam, 200)
        direct = resolvent_direct(a, lam)
        assert operator_norm(CMatrix(res.matrix.data - direct.data)) <= 1e-10
        assert res.last_term_norm <= 1e-12


def test_neumann_diverges_inside_spectrum():
    with pytest.raises(DivergenceError):
        resolvent_neumann(CMatrix(np.diag([2.0, 1.0])), 0.5, 200)


def test_first_resolvent_identity():
    rng = np.random.default_rng(13)
    a = CMatrix(helpers.disk_matrix(rng, 4))
    rho = spectrum_info(a).spectral_radius
    lam = (2.0 * rho + 0.1) * 1.0
    mu = (2.0 * rho + 0.1) * 1j
    rl = resolvent_direct(a, lam).data
    rm = resolvent_direct(a, mu).data
    lhs = rl - rm
    rhs = (mu - lam) * (rl @ rm)
    scale = 1.0 + abs(mu - lam) * np.linalg.norm(rl, 2) * np.linalg.norm(rm, 2)
    assert np.linalg.norm(lhs - rhs, 2) <= 1e-9 * scale


def test_cauchy_recovers_polynomial_coefficients():
    rng = np.random.default_rng(17)
    coeffs = [CVector(rng.standard_normal(3) + 1j * rng.standard_normal(3)) for _ in range(6)]

    def oracle(z):
        acc = np.zeros(3, dtype=complex)
        for c in reversed(coeffs):
            acc = acc * z + c.data
        return acc

    for k, c in enumerate(coeffs):
        got = cauchy_coefficient(oracle, k, radius=1.0, nodes=64)
        assert np.linalg.norm(got.data - c.data) <= 1e-12


def test_cauchy_liouville_echo_is_exactly_zero():
    # bounded entire function: all higher coefficients vanish, and the
    # symmetric node table cancels them without round-off
    c0 = np.array([1.0 + 2.0j, -0.5j])

    def oracle(z):
        return c0

    for k in range(1, 11):
        for radius in (0.5, 1.0, 2.0):
            got = cauchy_coefficient(oracle, k, radius=radius, nodes=64)
            assert np.linalg.norm(got.data) == 0.0


def test_cauchy_respects_radius_scaling():
    def oracle(z):
        return np.array([z**3])

    got = cauchy_coefficient(oracle, 3, radius=2.0, nodes=32)
    assert abs(got.data[0] - 1.0) <= 1e-13


def test_cauchy_node_validation():
    with pytest.raises(PreconditionError):
        cauchy_coefficient(lambda z: np.array([1.0]), 0, radius=1.0, nodes=2)
    with pytest.raises(PreconditionError):
        cauchy_coefficient(lambda z: np.array([1.0]), -1)


def test_scan_zero_matrix_circle():
    grid = [2.0 * cmath.exp(2j * math.pi * m / 16) for m in range(16)]
    samples = resolvent_norm_scan(CMatrix(np.zeros((3, 3))), grid)
    for s in samples:
        assert not s.singular_flag
        assert s.resolvent_norm == pytest.approx(0.5, rel=1e-12)


def test_scan_unitary_distance_formula():
    samples = resolvent_norm_scan(CMatrix(np.diag([1.0, 1j])), [2.0])
    assert samples[0].resolvent_norm == pytest.approx(1.0, rel=1e-9)


def test_scan_flags_spectral_hit():
    samples = resolvent_norm_scan(CMatrix(np.diag([1.0, 0.5])), [1.0, 3.0])
    assert samples[0].singular_flag
    assert not samples[1].singular_flag


def test_isometry_bound_on_random_unitaries():
    rng = np.random.default_rng(23)
    u = CMatrix(helpers.random_unitary(rng, 5))
    r = np.concatenate([rng.uniform(0.2, 0.99, 100), rng.uniform(1.01, 3.0, 100)])
    lams = list(r * np.exp(1j * rng.uniform(0, 2 * math.pi, 200)))
    report = isometry_bound_check(u, lams)
    assert report.ok
    assert report.samples_checked == 200
    assert report.worst_slack >= -1e-9


def test_isometry_bound_known_value():
    # U = diag(i, -i) at lambda = 2: norm 1/sqrt(5), bound 1/|2-1| = 1
    report = isometry_bound_check(CMatrix(np.diag([1j, -1j])), [2.0])
    assert report.violations == 0
    assert report.worst_slack == pytest.approx(1.0 - 1.0 / math.sqrt(5.0), abs=1e-9)


def test_isometry_bound_rejects_near_circle_sample():
    with pytest.raises(PreconditionError):
        isometry_bound_check(CMatrix(np.diag([1j, -1j])), [1.0000001])


def test_isometry_bound_requires_unitary():
    with pytest.raises(PreconditionError):
        isometry_bound_check(CMatrix(2.0 * np.eye(2)), [2.0])


def test_batched_norms_match_operator_norm():
    rng = np.random.default_rng(29)
    stack = rng.standard_normal((20, 5, 5)) + 1j * rng.standard_normal((20, 5, 5))
    got = _batched_spectral_norms(stack)
    for i in range(20):
        assert got[i] == pytest.approx(operator_norm(CMatrix(stack[i])), rel=1e-9)


def test_pole_order_simple_poles():
    radii = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4]
    report = pole_order_probe(CMatrix(np.diag([1.0, -1.0])), 1.0, radii)
    assert 0.95 <= report.fitted_order <= 1.05
    report = pole_order_probe(CMatrix(np.diag([1.0, 1j])), 1.0, radii)
    assert report.fitted_order == pytest.approx(1.0, abs=1e-9)


def test_pole_order_preconditions():
    u = CMatrix(np.diag([1.0, -1.0]))
    with pytest.raises(PreconditionError):
        pole_order_probe(u, 1.0, [1e-3, 1e-2, 1e-4, 1e-5])  # not decreasing
    with pytest.raises(PreconditionError):
        pole_order_probe(u, 1j, [1e-2, 1e-3, 1e-4, 1e-5])  # not an eigenvalue
    crowded = CMatrix(np.diag([1.0, cmath.exp(0.005j)]))
    with pytest.raises(PreconditionError):
        # second eigenvalue sits inside twice the largest probe radius
        pole_order_probe(crowded, 1.0, [1e-2, 1e-3, 1e-4, 1e-5])

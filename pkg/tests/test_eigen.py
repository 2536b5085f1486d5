import numpy as np
import pytest

import helpers
from seqspectrum.eigen import (
    Polynomial,
    cayley_hamilton_residual,
    char_poly,
    gelfand_radius_estimate,
    poly_roots,
    power_bounded_probe,
    spectrum_info,
)
from seqspectrum.errors import PreconditionError
from seqspectrum.linalg import CMatrix, operator_norm


def test_char_poly_known_2x2():
    p = char_poly(CMatrix([[1.0, 2.0], [3.0, 4.0]]))
    # z^2 - 5z - 2, ascending order
    assert np.allclose(p.coeffs, [-2.0, -5.0, 1.0])


def test_char_poly_matches_numpy():
    rng = np.random.default_rng(5)
    for _ in range(10):
        d = int(rng.integers(2, 7))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        got = np.asarray(char_poly(CMatrix(a)).coeffs)
        want = np.poly(a)[::-1]  # numpy returns descending coefficients
        scale = 1.0 + np.abs(want).max()
        assert np.allclose(got, want, atol=1e-8 * scale)


def test_polynomial_evaluation():
    p = Polynomial([1.0, 0.0, -1.0])  # 1 - z^2
    assert p(2.0) == pytest.approx(-3.0)
    assert p(1j) == pytest.approx(2.0)


def test_poly_roots_match_numpy():
    rng = np.random.default_rng(9)
    for _ in range(10):
        deg = int(rng.integers(2, 9))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        got = poly_roots(Polynomial(coeffs))
        want = np.roots(coeffs[::-1])
        assert helpers.multiset_distance(got, want) <= 1e-7


def test_poly_roots_repeated_root():
    # (z - 1)^2 (z + 2) = z^3 - 3z + 2; double roots converge slower
    got = sorted(poly_roots(Polynomial([2.0, -3.0, 0.0, 1.0])), key=lambda z: z.real)
    assert abs(got[0] - (-2.0)) <= 1e-8
    assert abs(got[1] - 1.0) <= 1e-5
    assert abs(got[2] - 1.0) <= 1e-5


def test_spectrum_info_matches_numpy_eig():
    rng = np.random.default_rng(21)
    for _ in range(20):
        d = int(rng.integers(2, 9))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        info = spectrum_info(CMatrix(a))
        want = np.linalg.eigvals(a)
        assert helpers.multiset_distance(info.eigenvalues, want) <= 1e-6
        assert info.spectral_radius == pytest.approx(np.abs(want).max(), rel=1e-6)


def test_spectrum_info_similarity_invariance():
    rng = np.random.default_rng(22)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    _, v = helpers.diagonalizable(rng, np.ones(5), cond=100.0)
    b = v @ a @ np.linalg.inv(v)
    ea = spectrum_info(CMatrix(a)).eigenvalues
    eb = spectrum_info(CMatrix(b)).eigenvalues
    assert helpers.multiset_distance(ea, eb) <= 1e-6


def test_peripheral_selection():
    a = CMatrix(np.diag([1.0, 0.5, np.exp(1j * np.pi / 3)]))
    info = spectrum_info(a)
    per = sorted(info.peripheral, key=lambda z: np.angle(z))
    assert len(per) == 2
    assert abs(per[0] - 1.0) <= 1e-9
    assert abs(per[1] - np.exp(1j * np.pi / 3)) <= 1e-9
    # peripheral points come back exactly unimodular
    for t in per:
        assert abs(abs(t) - 1.0) <= 1e-15


def test_cayley_hamilton_residual():
    rng = np.random.default_rng(30)
    for _ in range(10):
        d = int(rng.integers(2, 7))
        a = CMatrix(helpers.disk_matrix(rng, d))
        res = cayley_hamilton_residual(a)
        assert res <= 1e-8 * (1.0 + operator_norm(a)) ** d


def test_power_bounded_probe_contraction():
    verdict = power_bounded_probe(CMatrix(np.diag([0.5, 0.25])), 128, 1e6)
    assert verdict.bounded
    assert verdict.growth_class == "decaying"


def test_power_bounded_probe_expansion():
    verdict = power_bounded_probe(CMatrix(2.0 * np.eye(2)), 64, 1e6)
    assert not verdict.bounded
    assert verdict.growth_class == "exponential-suspect"


def test_power_bounded_probe_jordan_growth():
    # norms grow like n: stays under the default bound but is flagged
    verdict = power_bounded_probe(CMatrix([[1.0, 1.0], [0.0, 1.0]]), 256, 1e6)
    assert verdict.growth_class == "polynomial-suspect"


def test_power_bounded_probe_rejects_tiny_n_max():
    with pytest.raises(PreconditionError):
        power_bounded_probe(CMatrix.identity(2), 4, 1e6)


def test_gelfand_diagonal():
    report = gelfand_radius_estimate(CMatrix(np.diag([2.0, 1.0])), 64)
    assert report.estimate == pytest.approx(2.0, rel=1e-12)
    assert report.discrepancy <= 1e-9
    assert not report.nilpotent


def test_gelfand_nilpotent_flag():
    report = gelfand_radius_estimate(CMatrix([[0.0, 1.0], [0.0, 0.0]]), 32)
    assert report.nilpotent
    assert report.estimate == 0.0


def test_gelfand_nonnormal():
    # eigenvalues +-1 but the matrix is far from normal
    report = gelfand_radius_estimate(CMatrix([[0.0, 2.0], [0.5, 0.0]]), 256)
    assert abs(report.estimate - 1.0) <= 0.05 * 2.0

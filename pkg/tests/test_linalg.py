import math

import numpy as np
import pytest

import helpers
from seqspectrum.errors import PreconditionError, SingularMatrixError
from seqspectrum.linalg import (
    MAX_DIM,
    CMatrix,
    CVector,
    hermitian_defect,
    mat_power_seq,
    mat_solve,
    operator_norm,
    operator_norm_info,
    require_unitary,
    solve_vector,
)


def test_cvector_basics():
    v = CVector([1.0, 2.0, 2.0])
    assert v.dim == 3
    assert v.norm() == pytest.approx(3.0)
    with pytest.raises(PreconditionError):
        CVector([[1.0, 2.0]])


def test_cmatrix_validation():
    with pytest.raises(PreconditionError):
        CMatrix(np.zeros((2, 3)))
    with pytest.raises(PreconditionError):
        CMatrix(np.zeros((MAX_DIM + 1, MAX_DIM + 1)))
    eye = CMatrix.identity(3)
    assert np.array_equal(eye.data, np.eye(3))


def test_solve_matches_numpy():
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = int(rng.integers(1, 9))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        got = solve_vector(CMatrix(a), CVector(b))
        want = np.linalg.solve(a, b)
        assert np.linalg.norm(got.data - want) <= 1e-10 * (1 + np.linalg.norm(want))


def test_mat_solve_blocks():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rhs = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    got = mat_solve(CMatrix(a), CMatrix(rhs))
    assert np.allclose(a @ got.data, rhs, atol=1e-10)


def test_solve_singular_raises():
    with pytest.raises(SingularMatrixError):
        solve_vector(CMatrix([[1.0, 1.0], [1.0, 1.0]]), CVector([1.0, 0.0]))


def test_operator_norm_matches_svd():
    rng = np.random.default_rng(7)
    for _ in range(25):
        d = int(rng.integers(1, 9))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        want = np.linalg.norm(a, 2)
        assert operator_norm(CMatrix(a)) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_operator_norm_jordan_block():
    # top singular value of [[1,1],[0,1]] is the golden ratio
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    assert operator_norm(CMatrix([[1.0, 1.0], [0.0, 1.0]])) == pytest.approx(phi, rel=1e-12)


def test_operator_norm_info_reports_convergence():
    info = operator_norm_info(CMatrix([[2.0, 0.0], [0.0, 1.0]]))
    assert info.converged
    assert info.iterations >= 1
    assert info.value == pytest.approx(2.0, rel=1e-10)


def test_operator_norm_zero_matrix():
    assert operator_norm(CMatrix(np.zeros((3, 3)))) == 0.0


def test_mat_power_seq_diagonal_decay():
    entries = mat_power_seq(CMatrix(np.diag([0.5, 0.25])), 12)
    assert [e.n for e in entries] == list(range(1, 13))
    for e in entries:
        assert e.log_norm == pytest.approx(e.n * math.log(0.5), rel=1e-10)


def test_mat_power_seq_rescales_large_powers():
    # 3^500 overflows float range by a wide margin; the running rescale keeps
    # log norms accurate at every n, including the ones sitting just under
    # the rescale threshold
    entries = mat_power_seq(CMatrix(3.0 * np.eye(2)), 500)
    for e in entries:
        assert e.log_norm == pytest.approx(e.n * math.log(3.0), rel=1e-12)
        assert 1e-100 <= e.scaled_norm <= 1e100


def test_mat_power_seq_nilpotent():
    entries = mat_power_seq(CMatrix([[0.0, 1.0], [0.0, 0.0]]), 8)
    assert entries[0].scaled_norm == pytest.approx(1.0)
    for e in entries[1:]:
        assert e.scaled_norm == 0.0
        assert e.log_norm is None


def test_unitarity_defect():
    rng = np.random.default_rng(11)
    u = helpers.random_unitary(rng, 5)
    assert hermitian_defect(CMatrix(u)) <= 1e-12
    assert hermitian_defect(CMatrix(2.0 * np.eye(2))) == pytest.approx(3.0)


def test_require_unitary():
    rng = np.random.default_rng(12)
    require_unitary(CMatrix(helpers.random_unitary(rng, 4)))
    with pytest.raises(PreconditionError):
        require_unitary(CMatrix(2.0 * np.eye(2)))

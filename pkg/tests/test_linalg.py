import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmopuc.errors import DimensionMismatch, Singular
from lmopuc.identities import vandermonde_det
from lmopuc.linalg import det, lu_factor, lu_solve, normality_report, smallest_singular_value_estimate


def cmat(seed, n):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_solve_small_examples():
    np.testing.assert_allclose(lu_solve(np.eye(3), [1, 2, 3]), [1, 2, 3])
    np.testing.assert_allclose(lu_solve([[0, 1], [1, 0]], [5, 7]), [7, 5])


def test_recovers_known_solution():
    A = cmat(1, 8) + 8 * np.eye(8)
    x = np.arange(1, 9) * (1 - 0.5j)
    np.testing.assert_allclose(lu_solve(A, A @ x), x, rtol=0, atol=1e-10)


def test_det_examples():
    assert abs(det(np.diag([2, 3j])) - 6j) < 1e-15
    A = cmat(2, 4)
    A[2] = A[0]
    assert abs(det(A)) < 1e-12 * np.linalg.norm(A)
    assert det(np.zeros((0, 0))) == 1


def test_vandermonde_two_by_two_matches_product():
    z1, z2 = 1.0, 1j
    th = np.angle([z1, z2])
    forms = vandermonde_det(th)
    # rows (z^-1/2, z^1/2): determinant z1^-1/2 z2^1/2 - z1^1/2 z2^-1/2
    s1, s2 = np.exp(0.5j * th)
    assert abs(forms.det - (s2 / s1 - s1 / s2)) < 1e-15


def test_singular_solve_raises():
    with pytest.raises(Singular):
        lu_solve(np.ones((3, 3)), np.ones(3))
    with pytest.raises(DimensionMismatch):
        lu_solve(np.eye(2), np.ones(3))
    with pytest.raises(DimensionMismatch):
        det(np.ones((2, 3)))


def test_normality_report():
    assert normality_report(np.eye(4)).verdict
    assert not normality_report(np.ones((3, 3))).verdict
    empty = normality_report(np.zeros((0, 0)))
    assert empty.verdict and empty.det == 1


@given(st.integers(0, 10_000), st.integers(1, 10))
def test_solve_agrees_with_numpy(seed, n):
    A = cmat(seed, n)
    b = cmat(seed + 1, n)[0]
    x = lu_solve(A, b)
    assert np.linalg.norm(A @ x - b) < 1e-9 * np.linalg.cond(A) * np.linalg.norm(b)


@given(st.integers(0, 10_000), st.integers(1, 10))
def test_det_agrees_with_numpy(seed, n):
    A = cmat(seed, n)
    ref = np.linalg.det(A)
    assert abs(det(A) - ref) < 1e-10 * max(1.0, abs(ref)) * np.linalg.cond(A)


@given(st.integers(0, 10_000), st.integers(1, 8))
def test_factorization_reconstructs(seed, n):
    A = cmat(seed, n)
    f = lu_factor(A)
    L = np.tril(f.lu, -1) + np.eye(n)
    U = np.triu(f.lu)
    np.testing.assert_allclose(L @ U, A[f.perm], atol=1e-12 * np.abs(A).max())


@given(st.integers(0, 10_000), st.integers(1, 8))
def test_sigma_min_estimate(seed, n):
    A = cmat(seed, n)
    ref = np.linalg.svd(A, compute_uv=False).min()
    assert abs(smallest_singular_value_estimate(A) - ref) <= 1e-6 * np.linalg.norm(A) + 0.05 * ref

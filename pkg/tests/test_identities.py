import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmopuc import identities as I
from lmopuc.corpus import angelesco_atoms_system
from lmopuc.errors import TooLarge, UnorderedInput
from lmopuc.laurent import BranchSpec
from lmopuc.measures import MeasureSystem, atoms, build_angelesco


def test_leibniz_matches_numpy():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((7, 5, 5)) + 1j * rng.standard_normal((7, 5, 5))
    np.testing.assert_allclose(I.leibniz_det(A), np.linalg.det(A), rtol=1e-12)
    with pytest.raises(TooLarge):
        I.leibniz_det(np.eye(7))


def test_andreief_trivial():
    inst = I.AndreiefInstance([[1.0]], [[1.0]], [1.0], np.zeros((0, 1)))
    assert abs(I.andreief_lhs(inst) - 1) < 1e-15
    assert abs(I.andreief_rhs(inst) - 1) < 1e-15


def test_andreief_classical_monomials():
    x = np.array([0.2, 0.9, 1.7])
    V = np.vstack([np.ones(3), x])
    inst = I.AndreiefInstance(V, V, [0.2, 0.5, 0.3], np.zeros((0, 2)))
    assert abs(I.andreief_lhs(inst) - I.andreief_rhs(inst)) < 1e-14


def test_andreief_appended_block_is_cofactor():
    f = np.array([[1.0, 2.0, -1.0]])
    g = np.array([[0.5, 1.0, 3.0], [2.0, -1.0, 1.0]])
    w = np.array([0.3, 0.3, 0.4])
    inst = I.AndreiefInstance(f, g, w, [[0.0, 1.0]])
    expected = np.sum(f[0] * g[0] * w)
    assert abs(I.andreief_lhs(inst) - expected) < 1e-14
    assert abs(I.andreief_rhs(inst) - expected) < 1e-14


def test_vandermonde_examples():
    f = I.vandermonde_det([1.3])
    assert f.det == f.sine_form == f.modulus_form == 1
    f = I.vandermonde_det([0.0, math.pi])
    for v in (f.det, f.sine_form, f.modulus_form):
        assert abs(v - 2j) < 1e-14
    with pytest.raises(UnorderedInput):
        I.vandermonde_det([2.0, 1.0])
    assert I.vandermonde_det([2.0, 1.0], require_order=False).modulus_form is None


def test_vandermonde_five_points():
    th = np.sort(np.random.default_rng(4).uniform(0, 2 * math.pi, 5))
    f = I.vandermonde_det(th)
    assert abs(f.det - f.sine_form) < 1e-12 * abs(f.det)
    assert abs(f.det - f.modulus_form) < 1e-12 * abs(f.det)


def test_det_integral_single_measure():
    s = MeasureSystem([atoms([0.5, 1.5, 2.5], [0.2, 0.3, 0.5])])
    assert abs(I.angelesco_det_integral(s, (1,)) - 1) < 1e-14
    assert I.compare_angelesco_det(s, (1,)).rel_dev < 1e-14


def test_det_integral_two_atoms_per_arc():
    s = build_angelesco([(0.0, 3.0), (3.0, 2 * math.pi)],
                        [atoms([0.5, 2.0], [0.4, 0.6]), atoms([3.5, 5.0], [0.7, 0.3])])
    cmp = I.compare_angelesco_det(s, (1, 1))
    assert cmp.rel_dev < 1e-12 and abs(cmp.lu) > 1e-3


@pytest.mark.parametrize("n", [(2, 1), (1, 2), (3, 1), (2, 2), (0, 3)])
def test_det_integral_mixed_parity(n):
    s = angelesco_atoms_system(np.random.default_rng(9), 2, (5, 7))
    assert I.compare_angelesco_det(s, n).rel_dev < 1e-9


def test_ordered_integrand_is_nonnegative():
    s = angelesco_atoms_system(np.random.default_rng(2), 3, (4, 6))
    for n in [(1, 1, 1), (2, 1, 0), (1, 2, 1)]:
        vals = I.angelesco_ordered_integrand(s, n)
        scale = np.abs(vals).max()
        assert vals.real.min() > -I.SIGN_TOL * scale
        assert np.abs(vals.imag).max() < I.SIGN_TOL * scale


def test_sign_exponents():
    assert I.k_sign_exponent((2, 3)) == 1 + 3
    assert I.l_exponent((2, 3)) == 10 + 4


def test_enumeration_bound():
    s = angelesco_atoms_system(np.random.default_rng(0), 2, (5, 6))
    with pytest.raises(TooLarge):
        I.angelesco_det_integral(s, (4, 3))


def test_verify_identities_default_sweep():
    rep = I.verify_identities(seed=0, andreief_instances=30, vandermonde_tuples=30, angelesco_systems=2, max_n=3)
    assert rep["passed"], rep


@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(0, 3), st.integers(1, 4))
def test_andreief_random(seed, M, extra, P):
    N = min(M + extra, 5)
    inst = I.AndreiefInstance.random(np.random.default_rng(seed), M, N, P)
    lhs, rhs = I.andreief_lhs(inst), I.andreief_rhs(inst)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs), abs(rhs))


@given(st.lists(st.floats(0, 2 * math.pi, exclude_max=True), min_size=1, max_size=6, unique=True),
       st.floats(-3, 3))
def test_vandermonde_three_forms(th, t0):
    branch = BranchSpec(t0)
    red = np.sort(branch.reduce(np.array(th)))
    f = I.vandermonde_det(red, branch)
    scale = max(1.0, abs(f.det))
    assert abs(f.det - f.sine_form) < 1e-10 * scale
    assert abs(f.det - f.modulus_form) < 1e-10 * scale

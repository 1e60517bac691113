import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmopuc import engine as E
from lmopuc.corpus import angelesco_atoms_system
from lmopuc.errors import NoTypeIAtZero, NotLaurentNormal, NotNormal
from lmopuc.laurent import HalfLaurentPoly
from lmopuc.measures import MeasureSystem, atoms, build_angelesco
from lmopuc.recurrence import classical_opuc

P = HalfLaurentPoly


def toy():
    m1 = atoms([0.4, 1.3, 2.5], [0.3, 0.3, 0.4])
    m2 = atoms([3.6, 4.4, 5.7], [0.5, 0.2, 0.3])
    return build_angelesco([(0.0, math.pi), (math.pi, 2 * math.pi)], [m1, m2])


def direct_phi(system, n):
    """Monic phi_n from the orthogonality conditions, assembled by hand from atoms."""
    N = sum(n)
    rows, rhs = [], []
    for mu, nj in zip(system.entries, n):
        th = np.mod(mu.atom_angles, 2 * math.pi)
        for k in range(nj):
            test = np.exp(0.5j * th * (nj - 2 * k))
            rows.append([np.sum(mu.atom_weights * np.exp(0.5j * th * (2 * l - N)) * test) for l in range(N)])
            rhs.append(-np.sum(mu.atom_weights * np.exp(0.5j * th * N) * test))
    x = np.linalg.solve(np.array(rows), np.array(rhs))
    return P.from_array(-N, list(x) + [1.0])


def test_lebesgue_matrix_is_identity_patterned(leb):
    M = E.build_M(leb, (2,)).matrix
    assert np.allclose(np.abs(M), np.fliplr(np.eye(2)), atol=1e-13) or np.allclose(np.abs(M), np.eye(2), atol=1e-13)
    assert abs(abs(np.linalg.det(M)) - 1) < 1e-13


def test_zero_index(leb):
    assert E.build_M(leb, (0,)).matrix.shape == (0, 0)
    assert E.is_normal(leb, (0,)).verdict
    assert E.solve_phi(leb, (0,)) == P({0: 1})


def test_lebesgue_phi(leb):
    assert E.solve_phi(leb, (2,)).max_abs_diff(P({2: 1})) < 1e-13
    assert E.heine_phi(leb, (2,)).max_abs_diff(P({2: 1})) < 1e-13
    assert E.solve_phi_sharp(leb, (2,)).max_abs_diff(P({-2: 1})) < 1e-13
    for N in range(1, 7):
        assert E.is_normal(leb, (N,)).verdict


def test_two_block_matrix_entries():
    s = toy()
    M = E.build_M(s, (1, 1)).matrix
    # free exponents z^-1, z^0 (z^1 is the monic top); block j tests against z^(1/2)
    for j, mu in enumerate(s.entries):
        th = np.mod(mu.atom_angles, 2 * math.pi)
        expect = [np.sum(mu.atom_weights * np.exp(0.5j * th * (e + 1))) for e in (-2, 0)]
        np.testing.assert_allclose(M[j], expect, atol=1e-14)


@pytest.mark.parametrize("n", [(1, 1), (2, 1), (1, 2), (2, 3)])
def test_phi_matches_hand_assembled_system(n):
    s = toy() if sum(n) <= 2 else angelesco_atoms_system(np.random.default_rng(3), 2, (6, 9))
    assert E.solve_phi(s, n).max_abs_diff(direct_phi(s, n)) < 1e-10


def test_cofactor_route_single_atom_pair():
    s = MeasureSystem([atoms([0.5, 2.0], [0.5, 0.5])])
    phi = E.solve_phi(s, (1,))
    # phi = z^(1/2) + a z^(-1/2) with int phi z^(1/2) = 0 -> a = -int z / int 1
    a = -np.mean(np.exp(1j * np.array([0.5, 2.0])))
    assert phi.max_abs_diff(P({1: 1, -1: a})) < 1e-14
    assert E.heine_phi(s, (1,)).max_abs_diff(phi) < 1e-14


def test_duplicate_measures_not_normal():
    mu = atoms([0.3, 1.1, 2.0], [0.3, 0.3, 0.4])
    s = MeasureSystem([mu, mu])
    assert not E.is_normal(s, (1, 1)).verdict
    with pytest.raises(NotNormal):
        E.solve_phi(s, (1, 1))
    with pytest.raises(NotNormal):
        E.solve_type_I(s, (1, 1))


def test_type_I_lebesgue(leb):
    xi = E.solve_type_I(leb, (2,))
    assert xi[0].max_abs_diff(P({0: 1})) < 1e-13
    with pytest.raises(NoTypeIAtZero):
        E.solve_type_I(leb, (0,))


def test_angelesco_normal_up_to_six(ang2, ang3):
    for s in (ang2, ang3):
        for n in E.all_indices(s.r, 6, 1):
            assert E.is_normal(s, n).verdict, n


def test_Omega_special_cases(ang2):
    s = MeasureSystem([atoms([0.3, 1.4, 2.2, 3.9, 5.0], [0.1, 0.2, 0.3, 0.2, 0.2])])
    classical = classical_opuc(s.entries[0], 4)
    for n in range(5):
        assert E.solve_Phi_nm(s, (n,), (0,)).max_abs_diff(classical[n]) < 1e-12
    for n in [(1, 0), (1, 1), (2, 1)]:
        two_n = tuple(2 * v for v in n)
        assert E.solve_Phi_nm(ang2, n, n).max_abs_diff(E.solve_phi(ang2, two_n)) < 1e-10


def test_Phi_lebesgue_example(leb):
    Phi = E.solve_Phi_nm(leb, (2,), (1,))
    Phis = E.solve_Phi_star_nm(leb, (2,), (1,))
    assert Phi.max_abs_diff(P({4: 1})) < 1e-13
    assert Phis.max_abs_diff(P({-2: 1})) < 1e-13
    assert abs(E.alpha_nm(Phi, (1,))) < 1e-13 and abs(E.beta_nm(Phis, (2,))) < 1e-13


def test_r1_closed_form():
    mu = atoms(np.linspace(0.2, 6.0, 12), np.linspace(1, 2, 12), normalize=True)
    s = MeasureSystem([mu])
    Phis = classical_opuc(mu, 8)
    for n in range(5):
        for m in range(5 - n):
            assert E.solve_Phi_nm(s, (n,), (m,)).max_abs_diff(Phis[n + m].mul_by_power(-2 * m)) < 1e-10


def test_laurent_normal_failure():
    mu = atoms([0.3, 1.1, 2.0], [0.3, 0.3, 0.4])
    s = MeasureSystem([mu, mu])
    with pytest.raises(NotLaurentNormal):
        E.solve_Phi_nm(s, (1, 1), (0, 0))


def _duality_checks(s, n, m):
    Phi = E.solve_Phi_nm(s, n, m)
    Phis_mn = E.solve_Phi_star_nm(s, m, n)
    assert Phi.sharp().max_abs_diff(Phis_mn) < 1e-9
    assert abs(E.alpha_nm(Phi, m) - np.conj(E.beta_nm(Phis_mn, m))) < 1e-9
    if sum(n) + sum(m):
        L = E.solve_Lambda(s, n, m)
        Ls = E.solve_Lambda_star(s, m, n)
        assert L.sharp().max_abs_diff(Ls) < 1e-9


def test_duality(ang2):
    for n in E.all_indices(2, 2):
        for m in E.all_indices(2, 2):
            _duality_checks(ang2, n, m)


def test_Lambda_at_diagonal(ang2):
    for n in [(1, 0), (1, 1), (2, 1)]:
        two_n = tuple(2 * v for v in n)
        xi = E.solve_type_I(ang2, two_n)
        assert E.solve_Lambda(ang2, n, n).max_abs_diff(xi.mul_by_power(2)) < 1e-9
        assert E.solve_Lambda_star(ang2, n, n).max_abs_diff(xi.sharp().mul_by_power(-2)) < 1e-9


def test_biorthogonality(ang2):
    for n, m in [((1, 1), (1, 0)), ((2, 1), (1, 1)), ((1, 0), (0, 2))]:
        N, Mt = sum(n), sum(m)
        beta = E.beta_nm(E.solve_Phi_star_nm(ang2, n, m), n)
        alpha = E.alpha_nm(E.solve_Phi_nm(ang2, n, m), m)
        # sum_j int Lambda_j w^|m| dmu_j  and  sum_j int Lambda*_j w^-|n| dmu_j
        v = E.type1_residuals(ang2, E.solve_Lambda(ang2, n, m), [-2 * Mt])[0]
        vs = E.type1_residuals(ang2, E.solve_Lambda_star(ang2, n, m), [2 * N])[0]
        assert abs(v + np.conj(beta)) < 1e-9
        assert abs(vs + np.conj(alpha)) < 1e-9


def test_moment_source_ok():
    s = MeasureSystem([atoms([0.1, 0.2]), atoms([1.0, 1.5, 2.0])])
    assert E.moment_source_ok(s, (1, 1))
    assert not E.moment_source_ok(s, (2, 1))


systems = st.builds(lambda seed, r: angelesco_atoms_system(np.random.default_rng(seed), r, (6, 10)),
                    st.integers(0, 10_000), st.sampled_from([2, 3]))
small_index = st.lists(st.integers(0, 2), min_size=3, max_size=3)


@given(systems, small_index)
def test_phi_residuals_vanish(s, n):
    n = tuple(n[: s.r])
    phi = E.solve_phi(s, n)
    assert np.abs(E.phi_residuals(s, n, phi)).max(initial=0) < 1e-9 * max(1.0, phi.norm1())
    assert E.solve_phi_sharp(s, n).max_abs_diff(phi.sharp()) < 1e-9 * max(1.0, phi.norm1())
    assert E.heine_phi(s, n).max_abs_diff(phi) < 1e-8 * max(1.0, phi.norm1())


@given(systems, small_index)
def test_type_I_residuals(s, n):
    n = tuple(n[: s.r])
    if sum(n) == 0:
        return
    xi = E.solve_type_I(s, n)
    res = E.type1_residuals(s, xi, E.type_I_conditions(n))
    expect = np.zeros(sum(n))
    expect[0] = 1
    assert np.abs(res - expect).max() < 1e-9 * max(1.0, xi.norm1())


@given(systems, small_index, small_index)
def test_Phi_and_Lambda_residuals(s, n, m):
    n, m = tuple(n[: s.r]), tuple(m[: s.r])
    Phi = E.solve_Phi_nm(s, n, m)
    assert np.abs(E.Phi_nm_residuals(s, n, m, Phi)).max(initial=0) < 1e-9 * max(1.0, Phi.norm1())
    Phis = E.solve_Phi_star_nm(s, n, m)
    assert np.abs(E.Phi_star_nm_residuals(s, n, m, Phis)).max(initial=0) < 1e-9 * max(1.0, Phis.norm1())
    if sum(n) + sum(m):
        for star in (False, True):
            vec = (E.solve_Lambda_star if star else E.solve_Lambda)(s, n, m)
            assert np.abs(E.lambda_residuals(s, n, m, vec, star)).max() < 1e-9 * max(1.0, vec.norm1())

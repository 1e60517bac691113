"""Moment matrices and orthogonality solvers.

Conventions
-----------
A multi-index is a tuple of nonnegative ints.  All exponents are doubled
(see :mod:`lmopuc.laurent`).  A *type II* condition ``(j, t)`` means
``int p(z) z**(-t/2) dmu_j(z) = 0``; a *type I* condition ``t`` means
``sum_j int p_j(z) z**(-t/2) dmu_j(z)`` takes a prescribed value.  Both reduce
to matrices of half-moments ``int z**(p/2) dmu_j``.

Solvers go through LU on the moment system.  :func:`heine_phi` is an
independent determinantal route used for cross-checking only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoTypeIAtZero, NotLaurentNormal, NotNormal, Unsupported
from .laurent import HalfLaurentPoly
from .linalg import DEFAULT_EPS_NORMAL, NormalityReport, det, lu_solve, normality_report
from .measures import MeasureSystem, MomentFunctional

Index = tuple[int, ...]


def as_index(n, r: int | None = None) -> Index:
    if isinstance(n, (int, np.integer)):
        n = (int(n),)
    n = tuple(int(v) for v in n)
    if any(v < 0 for v in n):
        raise ValueError(f"multi-index entries must be nonnegative, got {n}")
    if r is not None and len(n) != r:
        raise ValueError(f"multi-index {n} has length {len(n)}, system has r={r}")
    return n


def unit(j: int, r: int) -> Index:
    return tuple(int(i == j) for i in range(r))


def shift(n: Sequence[int], j: int, d: int = 1) -> Index:
    out = list(n)
    out[j] += d
    return tuple(out)


def all_indices(r: int, max_total: int, min_total: int = 0):
    """Every multi-index of length r with ``min_total <= |n| <= max_total``, by total then lexicographically."""
    out = []

    def rec(prefix, left):
        if len(prefix) == r - 1:
            out.append(tuple(prefix) + (left,))
            return
        for v in range(left, -1, -1):
            rec(prefix + [v], left - v)

    for total in range(min_total, max_total + 1):
        if r == 1:
            out.append((total,))
        else:
            rec([], total)
    return out


# matrix assembly


def type2_matrix(system: MeasureSystem, unknowns: Sequence[int], conditions: Sequence[tuple[int, int]]):
    """Rows ``(j, t)``, columns exponent ``e``: entry ``int z**((e - t)/2) dmu_j``."""
    e = np.asarray(unknowns, dtype=int)
    A = np.zeros((len(conditions), len(e)), dtype=complex)
    for j in range(system.r):
        rows = [i for i, (jj, _) in enumerate(conditions) if jj == j]
        if not rows:
            continue
        t = np.array([conditions[i][1] for i in rows], dtype=int)
        P = e[None, :] - t[:, None]
        uniq, inv = np.unique(P, return_inverse=True)
        A[rows, :] = system.half_moments(j, uniq)[inv].reshape(P.shape)
    return A


def type1_matrix(system: MeasureSystem, unknowns: Sequence[tuple[int, int]], conditions: Sequence[int]):
    """Rows ``t``, columns ``(j, e)``: entry ``int z**((e - t)/2) dmu_j``."""
    t = np.asarray(conditions, dtype=int)
    A = np.zeros((len(t), len(unknowns)), dtype=complex)
    for j in range(system.r):
        cols = [i for i, (jj, _) in enumerate(unknowns) if jj == j]
        if not cols:
            continue
        e = np.array([unknowns[i][1] for i in cols], dtype=int)
        P = e[None, :] - t[:, None]
        uniq, inv = np.unique(P, return_inverse=True)
        A[:, cols] = system.half_moments(j, uniq)[inv].reshape(P.shape)
    return A


def _block_offsets(sizes) -> tuple[int, ...]:
    return tuple(int(v) for v in np.concatenate([[0], np.cumsum(sizes)]))


@dataclass(frozen=True)
class MomentMatrixM:
    index: Index
    matrix: np.ndarray
    block_rows: tuple[int, ...]


@dataclass(frozen=True)
class MomentMatrixOmega:
    pair: tuple[Index, Index]
    matrix: np.ndarray
    block_rows: tuple[int, ...]


def _phi_conditions(n: Index):
    # block j, row k: orthogonality against z**((n_j - 2k)/2)
    return [(j, 2 * k - nj) for j, nj in enumerate(n) for k in range(nj)]


def _phi_unknowns(n: Index):
    N = sum(n)
    return [2 * l - N for l in range(N)]


def _require_half_moments(system: MeasureSystem, n: Index):
    if system.measure_backed:
        return
    if sum(n) % 2 or any(v % 2 for v in n):
        raise Unsupported("functional-backed systems need |n| and every n_j even for phi-type problems")


def build_M(system: MeasureSystem, n) -> MomentMatrixM:
    n = as_index(n, system.r)
    _require_half_moments(system, n)
    A = type2_matrix(system, _phi_unknowns(n), _phi_conditions(n))
    return MomentMatrixM(n, A, _block_offsets(n))


def is_normal(system: MeasureSystem, n, eps_normal: float = DEFAULT_EPS_NORMAL) -> NormalityReport:
    return normality_report(build_M(system, n).matrix, eps_normal)


def _require(report: NormalityReport, exc, what: str):
    if not report.verdict:
        raise exc(f"{what} is not normal (sigma_min/||A|| = {report.relative_sigma_min:.3g})")


def solve_phi(system: MeasureSystem, n, eps_normal: float = DEFAULT_EPS_NORMAL) -> HalfLaurentPoly:
    """Monic ``phi_n``: leading term ``z**(|n|/2)``, orthogonal to ``z**(k)`` windows of each measure."""
    n = as_index(n, system.r)
    N = sum(n)
    if N == 0:
        return HalfLaurentPoly({0: 1.0}, system.branch)
    M = build_M(system, n).matrix
    _require(normality_report(M, eps_normal), NotNormal, f"index {n}")
    b = type2_matrix(system, [N], _phi_conditions(n))[:, 0]
    x = lu_solve(M, -b)
    return HalfLaurentPoly.from_array(-N, list(x) + [1.0], system.branch)


def heine_phi(system: MeasureSystem, n) -> HalfLaurentPoly:
    """``phi_n`` by cofactor expansion of the bordered determinant along its monomial row."""
    n = as_index(n, system.r)
    N = sum(n)
    if N == 0:
        return HalfLaurentPoly({0: 1.0}, system.branch)
    _require_half_moments(system, n)
    Ht = type2_matrix(system, [2 * l - N for l in range(N + 1)], _phi_conditions(n))
    dM = det(Ht[:, :N])
    if dM == 0:
        raise NotNormal(f"det M_{n} vanishes")
    coeffs = {}
    for l in range(N + 1):
        minor = np.delete(Ht, l, axis=1)
        coeffs[2 * l - N] = (-1) ** (N + l) * det(minor) / dM
    return HalfLaurentPoly(coeffs, system.branch)


def solve_phi_sharp(system: MeasureSystem, n, eps_normal: float = DEFAULT_EPS_NORMAL) -> HalfLaurentPoly:
    """``phi_n^sharp`` solved from its own conditions (coefficient 1 at ``z**(-|n|/2)``)."""
    n = as_index(n, system.r)
    N = sum(n)
    if N == 0:
        return HalfLaurentPoly({0: 1.0}, system.branch)
    _require_half_moments(system, n)
    unknowns = [-N + 2 + 2 * l for l in range(N)]
    conds = [(j, -nj + 2 + 2 * k) for j, nj in enumerate(n) for k in range(nj)]
    A = type2_matrix(system, unknowns, conds)
    _require(normality_report(A, eps_normal), NotNormal, f"index {n}")
    b = type2_matrix(system, [-N], conds)[:, 0]
    x = lu_solve(A, -b)
    return HalfLaurentPoly.from_array(-N, [1.0] + list(x), system.branch)


def type2_residuals(system: MeasureSystem, p: HalfLaurentPoly, conditions) -> np.ndarray:
    keys = sorted(p.coeffs)
    if not conditions:
        return np.zeros(0, dtype=complex)
    A = type2_matrix(system, keys, conditions)
    return A @ np.array([p[k] for k in keys])


def phi_residuals(system: MeasureSystem, n, phi: HalfLaurentPoly) -> np.ndarray:
    return type2_residuals(system, phi, _phi_conditions(as_index(n, system.r)))


# type I vectors


class TypeIVector:
    """Tuple of Laurent polynomials, one per measure."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(entries)

    def __getitem__(self, j) -> HalfLaurentPoly:
        return self.entries[j]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def sharp(self) -> "TypeIVector":
        return TypeIVector(p.sharp() for p in self.entries)

    def mul_by_power(self, twice_exp: int) -> "TypeIVector":
        return TypeIVector(p.mul_by_power(twice_exp) for p in self.entries)

    def scale(self, s) -> "TypeIVector":
        return TypeIVector(p.scale(s) for p in self.entries)

    def __add__(self, other: "TypeIVector") -> "TypeIVector":
        return TypeIVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "TypeIVector") -> "TypeIVector":
        return TypeIVector(a - b for a, b in zip(self.entries, other.entries))

    def max_abs_diff(self, other: "TypeIVector") -> float:
        return max(a.max_abs_diff(b) for a, b in zip(self.entries, other.entries))

    def norm1(self) -> float:
        return sum(p.norm1() for p in self.entries)

    def to_json_list(self):
        return [p.to_json_list() for p in self.entries]

    def __repr__(self):
        return f"TypeIVector({list(self.entries)!r})"


def _solve_type1(system, unknowns, conditions, rhs, exc, what, eps_normal):
    A = type1_matrix(system, unknowns, conditions)
    _require(normality_report(A, eps_normal), exc, what)
    x = lu_solve(A, np.asarray(rhs, dtype=complex))
    parts: list[dict] = [dict() for _ in range(system.r)]
    for (j, e), v in zip(unknowns, x):
        parts[j][e] = v
    return TypeIVector(HalfLaurentPoly(p, system.branch) for p in parts)


def type_I_unknowns(n: Index):
    # ordered so that the type I matrix is exactly M_n transposed
    return [(j, nj - 2 - 2 * k) for j, nj in enumerate(n) for k in range(nj)]


def type_I_conditions(n: Index):
    N = sum(n)
    return [N - 2 - 2 * l for l in range(N)]


def type_I_matrix(system: MeasureSystem, n) -> np.ndarray:
    n = as_index(n, system.r)
    return type1_matrix(system, type_I_unknowns(n), type_I_conditions(n))


def solve_type_I(system: MeasureSystem, n, eps_normal: float = DEFAULT_EPS_NORMAL) -> TypeIVector:
    """``xi_n``: entry j on exponents ``-n_j/2 .. n_j/2 - 1``, top condition normalized to 1."""
    n = as_index(n, system.r)
    N = sum(n)
    if N == 0:
        raise NoTypeIAtZero("type I vectors are not defined at the zero index")
    _require_half_moments(system, n)
    rhs = np.zeros(N)
    rhs[0] = 1.0
    return _solve_type1(system, type_I_unknowns(n), type_I_conditions(n), rhs, NotNormal,
                        f"index {n}", eps_normal)


def solve_type_I_sharp(system: MeasureSystem, n, eps_normal: float = DEFAULT_EPS_NORMAL) -> TypeIVector:
    """``xi_n^sharp``: entry j on exponents ``-n_j/2 + 1 .. n_j/2``, bottom condition normalized to 1."""
    n = as_index(n, system.r)
    N = sum(n)
    if N == 0:
        raise NoTypeIAtZero("type I vectors are not defined at the zero index")
    _require_half_moments(system, n)
    unknowns = [(j, -nj + 2 + 2 * k) for j, nj in enumerate(n) for k in range(nj)]
    conds = [-N + 2 + 2 * l for l in range(N)]
    rhs = np.zeros(N)
    rhs[0] = 1.0
    return _solve_type1(system, unknowns, conds, rhs, NotNormal, f"index {n}", eps_normal)


def type1_residuals(system: MeasureSystem, vec: TypeIVector, conditions) -> np.ndarray:
    """``sum_j int vec_j z**(-t/2) dmu_j`` for each ``t`` in ``conditions``."""
    out = np.zeros(len(conditions), dtype=complex)
    for j, p in enumerate(vec):
        if p.is_zero():
            continue
        keys = sorted(p.coeffs)
        A = type1_matrix(system, [(j, e) for e in keys], conditions)
        out += A @ np.array([p[k] for k in keys])
    return out


# generalized (n, m) problems, integer exponents only


def _omega_conditions(n: Index, m: Index, shift_k: int = 0):
    # block j, row i: L_j[. w**(m_j - i)], i.e. k = i - m_j (+ shift)
    return [(j, 2 * (i - mj + shift_k)) for j, (nj, mj) in enumerate(zip(n, m)) for i in range(nj + mj)]


def _omega_unknowns(n: Index, m: Index, shift_e: int = 0):
    N, Mt = sum(n), sum(m)
    return [2 * (-Mt + l + shift_e) for l in range(N + Mt)]


def _pair(system, n, m):
    return as_index(n, system.r), as_index(m, system.r)


def build_Omega(system: MeasureSystem, n, m) -> MomentMatrixOmega:
    n, m = _pair(system, n, m)
    A = type2_matrix(system, _omega_unknowns(n, m), _omega_conditions(n, m))
    return MomentMatrixOmega((n, m), A, _block_offsets([a + b for a, b in zip(n, m)]))


def is_laurent_normal(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL) -> NormalityReport:
    return normality_report(build_Omega(system, n, m).matrix, eps_normal)


def solve_Phi_nm(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL) -> HalfLaurentPoly:
    """``Phi_{n,m} = z**|n| + ... + alpha z**-|m|`` with ``L_j[Phi w**-k] = 0``, ``k = -m_j..n_j-1``."""
    n, m = _pair(system, n, m)
    N, Mt = sum(n), sum(m)
    if N + Mt == 0:
        return HalfLaurentPoly({0: 1.0})
    Om = build_Omega(system, n, m).matrix
    _require(normality_report(Om, eps_normal), NotLaurentNormal, f"pair {(n, m)}")
    b = type2_matrix(system, [2 * N], _omega_conditions(n, m))[:, 0]
    x = lu_solve(Om, -b)
    return HalfLaurentPoly.from_integer_array(-Mt, list(x) + [1.0])


def solve_Phi_star_nm(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL) -> HalfLaurentPoly:
    """``Phi*_{n,m} = beta z**|n| + ... + z**-|m|`` with ``L_j[Phi* w**-k] = 0``, ``k = -m_j+1..n_j``."""
    n, m = _pair(system, n, m)
    N, Mt = sum(n), sum(m)
    if N + Mt == 0:
        return HalfLaurentPoly({0: 1.0})
    conds = _omega_conditions(n, m, shift_k=1)
    A = type2_matrix(system, _omega_unknowns(n, m, shift_e=1), conds)
    _require(normality_report(A, eps_normal), NotLaurentNormal, f"pair {(n, m)}")
    b = type2_matrix(system, [-2 * Mt], conds)[:, 0]
    x = lu_solve(A, -b)
    return HalfLaurentPoly.from_integer_array(-Mt, [1.0] + list(x))


def alpha_nm(Phi: HalfLaurentPoly, m) -> complex:
    return Phi.coeff(-sum(m))


def beta_nm(Phi_star: HalfLaurentPoly, n) -> complex:
    return Phi_star.coeff(sum(n))


def Phi_nm_residuals(system: MeasureSystem, n, m, Phi: HalfLaurentPoly) -> np.ndarray:
    n, m = _pair(system, n, m)
    return type2_residuals(system, Phi, _omega_conditions(n, m))


def Phi_star_nm_residuals(system: MeasureSystem, n, m, Phi_star: HalfLaurentPoly) -> np.ndarray:
    n, m = _pair(system, n, m)
    return type2_residuals(system, Phi_star, _omega_conditions(n, m, shift_k=1))


def solve_Phi_classical(system: MeasureSystem, n, eps_normal: float = DEFAULT_EPS_NORMAL) -> HalfLaurentPoly:
    """Monic ``Phi_n`` of degree |n| with ``int Phi z**-k dmu_j = 0`` for ``k = 0..n_j-1``."""
    n = as_index(n, system.r)
    N = sum(n)
    if N == 0:
        return HalfLaurentPoly({0: 1.0})
    A = np.zeros((N, N), dtype=complex)
    b = np.zeros(N, dtype=complex)
    row = 0
    for j, nj in enumerate(n):
        for k in range(nj):
            # int z**(i - k) dmu_j = c_{j, k - i}
            A[row] = [system.moment(j, k - i) for i in range(N)]
            b[row] = system.moment(j, k - N)
            row += 1
    _require(normality_report(A, eps_normal), NotNormal, f"index {n}")
    x = lu_solve(A, -b)
    return HalfLaurentPoly.from_integer_array(0, list(x) + [1.0])


def _lambda_unknowns(n: Index, m: Index, star: bool):
    lo = (lambda mj: -mj) if star else (lambda mj: -mj + 1)
    return [(j, 2 * e) for j, (nj, mj) in enumerate(zip(n, m)) for e in range(lo(mj), lo(mj) + nj + mj)]


def lambda_system(system: MeasureSystem, n, m, star: bool = False):
    """Matrix, unknowns, conditions and right side of the (star) type I problem at ``(n, m)``."""
    n, m = _pair(system, n, m)
    N, Mt = sum(n), sum(m)
    unknowns = _lambda_unknowns(n, m, star)
    if star:
        conds = [2 * k for k in range(-Mt, N)]
        rhs = np.zeros(N + Mt)
        rhs[0] = 1.0
    else:
        conds = [2 * k for k in range(-Mt + 1, N + 1)]
        rhs = np.zeros(N + Mt)
        rhs[-1] = 1.0
    return type1_matrix(system, unknowns, conds), unknowns, conds, rhs


def _solve_lambda(system, n, m, star, eps_normal):
    n, m = _pair(system, n, m)
    if sum(n) + sum(m) == 0:
        raise NoTypeIAtZero("type I vectors are not defined at the zero index")
    _, unknowns, conds, rhs = lambda_system(system, n, m, star)
    return _solve_type1(system, unknowns, conds, rhs, NotLaurentNormal, f"pair {(m, n)}", eps_normal)


def solve_Lambda(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL) -> TypeIVector:
    """``Lambda_{n,m}``: entry j on ``-m_j+1..n_j``, conditions ``k = -|m|+1..|n|-1``, ``L[. w**-|n|] = 1``."""
    return _solve_lambda(system, n, m, False, eps_normal)


def solve_Lambda_star(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL) -> TypeIVector:
    """``Lambda*_{n,m}``: entry j on ``-m_j..n_j-1``, conditions ``k = -|m|+1..|n|-1``, ``L[. w**|m|] = 1``."""
    return _solve_lambda(system, n, m, True, eps_normal)


def lambda_residuals(system: MeasureSystem, n, m, vec: TypeIVector, star: bool = False) -> np.ndarray:
    """Residuals of all conditions, normalization row included (it should equal 1)."""
    _, _, conds, rhs = lambda_system(system, n, m, star)
    return type1_residuals(system, vec, conds) - rhs


def moment_source_ok(system: MeasureSystem, n) -> bool:
    """Finite-support surrogate: every measure has at least |n| distinct support points."""
    n = as_index(n, system.r)
    N = sum(n)
    return all(isinstance(e, MomentFunctional) or e.support_size() >= N for e in system.entries)


def result_json(system: MeasureSystem, n, poly: HalfLaurentPoly | None, report: NormalityReport,
                residual_max: float | None) -> dict:
    return {
        "index": list(as_index(n, system.r)),
        "normal": report.verdict,
        "det": [report.det.real, report.det.imag],
        "sigma_min": report.sigma_min,
        "coeffs": poly.to_json_list() if poly is not None else None,
        "residual_max": residual_max,
    }

"""Recurrence coefficients, nearest-neighbour relations and the Szego-map links.

Polynomials and type I vectors are compared in coefficient space: a vector
is flattened to a map ``(j, twice_exp) -> coeff`` and scalar polynomials use
``j = 0``.  Connection coefficients are fitted by least squares and the fit
residual doubles as the verification.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import engine as E
from .engine import TypeIVector, as_index, shift
from .errors import (
    DegenerateSpan,
    InconsistentRelation,
    NearSingularPrefactor,
    NoTypeIAtZero,
    NotNormal,
    Unsupported,
)
from .laurent import HalfLaurentPoly, compose_J
from .linalg import DEFAULT_EPS_NORMAL, lu_solve, normality_report
from .measures import CircleMeasure, MeasureSystem, RealMeasure, szego_system

RELATION_TOL = 1e-8


# coefficient-space helpers


def _flat(x) -> dict:
    if isinstance(x, TypeIVector):
        return {(j, k): v for j, p in enumerate(x) for k, v in p.coeffs.items()}
    return {(0, k): v for k, v in x.coeffs.items()}


def _scale(x) -> float:
    vals = _flat(x).values()
    return max((abs(v) for v in vals), default=0.0)


def _diff(a, b) -> float:
    fa, fb = _flat(a), _flat(b)
    return max((abs(fa.get(k, 0j) - fb.get(k, 0j)) for k in set(fa) | set(fb)), default=0.0)


def _lstsq(target, basis: Sequence):
    """Coefficients ``x`` minimizing ``|target - sum x_i basis_i|`` and the max-abs residual."""
    ft = _flat(target)
    fb = [_flat(b) for b in basis]
    keys = sorted(set(ft).union(*fb)) if fb else sorted(ft)
    t = np.array([ft.get(k, 0j) for k in keys])
    if not basis:
        return np.zeros(0, dtype=complex), float(np.abs(t).max(initial=0.0))
    B = np.array([[f.get(k, 0j) for f in fb] for k in keys])
    x, *_ = np.linalg.lstsq(B, t, rcond=None)
    return x, float(np.abs(t - B @ x).max(initial=0.0))


# real-line multiple orthogonal polynomials


@dataclass
class RealMOP:
    """Type II polynomial ``P`` (ascending coefficients) and type I vector ``A`` for one index."""

    index: tuple
    P: np.ndarray | None = None
    A: list | None = None


def _real_moments(gammas: Sequence[RealMeasure], K: int) -> list[np.ndarray]:
    return [g.moments(K) for g in gammas]


def real_mop_typeII(gammas: Sequence[RealMeasure], n, eps_normal: float = DEFAULT_EPS_NORMAL) -> np.ndarray:
    """Monic ``P_n`` with ``int P_n x**k dgamma_j = 0`` for ``k < n_j``; ascending coefficients."""
    n = as_index(n, len(gammas))
    N = sum(n)
    if N == 0:
        return np.array([1.0])
    mom = _real_moments(gammas, 2 * N)
    A = np.array([[mom[j][i + k] for i in range(N)] for j, nj in enumerate(n) for k in range(nj)])
    b = np.array([mom[j][N + k] for j, nj in enumerate(n) for k in range(nj)])
    rep = normality_report(A, eps_normal)
    if not rep.verdict:
        raise NotNormal(f"index {n} is not normal for the real system")
    x = lu_solve(A, -b).real
    return np.concatenate([x, [1.0]])


def real_mop_typeI(gammas: Sequence[RealMeasure], n, eps_normal: float = DEFAULT_EPS_NORMAL) -> list[np.ndarray]:
    """``A_{n,j}`` of degree ``< n_j`` with the mixed moments ``0, ..., 0, 1`` up to ``x**(|n|-1)``."""
    n = as_index(n, len(gammas))
    N = sum(n)
    if N == 0:
        raise NoTypeIAtZero("type I vectors are not defined at the zero index")
    mom = _real_moments(gammas, 2 * N)
    cols = [(j, i) for j, nj in enumerate(n) for i in range(nj)]
    A = np.array([[mom[j][i + k] for j, i in cols] for k in range(N)])
    rhs = np.zeros(N)
    rhs[-1] = 1.0
    rep = normality_report(A, eps_normal)
    if not rep.verdict:
        raise NotNormal(f"index {n} is not normal for the real system")
    x = lu_solve(A, rhs).real
    out = [np.zeros(nj) for nj in n]
    for (j, i), v in zip(cols, x):
        out[j][i] = v
    return out


def _J_vector(A: list[np.ndarray]) -> TypeIVector:
    return TypeIVector(compose_J(a) if len(a) else HalfLaurentPoly() for a in A)


# classical OPUC oracle


def classical_opuc(mu: CircleMeasure, n: int) -> list[HalfLaurentPoly]:
    """Monic ``Phi_0..Phi_n`` from the forward recursion ``Phi_{k+1} = z Phi_k + a_k Phi_k^*``.

    Each ``a_k`` is chosen so that ``Phi_{k+1}`` is orthogonal to the constants;
    orthogonality to ``z..z**k`` is inherited from ``Phi_k`` and its reversal.
    """
    out = [HalfLaurentPoly({0: 1.0})]
    for k in range(n):
        phi = out[-1]
        rev = phi.sharp().mul_by_power(2 * k)
        zphi = phi.mul_by_power(2)
        a = -_integrate(mu, zphi) / _integrate(mu, rev)
        out.append(zphi + rev.scale(a))
    return out


def _integrate(mu: CircleMeasure, p: HalfLaurentPoly) -> complex:
    keys = list(p.coeffs)
    return complex(np.array(list(p.coeffs.values())) @ mu.half_moments(keys))


# recurrence coefficients


@dataclass
class RecurrenceCoeffs:
    """Edge coefficients ``alpha, beta`` and connection coefficients ``rho, sigma`` at ``(n, m)``.

    Entries of ``rho`` (``sigma``) are ``None`` where the backward neighbour in
    ``n`` (``m``) leaves the index lattice.
    """

    n: tuple
    m: tuple
    alpha: complex
    beta: complex
    rho: list
    sigma: list
    rho_residual: float | None = None
    sigma_residual: float | None = None

    def to_json(self) -> dict:
        def c(v):
            return None if v is None else [v.real, v.imag]

        return {
            "n": list(self.n), "m": list(self.m),
            "alpha": c(self.alpha), "beta": c(self.beta),
            "rho": [c(v) for v in self.rho], "sigma": [c(v) for v in self.sigma],
            "rho_residual": self.rho_residual, "sigma_residual": self.sigma_residual,
        }


class _Cache:
    """Per-call memo of neighbour solves; failures are remembered as exceptions."""

    def __init__(self, system: MeasureSystem, eps_normal: float):
        self.system = system
        self.eps = eps_normal
        self._d: dict = {}

    def get(self, kind: str, n, m):
        key = (kind, n, m)
        if key not in self._d:
            try:
                self._d[key] = self._solve(kind, n, m)
            except (NotNormal, NoTypeIAtZero) as exc:
                self._d[key] = exc
        val = self._d[key]
        if isinstance(val, Exception):
            raise val
        return val

    def _solve(self, kind, n, m):
        s, eps = self.system, self.eps
        if min(n + m) < 0:
            raise NotNormal(f"index {(n, m)} leaves the lattice")
        if kind == "Phi":
            return E.solve_Phi_nm(s, n, m, eps)
        if kind == "PhiS":
            return E.solve_Phi_star_nm(s, n, m, eps)
        if kind == "Lam":
            return E.solve_Lambda(s, n, m, eps)
        if kind == "LamS":
            return E.solve_Lambda_star(s, n, m, eps)
        if kind == "cond":
            return E.is_laurent_normal(s, n, m).relative_sigma_min
        raise ValueError(kind)


def rho_relation_applicable(n, m) -> bool:
    """Dropping the ``j`` term for ``n_j = 0`` is only valid when ``m_j = 0`` as well."""
    return not any(a == 0 and b > 0 for a, b in zip(n, m))


def _fit_rho(c: _Cache, n, m, Phi, PhiS, alpha, r):
    if not rho_relation_applicable(n, m):
        return [None] * r, None
    js = [j for j in range(r) if n[j] >= 1]
    target = Phi - PhiS.scale(alpha)
    basis = [c.get("Phi", shift(n, j, -1), m).mul_by_power(2) for j in js]
    x, res = _lstsq(target, basis)
    rho = [None] * r
    for j, v in zip(js, x):
        rho[j] = complex(v)
    return rho, res


def _fit_sigma(c: _Cache, n, m, Phi, PhiS, beta, r):
    if not rho_relation_applicable(m, n):
        return [None] * r, None
    js = [j for j in range(r) if m[j] >= 1]
    target = PhiS - Phi.scale(beta)
    basis = [c.get("PhiS", n, shift(m, j, -1)).mul_by_power(-2) for j in js]
    x, res = _lstsq(target, basis)
    sigma = [None] * r
    for j, v in zip(js, x):
        sigma[j] = complex(v)
    return sigma, res


def extract_coeffs(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL,
                   tol: float = RELATION_TOL, _cache: _Cache | None = None) -> RecurrenceCoeffs:
    """``alpha, beta`` from the solved polynomials; ``rho`` and ``sigma`` by coefficient matching.

    Raises :class:`InconsistentRelation` when a fit leaves a residual above
    ``tol`` times the coefficient scale.
    """
    n, m = as_index(n, system.r), as_index(m, system.r)
    c = _cache or _Cache(system, eps_normal)
    Phi, PhiS = c.get("Phi", n, m), c.get("PhiS", n, m)
    alpha, beta = E.alpha_nm(Phi, m), E.beta_nm(PhiS, n)
    rho, rres = _fit_rho(c, n, m, Phi, PhiS, alpha, system.r)
    sigma, sres = _fit_sigma(c, n, m, Phi, PhiS, beta, system.r)
    scale = max(_scale(Phi), _scale(PhiS), 1.0)
    for name, res in (("rho", rres), ("sigma", sres)):
        if res is not None and res > tol * scale:
            raise InconsistentRelation(f"{name} fit at {(n, m)} leaves residual {res:.3e}")
    return RecurrenceCoeffs(n, m, alpha, beta, rho, sigma, rres, sres)


# the eight relations


@dataclass
class RelationResult:
    relation: int
    k: int | None
    status: str  # "ok", "fail", "inapplicable", "not_normal"
    residual: float | None = None
    scale: float | None = None
    conditioning: float | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {"relation": self.relation, "k": self.k, "status": self.status, "residual": self.residual,
                "scale": self.scale, "conditioning": self.conditioning, "note": self.note}


@dataclass
class RecurrenceReport:
    n: tuple
    m: tuple
    coeffs: RecurrenceCoeffs | None
    results: list = field(default_factory=list)
    rho_consistency: float | None = None
    sigma_consistency: float | None = None

    @property
    def passed(self) -> bool:
        return all(r.status in ("ok", "inapplicable", "not_normal") for r in self.results)

    def max_residual(self, relation: int | None = None) -> float:
        vals = [r.residual / max(r.scale, 1.0) for r in self.results
                if r.status in ("ok", "fail") and (relation is None or r.relation == relation)]
        return max(vals, default=0.0)

    def to_json(self) -> dict:
        return {
            "n": list(self.n), "m": list(self.m),
            "coeffs": self.coeffs.to_json() if self.coeffs else None,
            "relations": [r.to_json() for r in self.results],
            "rho_consistency": self.rho_consistency,
            "sigma_consistency": self.sigma_consistency,
            "passed": self.passed,
        }


def _check(c: _Cache, relation, k, indices, build, tol, note=""):
    """Evaluate one relation; ``build`` returns ``(lhs, rhs)`` or ``(residual, scale)`` for fits."""
    try:
        cond = min(c.get("cond", a, b) for a, b in indices)
        out = build()
    except NotNormal as exc:
        return RelationResult(relation, k, "not_normal", note=str(exc))
    except NoTypeIAtZero as exc:
        return RelationResult(relation, k, "inapplicable", note=str(exc))
    if isinstance(out[0], float):
        res, scale = out
    else:
        lhs, rhs = out
        res, scale = _diff(lhs, rhs), max(_scale(lhs), _scale(rhs))
    status = "ok" if res <= tol * max(scale, 1.0) else "fail"
    return RelationResult(relation, k, status, res, scale, cond, note)


def verify_recurrences(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL,
                       tol: float = RELATION_TOL) -> RecurrenceReport:
    """Reconstruct all eight nearest-neighbour relations at ``(n, m)``, every ``k`` for the indexed ones."""
    n, m = as_index(n, system.r), as_index(m, system.r)
    r = system.r
    c = _Cache(system, eps_normal)
    try:
        co = extract_coeffs(system, n, m, eps_normal, tol=np.inf, _cache=c)
    except NotNormal as exc:
        return RecurrenceReport(n, m, None, [RelationResult(0, None, "not_normal", note=str(exc))])
    a, b = co.alpha, co.beta
    me = (n, m)
    out: list[RelationResult] = []
    rho_fit: list = [None] * r
    sigma_fit: list = [None] * r

    # 1: Lambda = -conj(beta) Lambda* + sum conj(rho_j) z^-1 Lambda_{n+e_j}
    def rel1():
        target = c.get("Lam", n, m) + c.get("LamS", n, m).scale(np.conj(b))
        basis = [c.get("Lam", shift(n, j), m).mul_by_power(-2) for j in range(r)]
        x, res = _lstsq(target, basis)
        rho_fit[:] = [complex(np.conj(v)) for v in x]
        return res, _scale(target)

    out.append(_check(c, 1, None, [me] + [(shift(n, j), m) for j in range(r)], rel1, tol))

    # 2: Phi* = Phi*_{n-e_k} + beta z Phi_{n-e_k}
    for k in range(r):
        if n[k] == 0:
            out.append(RelationResult(2, k, "inapplicable", note="n - e_k leaves the lattice"))
            continue
        nk = shift(n, k, -1)
        out.append(_check(c, 2, k, [me, (nk, m)], lambda nk=nk: (
            c.get("PhiS", n, m), c.get("PhiS", nk, m) + c.get("Phi", nk, m).mul_by_power(2).scale(b)), tol))

    # 3: Phi = alpha Phi* + sum rho_j z Phi_{n-e_j}
    skip3 = "some n_j = 0 with m_j > 0: the z Phi_{n-e_j} term has no valid neighbour"
    skip7 = "some m_j = 0 with n_j > 0: the z^-1 Phi*_{m-e_j} term has no valid neighbour"

    def rel3():
        _, res = _fit_rho(c, n, m, c.get("Phi", n, m), c.get("PhiS", n, m), a, r)
        return res, _scale(c.get("Phi", n, m))

    if rho_relation_applicable(n, m):
        out.append(_check(c, 3, None, [me] + [(shift(n, j, -1), m) for j in range(r) if n[j]], rel3, tol,
                          note=f"terms with n_j = 0 omitted: {[j for j in range(r) if not n[j]]}"))
    else:
        out.append(RelationResult(3, None, "inapplicable", note=skip3))

    # 4: Lambda* = Lambda*_{n+e_k} - conj(alpha) z^-1 Lambda_{n+e_k}
    for k in range(r):
        nk = shift(n, k)
        out.append(_check(c, 4, k, [me, (nk, m)], lambda nk=nk: (
            c.get("LamS", n, m),
            c.get("LamS", nk, m) - c.get("Lam", nk, m).mul_by_power(-2).scale(np.conj(a))), tol))

    # 5: Lambda* = -conj(alpha) Lambda + sum conj(sigma_j) z Lambda*_{m+e_j}
    def rel5():
        target = c.get("LamS", n, m) + c.get("Lam", n, m).scale(np.conj(a))
        basis = [c.get("LamS", n, shift(m, j)).mul_by_power(2) for j in range(r)]
        x, res = _lstsq(target, basis)
        sigma_fit[:] = [complex(np.conj(v)) for v in x]
        return res, _scale(target)

    out.append(_check(c, 5, None, [me] + [(n, shift(m, j)) for j in range(r)], rel5, tol))

    # 6: Phi = Phi_{m-e_k} + alpha z^-1 Phi*_{m-e_k}
    for k in range(r):
        if m[k] == 0:
            out.append(RelationResult(6, k, "inapplicable", note="m - e_k leaves the lattice"))
            continue
        mk = shift(m, k, -1)
        out.append(_check(c, 6, k, [me, (n, mk)], lambda mk=mk: (
            c.get("Phi", n, m), c.get("Phi", n, mk) + c.get("PhiS", n, mk).mul_by_power(-2).scale(a)), tol))

    # 7: Phi* = beta Phi + sum sigma_j z^-1 Phi*_{m-e_j}
    def rel7():
        _, res = _fit_sigma(c, n, m, c.get("Phi", n, m), c.get("PhiS", n, m), b, r)
        return res, _scale(c.get("PhiS", n, m))

    if rho_relation_applicable(m, n):
        out.append(_check(c, 7, None, [me] + [(n, shift(m, j, -1)) for j in range(r) if m[j]], rel7, tol,
                          note=f"terms with m_j = 0 omitted: {[j for j in range(r) if not m[j]]}"))
    else:
        out.append(RelationResult(7, None, "inapplicable", note=skip7))

    # 8: Lambda = Lambda_{m+e_k} - conj(beta) z Lambda*_{m+e_k}
    for k in range(r):
        mk = shift(m, k)
        out.append(_check(c, 8, k, [me, (n, mk)], lambda mk=mk: (
            c.get("Lam", n, m),
            c.get("Lam", n, mk) - c.get("LamS", n, mk).mul_by_power(2).scale(np.conj(b))), tol))

    def consistency(fit, direct):
        vals = [abs(f - d) for f, d in zip(fit, direct) if f is not None and d is not None]
        return max(vals, default=None)

    return RecurrenceReport(n, m, co, out, consistency(rho_fit, co.rho), consistency(sigma_fit, co.sigma))


def rho_sigma_duality(system: MeasureSystem, n, m, eps_normal: float = DEFAULT_EPS_NORMAL) -> float | None:
    """``max_j |sigma_{n,m,j} - conj(rho_{m,n,j})|`` over components where both are defined."""
    a = extract_coeffs(system, n, m, eps_normal, tol=np.inf)
    b = extract_coeffs(system, m, n, eps_normal, tol=np.inf)
    vals = [abs(s - np.conj(p)) for s, p in zip(a.sigma, b.rho) if s is not None and p is not None]
    return max(vals, default=None)


# Szego map checks


def _require_symmetric(system: MeasureSystem, K: int, tol: float = 1e-12):
    for j, e in enumerate(system.entries):
        for k in range(1, K + 1):
            ck = e.moment(k)
            if abs(ck.imag) > tol * max(abs(ck), 1.0):
                raise Unsupported(f"measure {j} is not conjugation-symmetric (Im c_{k} = {ck.imag:.3e})")


@dataclass
class SzegoReport:
    index: tuple
    kind: str
    deviation: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"index": list(self.index), "check": self.kind, "deviation": self.deviation,
                "passed": self.passed, **self.details}


def verify_szego_typeII(gammas: Sequence[RealMeasure], n, tol: float = RELATION_TOL,
                        system: MeasureSystem | None = None) -> SzegoReport:
    """``phi_{2n} + phi_{2n}^sharp`` against ``(1 + alpha_{2n}) P_n(z + 1/z)``."""
    n = as_index(n, len(gammas))
    mu = system or szego_system(gammas)
    _require_symmetric(mu, 2 * sum(n) + 1)
    phi = E.solve_phi(mu, tuple(2 * v for v in n))
    alpha = phi.coeff(-sum(n))
    P = real_mop_typeII(gammas, n)
    lhs = phi + phi.sharp()
    rhs = compose_J(P).scale(1 + alpha)
    dev = lhs.max_abs_diff(rhs)
    return SzegoReport(n, "typeII", dev, dev <= tol * max(1.0, _scale(lhs)),
                       {"alpha": [alpha.real, alpha.imag]})


def _span_fit(target: TypeIVector, gammas, n, tol):
    r = len(gammas)
    basis = [_J_vector(real_mop_typeI(gammas, shift(n, k))) for k in range(r)]
    fb = [_flat(b) for b in basis]
    keys = sorted(set().union(*fb))
    B = np.array([[f.get(k, 0j) for f in fb] for k in keys])
    sv = np.linalg.svd(B, compute_uv=False)
    if sv[0] == 0 or sv[-1] / sv[0] < 1e-12:
        raise DegenerateSpan("the vectors A_{n+e_k}(z + 1/z) are numerically dependent")
    if _scale(target) == 0:
        raise DegenerateSpan("the left-hand vector vanishes")
    c, res = _lstsq(target, basis)
    return c, res, basis


def verify_szego_typeI(gammas: Sequence[RealMeasure], n, tol: float = RELATION_TOL,
                       system: MeasureSystem | None = None) -> SzegoReport:
    """``z xi_{2n} + z^-1 xi_{2n}^sharp`` projected on ``span A_{n+e_k}(z + 1/z)``."""
    n = as_index(n, len(gammas))
    if sum(n) == 0:
        raise NoTypeIAtZero("the type I relation needs |n| >= 1")
    mu = system or szego_system(gammas)
    _require_symmetric(mu, 2 * sum(n) + 1)
    xi = E.solve_type_I(mu, tuple(2 * v for v in n))
    lhs = xi.mul_by_power(2) + xi.sharp().mul_by_power(-2)
    c, res, basis = _span_fit(lhs, gammas, n, tol)
    # lambda_{2n,j} = c_j kappa_{n+e_j,j}: top coefficients of xi and of A_{n+e_j,j}
    lam_dev = 0.0
    zero_c = []
    for j in range(len(gammas)):
        lam = xi[j].coeff(n[j] - 1)
        kappa = real_mop_typeI(gammas, shift(n, j))[j][n[j]]
        lam_dev = max(lam_dev, abs(lam - c[j] * kappa))
        if abs(c[j]) <= 1e-12 * max(1.0, float(np.abs(c).max())):
            zero_c.append(j)
    scale = max(1.0, _scale(lhs))
    ok = res <= tol * scale and lam_dev <= tol * scale
    return SzegoReport(n, "typeI", max(res, lam_dev), ok,
                       {"projection_residual": res, "lambda_kappa_deviation": lam_dev,
                        "c": [[v.real, v.imag] for v in c], "zero_c": zero_c})


def _cmp(a, b) -> tuple[bool, bool]:
    le = all(x <= y for x, y in zip(a, b))
    return le, le and tuple(a) != tuple(b)


def verify_szego_variants(gammas: Sequence[RealMeasure], n, m, tol: float = RELATION_TOL,
                          prefactor_tol: float = 1e-8, system: MeasureSystem | None = None) -> list[SzegoReport]:
    """Alternative Szego-map relations with ``Phi_{n,m}`` and, for ``n < m <= n+1``, the type I span check."""
    r = len(gammas)
    n, m = as_index(n, r), as_index(m, r)
    mu = system or szego_system(gammas)
    _require_symmetric(mu, 2 * (sum(n) + sum(m)) + 1)
    below = all(b >= a - 1 for a, b in zip(n, m)) and _cmp(m, n)[1]
    above = all(b <= a + 1 for a, b in zip(n, m)) and _cmp(n, m)[1]
    if not (below or above):
        raise ValueError("variants need n-1 <= m < n or n < m <= n+1 componentwise")
    P = compose_J(real_mop_typeII(gammas, n))
    if below:
        s = E.solve_Phi_nm(mu, n, m) + E.solve_Phi_star_nm(mu, m, n)
        dev = P.max_abs_diff(s)
        return [SzegoReport((n, m), "variant_i", dev, dev <= tol * max(1.0, _scale(P)))]
    alpha = E.alpha_nm(E.solve_Phi_nm(mu, n, n), n)
    if abs(1 + alpha) <= prefactor_tol:
        raise NearSingularPrefactor(f"1 + alpha_(n,n) = {1 + alpha:.3e} is numerically zero")
    s = E.solve_Phi_nm(mu, n, m) + E.solve_Phi_star_nm(mu, m, n)
    reports = []
    rhs = s.scale(1 / (1 + alpha))
    dev = P.max_abs_diff(rhs)
    reports.append(SzegoReport((n, m), "variant_ii", dev, dev <= tol * max(1.0, _scale(P)),
                               {"alpha_nn": [alpha.real, alpha.imag],
                                "alpha_nm": [E.alpha_nm(E.solve_Phi_nm(mu, n, m), m).real, 0.0]}))
    lam = E.solve_Lambda(mu, n, m) + E.solve_Lambda_star(mu, m, n)
    _, res, _ = _span_fit(lam, gammas, n, tol)
    reports.append(SzegoReport((n, m), "lambda_span", res, res <= tol * max(1.0, _scale(lam))))
    return reports

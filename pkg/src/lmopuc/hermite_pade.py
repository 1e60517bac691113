"""Two-point formal series and Hermite-Pade contact checks.

A Caratheodory-type series is kept as two independent truncated tracks: one
in ascending powers at 0, one in descending powers at infinity.  Products with
Laurent polynomials only ever read inside the truncation; anything beyond it is
a hard :class:`TruncationExceeded`, never a silent zero.

Order conventions: "O(z**N0) at 0" means every coefficient with exponent below
``N0`` vanishes; "O(z**Minf) at infinity" means every coefficient with exponent
above ``Minf`` vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import (
    TypeIVector,
    as_index,
    solve_Lambda,
    solve_Lambda_star,
    solve_Phi_nm,
    solve_Phi_star_nm,
)
from .errors import OrderViolation, ParityMismatch, TruncationExceeded
from .laurent import HalfLaurentPoly
from .measures import MeasureSystem, caratheodory_coeffs


@dataclass(frozen=True, eq=False)
class OneSidedSeries:
    """Truncated series ``sum_i coeffs[i] z**(start + step*i)``; ``step`` is +1 at 0, -1 at infinity.

    Exponents before ``start`` (in the direction of ``step``) are exactly zero;
    exponents past the last stored coefficient are unknown.
    """

    coeffs: np.ndarray
    start: int
    step: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        if self.step not in (1, -1):
            raise ValueError("step must be +1 or -1")

    @property
    def last(self) -> int:
        """Last exponent known exactly."""
        return self.start + self.step * (len(self.coeffs) - 1)

    def known(self, e: int) -> bool:
        return (e - self.start) * self.step <= len(self.coeffs) - 1

    def __getitem__(self, e: int) -> complex:
        i = (int(e) - self.start) * self.step
        if i < 0:
            return 0j
        if i >= len(self.coeffs):
            raise TruncationExceeded(f"coefficient of z^{e} lies beyond the truncation (last known z^{self.last})")
        return complex(self.coeffs[i])

    def mul_poly(self, p: HalfLaurentPoly) -> "OneSidedSeries":
        if not p.is_integer:
            raise ParityMismatch("half-integer powers cannot multiply an integer power series")
        if p.is_zero():
            return OneSidedSeries(np.zeros(len(self.coeffs)), self.start, self.step)
        keys = sorted(p.coeffs)
        lo, hi = keys[0] // 2, keys[-1] // 2
        start = self.start + (lo if self.step == 1 else hi)
        # dense poly in the series direction, then a truncated convolution
        pk = np.array([p[2 * (start - self.start + self.step * i)] for i in range(hi - lo + 1)])
        out = np.convolve(pk, self.coeffs)[: len(self.coeffs)]
        return OneSidedSeries(out, start, self.step)

    def __add__(self, other: "OneSidedSeries") -> "OneSidedSeries":
        if other.step != self.step:
            raise ValueError("cannot add series at different expansion points")
        start = min(self.start, other.start) if self.step == 1 else max(self.start, other.start)
        last = min(self.last, other.last) if self.step == 1 else max(self.last, other.last)
        n = (last - start) * self.step + 1
        exps = [start + self.step * i for i in range(n)]
        return OneSidedSeries([self[e] + other[e] for e in exps], start, self.step)

    def sub_poly(self, p: HalfLaurentPoly) -> "OneSidedSeries":
        """Subtract a Laurent polynomial; its terms must fall inside the known range."""
        if p.is_zero():
            return self
        exps = [k // 2 for k in p.coeffs]
        first = min(exps) if self.step == 1 else max(exps)
        start = min(self.start, first) if self.step == 1 else max(self.start, first)
        n = (self.last - start) * self.step + 1
        out = []
        for i in range(n):
            e = start + self.step * i
            out.append(self[e] - p[2 * e])
        for e in exps:
            if not self.known(e):
                raise TruncationExceeded(f"term z^{e} lies beyond the truncation")
        return OneSidedSeries(out, start, self.step)

    def divide(self, den: "OneSidedSeries") -> "OneSidedSeries":
        """Formal quotient; ``den`` must have a nonzero leading coefficient at its start."""
        if den.step != self.step:
            raise ValueError("cannot divide series at different expansion points")
        d0 = den.coeffs[0]
        if d0 == 0:
            raise ZeroDivisionError("denominator has a vanishing leading coefficient")
        n = min(len(self.coeffs), len(den.coeffs))
        q = np.zeros(n, dtype=complex)
        for k in range(n):
            q[k] = (self.coeffs[k] - den.coeffs[1:k + 1][::-1] @ q[:k]) / d0 if k else self.coeffs[0] / d0
        return OneSidedSeries(q, self.start - den.start, self.step)


@dataclass(frozen=True, eq=False)
class TwoPointSeries:
    """Paired expansions at 0 (``at0``) and at infinity (``atinf``) sharing truncation order ``K``."""

    at0: OneSidedSeries
    atinf: OneSidedSeries
    K: int

    def mul_poly(self, p: HalfLaurentPoly) -> "TwoPointSeries":
        return TwoPointSeries(self.at0.mul_poly(p), self.atinf.mul_poly(p), self.K)

    def __add__(self, other: "TwoPointSeries") -> "TwoPointSeries":
        return TwoPointSeries(self.at0 + other.at0, self.atinf + other.atinf, min(self.K, other.K))

    def moment_scale(self) -> float:
        """``max |c_k|`` over the stored window."""
        a, b = np.abs(self.at0.coeffs), np.abs(self.atinf.coeffs)
        vals = [a[0], b[0]] + list(a[1:] / 2) + list(b[1:] / 2)
        return float(max(vals))


def series_from_measure(m, K: int) -> TwoPointSeries:
    """``F^(0) = c_0 + 2 sum c_k z**k`` and ``F^(inf) = -c_0 - 2 sum c_-k z**-k`` through order K."""
    at0, atinf = caratheodory_coeffs(m, K)
    return TwoPointSeries(OneSidedSeries(at0, 0, 1), OneSidedSeries(atinf, 0, -1), K)


def mul_series(p: HalfLaurentPoly, s: TwoPointSeries) -> TwoPointSeries:
    return s.mul_poly(p)


def auto_truncation(n, m=None) -> int:
    n = as_index(n)
    m = as_index(m if m is not None else [0] * len(n))
    return sum(n) + sum(m) + max(a + b for a, b in zip(n, m)) + 2


# second-kind polynomials


def _moment_table(m, K: int) -> dict[int, complex]:
    return {k: complex(m.moment(k)) for k in range(-K, K + 1)}


def second_kind_pi(p: HalfLaurentPoly, m, sharp: bool = False) -> HalfLaurentPoly:
    """Second-kind polynomial from the coefficient expansion of the Cauchy-type kernel.

    With ``sharp=True`` returns the partner of ``p**sharp`` in the reversed
    problem: the kernel contribution changes sign, the mass term does not.
    """
    q = p.sharp() if sharp else p
    if not q.is_integer:
        raise ParityMismatch("second-kind polynomials need integer exponents")
    if q.is_zero():
        return HalfLaurentPoly()
    K = max(abs(k) for k in q.coeffs) // 2
    c = _moment_table(m, K)
    kappa = {k // 2: v for k, v in q.coeffs.items()}
    mass = sum(v * c[-e] for e, v in kappa.items())
    out: dict[int, complex] = {}

    def add(e, v):
        out[2 * e] = out.get(2 * e, 0j) + v

    for e, v in kappa.items():
        if e > 0:
            add(e, -c[0] * v)
            for i in range(1, e + 1):
                add(e - i, -2 * c[-i] * v)
        elif e == 0:
            add(0, -c[0] * v)
        else:
            add(e, c[0] * v)
            for i in range(1, -e):
                add(e + i, 2 * c[i] * v)
    pi = HalfLaurentPoly(out)
    if sharp:
        # pi_formula(q) = kernel(q) - mass(q); the mirrored problem needs -kernel(q) - mass(q)
        return -pi - 2 * mass
    return pi


# contact orders


@dataclass
class ContactReport:
    required_at0: int
    required_atinf: int
    achieved_at0: int
    achieved_atinf: int
    max_violation: float
    tol: float
    interpolant: HalfLaurentPoly = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.achieved_at0 >= self.required_at0 and self.achieved_atinf <= self.required_atinf

    @property
    def exact(self) -> bool:
        return self.achieved_at0 == self.required_at0 and self.achieved_atinf == self.required_atinf

    def to_json(self) -> dict:
        return {
            "orders_required": [self.required_at0, self.required_atinf],
            "orders_achieved": [self.achieved_at0, self.achieved_atinf],
            "max_violation": self.max_violation,
            "tol": self.tol,
            "passed": self.passed,
        }


def _as_products(p, s):
    if isinstance(p, (TypeIVector, list, tuple)):
        prods = [sj.mul_poly(pj) for pj, sj in zip(p, s)]
        total = prods[0]
        for t in prods[1:]:
            total = total + t
        norm = sum(pj.norm1() for pj in p)
        scale = max(sj.moment_scale() for sj in s)
        return total, norm, scale
    return s.mul_poly(p), p.norm1(), s.moment_scale()


def contact_orders(p, s, required_at0: int, required_atinf: int, tol: float | None = None,
                   raise_on_violation: bool = True, sign: int = -1) -> ContactReport:
    """Check ``p F + sign * X = O(z**required_at0)`` at 0 and ``O(z**required_atinf)`` at infinity.

    ``p`` is a polynomial with series ``s`` or, for type I problems, a sequence
    of polynomials with one series each (the products are summed).  The
    interpolant ``X`` is read from the infinity track above ``required_atinf``
    and from the 0 track otherwise; the report says how far the two tracks
    agree in each direction.
    """
    prod, norm, scale = _as_products(p, s)
    if tol is None:
        tol = 1e-9 * max(norm, 1.0) * scale
    a, b = prod.at0, prod.atinf
    lo, hi = a.start, b.start
    if not a.known(required_at0) or not b.known(required_atinf):
        raise TruncationExceeded("series truncation too short for the requested windows")
    # the interpolant, with its sign so that p F + sign * X is the residual
    X: dict[int, complex] = {}
    for e in range(lo, hi + 1):
        v = b[e] if e > required_atinf else a[e]
        if v != 0:
            X[2 * e] = -sign * v
    interp = HalfLaurentPoly(X)

    def diff(e):
        return a[e] - b[e]

    # at 0: residual vanishes below the first disagreement above required_atinf
    ach0 = a.last + 1
    worst = 0.0
    for e in range(required_atinf + 1, a.last + 1):
        d = abs(diff(e))
        if e < required_at0:
            worst = max(worst, d)
        if d > tol:
            ach0 = e
            break
    achinf = b.last - 1
    for e in range(required_at0 - 1, b.last - 1, -1):
        d = abs(diff(e))
        if e > required_atinf:
            worst = max(worst, d)
        if d > tol:
            achinf = e
            break
    report = ContactReport(required_at0, required_atinf, ach0, achinf, worst, tol, interp)
    if raise_on_violation and not report.passed:
        side, e = ("0", ach0) if ach0 < required_at0 else ("inf", achinf)
        raise OrderViolation(f"contact order violated at {side}: coefficient of z^{e} is {diff(e):.3e}",
                             side=side, exponent=e, value=diff(e))
    return report


# problem-level checks


def poly_series(p: HalfLaurentPoly, step: int, length: int) -> OneSidedSeries:
    """A Laurent polynomial viewed as a (finite) series at 0 (``step=1``) or infinity (``step=-1``)."""
    keys = [k // 2 for k in p.coeffs]
    start = min(keys) if step == 1 else max(keys)
    return OneSidedSeries([p[2 * (start + step * i)] for i in range(length)], start, step)


def _system_series(system: MeasureSystem, K: int) -> list[TwoPointSeries]:
    return [series_from_measure(e, K) for e in system.entries]


@dataclass
class RationalReport:
    required_at0: int
    required_atinf: int
    achieved_at0: int
    achieved_atinf: int
    max_violation: float

    @property
    def passed(self) -> bool:
        return self.achieved_at0 >= self.required_at0 and self.achieved_atinf <= self.required_atinf


def _first_nonzero(s: OneSidedSeries, tol: float) -> int:
    for i, v in enumerate(s.coeffs):
        if abs(v) > tol:
            return s.start + s.step * i
    return s.last + s.step


def rational_orders(phi: HalfLaurentPoly, pi: HalfLaurentPoly, pi_sharp: HalfLaurentPoly,
                    s: TwoPointSeries, required_at0: int, required_atinf: int,
                    tol: float) -> RationalReport:
    """Orders of ``F + pi_sharp/phi_sharp`` at 0 and ``F - pi/phi`` at infinity, by series division."""
    phs = phi.sharp()
    L = len(s.at0.coeffs)
    num0 = s.at0.mul_poly(phs).sub_poly(-pi_sharp)
    q0 = num0.divide(poly_series(phs, 1, L))
    numi = s.atinf.mul_poly(phi).sub_poly(pi)
    qi = numi.divide(poly_series(phi, -1, L))
    if not q0.known(required_at0) or not qi.known(required_atinf):
        raise TruncationExceeded("series truncation too short for the rational contact check")
    ach0 = _first_nonzero(q0, tol)
    achi = _first_nonzero(qi, tol)
    worst = max([abs(q0[e]) for e in range(q0.start, required_at0)]
                + [abs(qi[e]) for e in range(qi.start, required_atinf, -1)] + [0.0])
    return RationalReport(required_at0, required_atinf, ach0, achi, worst)


@dataclass
class ProblemReport:
    """Contact reports for one problem, one entry per measure (or a single summed one for type I)."""

    kind: str
    n: tuple
    m: tuple
    contacts: list
    rational: list = field(default_factory=list)
    pi_match: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.contacts) and all(r.passed for r in self.rational)

    def to_json(self) -> dict:
        return {
            "problem": self.kind,
            "index": [list(self.n), list(self.m)],
            "orders_required": [[c.required_at0, c.required_atinf] for c in self.contacts],
            "orders_achieved": [[c.achieved_at0, c.achieved_atinf] for c in self.contacts],
            "max_violation": max(c.max_violation for c in self.contacts),
            "rational_orders": [[r.achieved_at0, r.achieved_atinf] for r in self.rational],
            "pi_match": self.pi_match,
            "passed": self.passed,
        }


def phi_problem(system: MeasureSystem, n, phi: HalfLaurentPoly | None = None, raise_on_violation=False) -> ProblemReport:
    """Two-point problem solved by ``phi_{2n}`` (monic), including the rational form and pi agreement."""
    n = as_index(n, system.r)
    N = sum(n)
    phi = solve_Phi_nm(system, n, n) if phi is None else phi
    K = auto_truncation(n, n)
    series = _system_series(system, K)
    contacts, rational, pi_dev = [], [], 0.0
    for j, (nj, s) in enumerate(zip(n, series)):
        rep = contact_orders(phi, s, nj, -nj - 1, raise_on_violation=raise_on_violation)
        rep_s = contact_orders(phi.sharp(), s, nj + 1, -nj, sign=+1, raise_on_violation=raise_on_violation)
        contacts += [rep, rep_s]
        if system.measure_backed:
            pi = second_kind_pi(phi, system.entries[j])
            pi_s = second_kind_pi(phi, system.entries[j], sharp=True)
            pi_dev = max(pi_dev, rep.interpolant.max_abs_diff(pi), rep_s.interpolant.max_abs_diff(pi_s))
        else:
            pi, pi_s = rep.interpolant, rep_s.interpolant
        rational.append(rational_orders(phi, pi, pi_s, s, N + nj + 1, -N - nj - 1, rep.tol))
    return ProblemReport("phi", n, n, contacts, rational, pi_dev)


def Phi_problem(system: MeasureSystem, n, m, star: bool = False, poly: HalfLaurentPoly | None = None,
                raise_on_violation=False) -> ProblemReport:
    """Generalized type II problem for ``Phi_{n,m}`` (or ``Phi*_{n,m}``) against formal series."""
    n, m = as_index(n, system.r), as_index(m, system.r)
    if poly is None:
        poly = solve_Phi_star_nm(system, n, m) if star else solve_Phi_nm(system, n, m)
    series = _system_series(system, auto_truncation(n, m))
    contacts = []
    for nj, mj, s in zip(n, m, series):
        w0, winf = (nj + 1, -mj) if star else (nj, -mj - 1)
        contacts.append(contact_orders(poly, s, w0, winf, raise_on_violation=raise_on_violation))
    return ProblemReport("Phi_star" if star else "Phi", n, m, contacts)


def Lambda_problem(system: MeasureSystem, n, m, star: bool = False, vec: TypeIVector | None = None,
                   raise_on_violation=False) -> ProblemReport:
    """Type I problem: ``sum_j Lambda_j F_j - Xi`` has orders ``|n|`` at 0 and ``-|m|`` at infinity."""
    n, m = as_index(n, system.r), as_index(m, system.r)
    if vec is None:
        vec = solve_Lambda_star(system, n, m) if star else solve_Lambda(system, n, m)
    series = _system_series(system, auto_truncation(n, m))
    rep = contact_orders(list(vec), series, sum(n), -sum(m), raise_on_violation=raise_on_violation)
    return ProblemReport("Lambda_star" if star else "Lambda", n, m, [rep])


def perturbation_breaks(system: MeasureSystem, problem: str, n, m=None, delta: float = 1e-3) -> list[bool]:
    """For each free coefficient, whether perturbing it by ``delta`` breaks some window."""
    n = as_index(n, system.r)
    m = n if m is None else as_index(m, system.r)
    out = []
    if problem in ("Lambda", "Lambda_star"):
        star = problem == "Lambda_star"
        vec = solve_Lambda_star(system, n, m) if star else solve_Lambda(system, n, m)
        for j, pj in enumerate(vec):
            for k in pj.coeffs:
                bumped = list(vec)
                bumped[j] = pj + HalfLaurentPoly({k: delta})
                rep = Lambda_problem(system, n, m, star, TypeIVector(bumped))
                out.append(not rep.passed)
        return out
    star = problem == "Phi_star"
    if problem == "phi":
        poly = solve_Phi_nm(system, n, n)
    else:
        poly = solve_Phi_star_nm(system, n, m) if star else solve_Phi_nm(system, n, m)
    fixed = -2 * sum(m) if star else 2 * sum(n)
    for k in poly.coeffs:
        if k == fixed:
            continue
        bumped = poly + HalfLaurentPoly({k: delta})
        if problem == "phi":
            rep = phi_problem(system, n, bumped)
        else:
            rep = Phi_problem(system, n, m, star, bumped)
        out.append(not all(c.passed for c in rep.contacts))
    return out

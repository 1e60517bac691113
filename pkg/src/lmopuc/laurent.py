"""Laurent polynomials in half-integer powers of z.

Exponents are stored doubled (``twice_exp``), so ``z**(3/2)`` has key 3 and
``z**-1`` has key -2.  A single polynomial holds either only integer powers
(even keys) or only strictly half-integer powers (odd keys).

Half-integer powers are evaluated through a fixed branch of ``z**(1/2)``:
for ``z = exp(i*theta)`` the angle is first reduced into the interval selected
by :class:`BranchSpec`, then halved.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import ParityMismatch

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BranchSpec:
    """Branch of the argument used for ``z**(1/2)``.

    ``closed_end="left"`` reduces angles into ``[t0, t0 + 2pi)``;
    ``closed_end="right"`` reduces into ``(t0, t0 + 2pi]``.
    """

    t0: float = 0.0
    closed_end: str = "left"

    def __post_init__(self):
        if not math.isfinite(self.t0):
            raise ValueError("branch angle t0 must be finite")
        if self.closed_end not in ("left", "right"):
            raise ValueError(f"closed_end must be 'left' or 'right', got {self.closed_end!r}")

    def reduce(self, theta):
        """Map angle(s) into the fundamental interval of the branch."""
        theta = np.asarray(theta, dtype=float)
        r = np.mod(theta - self.t0, TWO_PI)
        r = np.where(r >= TWO_PI, 0.0, r)
        if self.closed_end == "right":
            r = np.where(r == 0.0, TWO_PI, r)
        out = self.t0 + r
        return float(out) if out.ndim == 0 else out

    def on_cut(self, theta, atol=1e-14) -> bool:
        r = float(np.mod(float(theta) - self.t0, TWO_PI))
        return r < atol or TWO_PI - r < atol

    def to_json(self):
        return {"t0": self.t0, "closed_end": self.closed_end}


DEFAULT_BRANCH = BranchSpec()


def half_power(theta, twice_exp, branch: BranchSpec = DEFAULT_BRANCH):
    """``z**(twice_exp/2)`` at ``z = exp(i*theta)`` on the given branch."""
    return np.exp(0.5j * np.multiply.outer(np.asarray(twice_exp, dtype=float), branch.reduce(theta)))


class HalfLaurentPoly:
    """Finite sum ``sum_e c_e z**(e/2)`` with immutable coefficients."""

    __slots__ = ("_c", "branch")

    def __init__(self, coeffs: Mapping[int, complex] | None = None, branch: BranchSpec = DEFAULT_BRANCH):
        c = {}
        for k, v in (coeffs or {}).items():
            v = complex(v)
            if v != 0:
                c[int(k)] = v
        parities = {k & 1 for k in c}
        if len(parities) > 1:
            raise ParityMismatch("a polynomial cannot mix integer and half-integer powers")
        self._c = dict(sorted(c.items()))
        self.branch = branch

    # construction helpers

    @classmethod
    def monomial(cls, twice_exp: int, coeff: complex = 1.0, branch: BranchSpec = DEFAULT_BRANCH):
        return cls({twice_exp: coeff}, branch)

    @classmethod
    def from_array(cls, start_twice: int, values: Iterable[complex], branch: BranchSpec = DEFAULT_BRANCH):
        """Coefficients for twice-exponents ``start, start+2, ...``."""
        return cls({start_twice + 2 * i: v for i, v in enumerate(values)}, branch)

    @classmethod
    def from_integer_array(cls, start_exp: int, values: Iterable[complex]):
        """Coefficients for integer exponents ``start, start+1, ...``."""
        return cls({2 * (start_exp + i): v for i, v in enumerate(values)})

    @classmethod
    def zero(cls):
        return cls()

    # queries

    @property
    def coeffs(self) -> Mapping[int, complex]:
        return MappingProxyType(self._c)

    def __getitem__(self, twice_exp: int) -> complex:
        return self._c.get(int(twice_exp), 0j)

    def coeff(self, exp) -> complex:
        """Coefficient at the (possibly half-integer) exponent ``exp``."""
        return self[round(2 * exp)]

    def is_zero(self) -> bool:
        return not self._c

    @property
    def parity(self) -> int | None:
        if not self._c:
            return None
        return next(iter(self._c)) & 1

    @property
    def is_integer(self) -> bool:
        return self.parity != 1

    @property
    def max_twice_exp(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def min_twice_exp(self) -> int | None:
        return min(self._c) if self._c else None

    def to_array(self, lo: int, hi: int) -> np.ndarray:
        """Dense coefficient vector over twice-exponents ``lo, lo+2, ..., hi``."""
        return np.array([self[e] for e in range(lo, hi + 1, 2)], dtype=complex)

    def norm1(self) -> float:
        return float(sum(abs(v) for v in self._c.values()))

    # arithmetic

    def _check_parity(self, other: "HalfLaurentPoly"):
        if self.parity is not None and other.parity is not None and self.parity != other.parity:
            raise ParityMismatch("cannot add integer and half-integer Laurent polynomials")

    def __add__(self, other):
        if not isinstance(other, HalfLaurentPoly):
            if other == 0:
                return self
            return self + HalfLaurentPoly({0: other}, self.branch)
        self._check_parity(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0j) + v
        return HalfLaurentPoly(c, self.branch)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: complex) -> "HalfLaurentPoly":
        return HalfLaurentPoly({k: s * v for k, v in self._c.items()}, self.branch)

    def mul_by_power(self, twice_exp: int) -> "HalfLaurentPoly":
        return HalfLaurentPoly({k + twice_exp: v for k, v in self._c.items()}, self.branch)

    def __mul__(self, other):
        if isinstance(other, HalfLaurentPoly):
            c: dict[int, complex] = {}
            for k1, v1 in self._c.items():
                for k2, v2 in other._c.items():
                    c[k1 + k2] = c.get(k1 + k2, 0j) + v1 * v2
            return HalfLaurentPoly(c, self.branch)
        return self.scale(other)

    __rmul__ = __mul__

    def sharp(self) -> "HalfLaurentPoly":
        """``conj(p(1/conj(z)))``: conjugate coefficients, reflect exponents."""
        return HalfLaurentPoly({-k: v.conjugate() for k, v in self._c.items()}, self.branch)

    def trim(self, tol: float) -> "HalfLaurentPoly":
        return HalfLaurentPoly({k: v for k, v in self._c.items() if abs(v) > tol}, self.branch)

    def __eq__(self, other):
        if not isinstance(other, HalfLaurentPoly):
            return NotImplemented
        return self._c == other._c

    __hash__ = None

    def max_abs_diff(self, other: "HalfLaurentPoly") -> float:
        keys = set(self._c) | set(other._c)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    # evaluation

    def eval(self, theta, branch: BranchSpec | None = None):
        """Value at ``z = exp(i*theta)``; integer powers do not depend on the branch."""
        branch = branch or self.branch
        theta = np.asarray(theta, dtype=float)
        if not self._c:
            return np.zeros(theta.shape, dtype=complex) if theta.ndim else 0j
        keys = np.fromiter(self._c, dtype=float)
        vals = np.fromiter(self._c.values(), dtype=complex)
        out = np.tensordot(vals, half_power(theta, keys, branch), axes=1)
        return complex(out) if out.ndim == 0 else out

    __call__ = eval

    # serialization

    def to_json_list(self) -> list[list[float]]:
        return [[k, v.real, v.imag] for k, v in self._c.items()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_list())

    @classmethod
    def from_json_list(cls, triples, branch: BranchSpec = DEFAULT_BRANCH):
        return cls({int(k): complex(re, im) for k, re, im in triples}, branch)

    @classmethod
    def from_json(cls, text: str, branch: BranchSpec = DEFAULT_BRANCH):
        return cls.from_json_list(json.loads(text), branch)

    def __repr__(self):
        terms = ", ".join(f"{k}/2: {v:.6g}" for k, v in self._c.items())
        return f"HalfLaurentPoly({{{terms}}})"


def compose_J(q) -> HalfLaurentPoly:
    """Expand ``q(z + 1/z)`` for ``q`` given by ascending coefficients."""
    c: dict[int, complex] = {}
    for k, qk in enumerate(np.asarray(q, dtype=complex)):
        if qk == 0:
            continue
        for i in range(k + 1):
            e = 2 * (k - 2 * i)
            c[e] = c.get(e, 0j) + qk * comb(k, i)
    return HalfLaurentPoly(c)

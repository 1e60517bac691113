"""Determinantal identities checked by exhaustive finite sums.

Everything here works on atoms-only measures, so integrals over products of
the measure become exact sums over atom tuples.  Determinants inside the sums
use the Leibniz expansion (lexicographic permutations with explicit signs),
which keeps this module independent of the LU path used by the solvers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .engine import all_indices, as_index, build_M
from .errors import TooLarge, UnorderedInput, Unsupported
from .laurent import DEFAULT_BRANCH, BranchSpec
from .measures import CircleMeasure, MeasureSystem

MAX_TERMS = 8 ** 6
MAX_ORDER = 6
# round-off floor for the nonnegativity of the ordered integrand, relative to its largest term
SIGN_TOL = 1e-10


@lru_cache(maxsize=None)
def _permutations_with_sign(n: int):
    perms = list(itertools.permutations(range(n)))
    signs = []
    for p in perms:
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        signs.append(-1 if inv % 2 else 1)
    return np.array(perms, dtype=int).reshape(len(perms), n), np.array(signs)


def leibniz_det(A: np.ndarray) -> np.ndarray:
    """Determinant of each trailing ``n x n`` matrix in ``A`` by the Leibniz sum."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[-1]
    if n == 0:
        return np.ones(A.shape[:-2], dtype=complex)
    if n > MAX_ORDER:
        raise TooLarge(f"Leibniz expansion limited to order {MAX_ORDER}")
    perms, signs = _permutations_with_sign(n)
    rows = np.arange(n)
    out = np.zeros(A.shape[:-2], dtype=complex)
    for p, s in zip(perms, signs):
        out += s * np.prod(A[..., rows, p], axis=-1)
    return out


# generalized Andreief identity


@dataclass
class AndreiefInstance:
    """``f`` is M x P and ``g`` is N x P (function values at P atoms), ``A`` is (N-M) x N."""

    f: np.ndarray
    g: np.ndarray
    weights: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        self.f = np.atleast_2d(np.asarray(self.f, dtype=complex))
        self.g = np.atleast_2d(np.asarray(self.g, dtype=complex))
        self.weights = np.asarray(self.weights, dtype=float)
        M, N = self.f.shape[0], self.g.shape[0]
        self.A = np.asarray(self.A, dtype=complex).reshape(N - M, N)
        if not N >= M >= 1:
            raise ValueError("need N >= M >= 1")
        if self.f.shape[1] != self.g.shape[1] or self.f.shape[1] != len(self.weights):
            raise ValueError("f, g and weights must share the atom axis")

    @property
    def M(self) -> int:
        return self.f.shape[0]

    @property
    def N(self) -> int:
        return self.g.shape[0]

    @classmethod
    def random(cls, rng: np.random.Generator, M: int, N: int, atoms: int):
        def cplx(*shape):
            return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

        w = rng.uniform(0.1, 1.0, atoms)
        return cls(cplx(M, atoms), cplx(N, atoms), w / w.sum(), cplx(N - M, N))


def andreief_lhs(inst: AndreiefInstance) -> complex:
    top = (inst.f * inst.weights) @ inst.g.T
    return linalg.det(np.vstack([top, inst.A]))


def andreief_rhs(inst: AndreiefInstance, max_terms: int = MAX_TERMS) -> complex:
    M, N, P = inst.M, inst.N, len(inst.weights)
    if N > MAX_ORDER or P ** M > max_terms:
        raise TooLarge(f"{P}^{M} atom tuples or order {N} exceeds the enumeration bound")
    tuples = np.array(list(itertools.product(range(P), repeat=M)), dtype=int)
    T = len(tuples)
    big = np.empty((T, N, N), dtype=complex)
    big[:, :M, :] = np.transpose(inst.g[:, tuples], (1, 2, 0))
    big[:, M:, :] = inst.A
    small = np.transpose(inst.f[:, tuples], (1, 0, 2))
    w = np.prod(inst.weights[tuples], axis=1)
    total = np.sum(w * leibniz_det(big) * leibniz_det(small))
    return complex(total / math.factorial(M))


# unit-circle Vandermonde


@dataclass(frozen=True)
class VandermondeForms:
    det: complex
    sine_form: complex
    modulus_form: complex | None


def vandermonde_matrix(theta) -> np.ndarray:
    """Rows ``z_j**((-(N-1) + 2k)/2)`` for reduced angles ``theta``."""
    theta = np.asarray(theta, dtype=float)
    N = theta.shape[-1]
    p = -(N - 1) + 2 * np.arange(N)
    return np.exp(0.5j * theta[..., :, None] * p[None, :])


def vandermonde_det(theta, branch: BranchSpec = DEFAULT_BRANCH, require_order: bool = True) -> VandermondeForms:
    """Determinant, sine-product and modulus-product forms of the circle Vandermonde."""
    th = np.atleast_1d(branch.reduce(np.asarray(theta, dtype=float)))
    N = len(th)
    d = linalg.det(vandermonde_matrix(th))
    pairs = [(j, k) for j in range(N) for k in range(j + 1, N)]
    npairs = N * (N - 1) // 2
    sine = (2j) ** npairs * np.prod([math.sin((th[k] - th[j]) / 2) for j, k in pairs])
    z = np.exp(1j * th)
    if np.any(np.diff(th) < 0):
        if require_order:
            raise UnorderedInput("modulus form needs nondecreasing reduced angles")
        modulus = None
    else:
        modulus = 1j ** npairs * np.prod([abs(z[k] - z[j]) for j, k in pairs])
    return VandermondeForms(complex(d), complex(sine), None if modulus is None else complex(modulus))


# Angelesco determinant as a multiple sum


def _atomic_parts(system: MeasureSystem):
    parts = []
    for j, m in enumerate(system.entries):
        if not isinstance(m, CircleMeasure) or not m.is_atomic:
            raise Unsupported("identity checks need atoms-only measures")
        parts.append((np.atleast_1d(system.branch_of(j).reduce(m.atom_angles)), m.atom_weights))
    return parts


def k_sign_exponent(n) -> int:
    return sum(v * (v - 1) // 2 for v in n)


def l_exponent(n) -> int:
    N = sum(n)
    return N * (N - 1) // 2 + k_sign_exponent(n)


def _block_tuples(parts, n, ordered: bool):
    per_block = []
    for (theta, w), nj in zip(parts, n):
        if ordered:
            idx = list(itertools.combinations(range(len(theta)), nj))
            idx = [tuple(sorted(c, key=lambda i: theta[i])) for c in idx]
        else:
            idx = list(itertools.product(range(len(theta)), repeat=nj))
        per_block.append(np.array(idx, dtype=int).reshape(len(idx), nj))
    return per_block


def _angelesco_terms(system: MeasureSystem, n, ordered: bool, max_terms: int):
    n = as_index(n, system.r)
    N = sum(n)
    if N > MAX_ORDER:
        raise TooLarge(f"|n| = {N} exceeds the enumeration bound {MAX_ORDER}")
    parts = _atomic_parts(system)
    blocks = _block_tuples(parts, n, ordered)
    total = int(np.prod([len(b) for b in blocks]))
    if total > max_terms:
        raise TooLarge(f"{total} atom tuples exceed the enumeration bound {max_terms}")
    grids = np.meshgrid(*[np.arange(len(b)) for b in blocks], indexing="ij")
    flat = [g.ravel() for g in grids]
    thetas, weights, smalls = [], [], []
    for (theta, w), b, sel, nj in zip(parts, blocks, flat, n):
        tup = b[sel]
        th = theta[tup]
        thetas.append(th)
        weights.append(np.prod(w[tup], axis=1))
        smalls.append(leibniz_det(vandermonde_matrix(th)) if nj else np.ones(len(sel)))
    big = leibniz_det(vandermonde_matrix(np.concatenate(thetas, axis=1)))
    return big * np.prod(smalls, axis=0), np.prod(weights, axis=0)


def angelesco_det_integral(system: MeasureSystem, n, max_terms: int = MAX_TERMS) -> complex:
    """Right side of the Andreief-based multiple-integral formula for ``det M_n``."""
    n = as_index(n, system.r)
    if sum(n) == 0:
        return 1.0 + 0j
    vals, w = _angelesco_terms(system, n, ordered=False, max_terms=max_terms)
    pref = (-1) ** k_sign_exponent(n) / np.prod([math.factorial(v) for v in n])
    return complex(pref * np.sum(vals * w))


def angelesco_ordered_integrand(system: MeasureSystem, n, max_terms: int = MAX_TERMS) -> np.ndarray:
    """``i**(-l_n) V_|n| prod V_{n_j}`` over strictly ordered atom tuples (nonnegative for Angelesco)."""
    n = as_index(n, system.r)
    vals, _ = _angelesco_terms(system, n, ordered=True, max_terms=max_terms)
    return vals * (1j) ** (-l_exponent(n))


@dataclass
class DetComparison:
    index: tuple
    integral: complex
    lu: complex
    rel_dev: float


def compare_angelesco_det(system: MeasureSystem, n) -> DetComparison:
    integral = angelesco_det_integral(system, n)
    lu = linalg.det(build_M(system, n).matrix)
    scale = max(abs(lu), abs(integral), 1e-300)
    return DetComparison(as_index(n, system.r), integral, lu, abs(integral - lu) / scale)


def verify_identities(seed: int = 0, andreief_instances: int = 100, vandermonde_tuples: int = 100,
                      angelesco_systems: int = 5, max_n: int = 4) -> dict:
    """Randomized sweep over all three identities; returns max relative deviations."""
    from .corpus import angelesco_atoms_system

    rng = np.random.default_rng(seed)
    worst_a = 0.0
    for _ in range(andreief_instances):
        N = int(rng.integers(1, 6))
        M = int(rng.integers(1, N + 1))
        P = int(rng.integers(1, 6 if M <= 4 else 5))
        inst = AndreiefInstance.random(rng, M, N, P)
        lhs, rhs = andreief_lhs(inst), andreief_rhs(inst)
        worst_a = max(worst_a, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0))
    worst_v = 0.0
    for _ in range(vandermonde_tuples):
        N = int(rng.integers(1, 7))
        t0 = float(rng.uniform(-np.pi, np.pi))
        th = np.sort(rng.uniform(t0, t0 + 2 * np.pi, N))
        f = vandermonde_det(th, BranchSpec(t0))
        scale = max(abs(f.det), 1e-300)
        worst_v = max(worst_v, abs(f.det - f.sine_form) / scale, abs(f.det - f.modulus_form) / scale)
    worst_d = 0.0
    sign_min = np.inf
    for s in range(angelesco_systems):
        sysm = angelesco_atoms_system(np.random.default_rng(seed + 1000 + s), r=2 + s % 2, atoms=(5, 8))
        for n in all_indices(sysm.r, max_n, 1):
            worst_d = max(worst_d, compare_angelesco_det(sysm, n).rel_dev)
            vals = angelesco_ordered_integrand(sysm, n)
            if len(vals):
                scale = np.abs(vals).max()
                if scale > 0:
                    sign_min = min(sign_min, float(vals.real.min() / scale),
                                   float(-np.abs(vals.imag).max() / scale))
    return {
        "andreief_max_rel_dev": worst_a,
        "vandermonde_max_rel_dev": worst_v,
        "angelesco_det_max_rel_dev": worst_d,
        "angelesco_integrand_min_normalized": sign_min,
        "passed": bool(worst_a < 1e-10 and worst_v < 1e-10 and worst_d < 1e-9 and sign_min > -SIGN_TOL),
    }

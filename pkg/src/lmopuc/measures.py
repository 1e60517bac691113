"""Measures on the unit circle and on [-2, 2], and systems of them.

Absolutely continuous parts are discretized once, at construction, on
Gauss-Legendre nodes in the angle variable, so every integral downstream is a
finite weighted sum.  A :class:`MomentFunctional` is the formal alternative:
a table of integer moments with no underlying measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ArcOrderError,
    AtomOnCut,
    ChebyshevSampleFailure,
    OverlappingArcs,
    SupportOutOfRange,
    TruncationExceeded,
    Unsupported,
)
from .laurent import DEFAULT_BRANCH, TWO_PI, BranchSpec

DEFAULT_NODES = 200


def _gauss_legendre(a: float, b: float, q: int):
    x, w = np.polynomial.legendre.leggauss(q)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def _density_fn(density) -> Callable[[np.ndarray], np.ndarray]:
    if density is None or density == "uniform":
        return lambda t: np.ones_like(t)
    if callable(density):
        return density
    if isinstance(density, dict) and "poly" in density:
        coeffs = np.asarray(density["poly"], dtype=float)
        return lambda t: np.polynomial.polynomial.polyval(t, coeffs)
    raise ValueError(f"unsupported density {density!r}")


@dataclass(frozen=True, eq=False)
class Arc:
    """Discretized absolutely continuous piece on the angle interval [start, end]."""

    start: float
    end: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def mass(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True, eq=False)
class CircleMeasure:
    """Finite positive measure on the unit circle: atoms plus discretized arcs.

    ``closed_end`` optionally overrides the system's branch convention for this
    measure only (used for a point mass sitting on the branch cut).
    """

    atom_angles: np.ndarray = field(default_factory=lambda: np.zeros(0))
    atom_weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    arcs: tuple[Arc, ...] = ()
    closed_end: str | None = None
    label: str = ""

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.atom_angles, dtype=float))
        w = np.atleast_1d(np.asarray(self.atom_weights, dtype=float))
        if a.shape != w.shape:
            raise ValueError("atom angles and weights differ in length")
        if np.any(w <= 0):
            raise ValueError("atom weights must be positive")
        object.__setattr__(self, "atom_angles", a)
        object.__setattr__(self, "atom_weights", w)
        object.__setattr__(self, "arcs", tuple(self.arcs))

    @property
    def nodes(self) -> np.ndarray:
        return np.concatenate([self.atom_angles, *[arc.nodes for arc in self.arcs]])

    @property
    def weights(self) -> np.ndarray:
        return np.concatenate([self.atom_weights, *[arc.weights for arc in self.arcs]])

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def is_atomic(self) -> bool:
        return not self.arcs

    def support_size(self) -> int:
        return len(np.unique(np.round(np.mod(self.nodes, TWO_PI), 14)))

    def branch_in(self, system_branch: BranchSpec) -> BranchSpec:
        if self.closed_end is None or self.closed_end == system_branch.closed_end:
            return system_branch
        return BranchSpec(system_branch.t0, self.closed_end)

    def with_closed_end(self, closed_end: str | None) -> "CircleMeasure":
        return replace(self, closed_end=closed_end)

    def scaled(self, s: float) -> "CircleMeasure":
        arcs = tuple(Arc(a.start, a.end, a.nodes, s * a.weights) for a in self.arcs)
        return replace(self, atom_weights=s * self.atom_weights, arcs=arcs)

    def normalized(self) -> "CircleMeasure":
        return self.scaled(1.0 / self.total_mass)

    def reweighted(self, w: Callable[[np.ndarray], np.ndarray]) -> "CircleMeasure":
        """The measure ``w(theta) dmu(theta)``."""
        arcs = tuple(Arc(a.start, a.end, a.nodes, a.weights * w(a.nodes)) for a in self.arcs)
        return CircleMeasure(self.atom_angles, self.atom_weights * w(self.atom_angles), arcs,
                             self.closed_end, self.label)

    def half_moments(self, twice_exps, branch: BranchSpec = DEFAULT_BRANCH) -> np.ndarray:
        """``int z**(p/2) dmu`` for each ``p`` in ``twice_exps``."""
        p = np.asarray(twice_exps, dtype=float)
        theta = np.atleast_1d(branch.reduce(self.nodes))
        return np.exp(0.5j * np.multiply.outer(p, theta)) @ self.weights

    def half_moment(self, p: int, branch: BranchSpec = DEFAULT_BRANCH) -> complex:
        return complex(self.half_moments([p], branch)[0])

    def moment(self, k: int) -> complex:
        """``c_k = int z**(-k) dmu``."""
        return self.half_moment(-2 * k)


def atoms(angles, weights=None, normalize=False, label="") -> CircleMeasure:
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    weights = np.full(angles.shape, 1.0 / len(angles)) if weights is None else weights
    m = CircleMeasure(angles, weights, label=label)
    return m.normalized() if normalize else m


def arc_measure(start: float, end: float, density=None, nodes: int = DEFAULT_NODES,
                normalize: bool = True, label: str = "") -> CircleMeasure:
    """Absolutely continuous measure ``density(theta) dtheta`` on the arc [start, end]."""
    if not end > start:
        raise ValueError("arc must have end > start")
    t, w = _gauss_legendre(start, end, nodes)
    w = w * _density_fn(density)(t)
    if np.any(w <= 0):
        raise ValueError("density must be positive on the arc")
    m = CircleMeasure(arcs=(Arc(start, end, t, w),), label=label)
    return m.normalized() if normalize else m


def lebesgue(t0: float = 0.0, nodes: int = DEFAULT_NODES) -> CircleMeasure:
    """Normalized arc length ``dtheta / 2pi`` on the full circle starting at t0."""
    return arc_measure(t0, t0 + TWO_PI, nodes=nodes, normalize=True, label="lebesgue")


@dataclass(frozen=True, eq=False)
class MomentFunctional:
    """Linear functional known only through integer moments ``c_k = L[w**-k]``."""

    c: dict
    k_max: int

    def __post_init__(self):
        c = {int(k): complex(v) for k, v in self.c.items()}
        if 0 not in c:
            raise ValueError("c_0 must be given")
        missing = [k for k in range(-self.k_max, self.k_max + 1) if k not in c]
        if missing:
            raise ValueError(f"moments missing for k={missing[:5]}...")
        object.__setattr__(self, "c", c)

    closed_end = None

    @classmethod
    def from_measure(cls, m: CircleMeasure, k_max: int) -> "MomentFunctional":
        ks = np.arange(-k_max, k_max + 1)
        vals = m.half_moments(-2 * ks)
        return cls(dict(zip(ks.tolist(), vals.tolist())), k_max)

    @property
    def total_mass(self) -> complex:
        return self.c[0]

    def moment(self, k: int) -> complex:
        if abs(k) > self.k_max:
            raise TruncationExceeded(f"moment c_{k} beyond truncation K_max={self.k_max}")
        return self.c[k]

    def half_moments(self, twice_exps, branch: BranchSpec = DEFAULT_BRANCH) -> np.ndarray:
        p = np.asarray(twice_exps, dtype=int)
        if np.any(p % 2):
            raise Unsupported("moment functionals only define integer moments")
        return np.array([self.moment(-int(q) // 2) for q in p], dtype=complex)

    def half_moment(self, p: int, branch: BranchSpec = DEFAULT_BRANCH) -> complex:
        return complex(self.half_moments([p])[0])

    def branch_in(self, system_branch: BranchSpec) -> BranchSpec:
        return system_branch


@dataclass(eq=False)
class MeasureSystem:
    """Ordered tuple of sources with a common branch for ``z**(1/2)``."""

    entries: Sequence[CircleMeasure | MomentFunctional]
    branch: BranchSpec = DEFAULT_BRANCH
    kind: str = "generic"
    arcs: tuple | None = None
    certificate: object = None

    def __post_init__(self):
        self.entries = tuple(self.entries)
        if not self.entries:
            raise ValueError("a system needs at least one measure")

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def measure_backed(self) -> bool:
        return all(isinstance(e, CircleMeasure) for e in self.entries)

    def branch_of(self, j: int) -> BranchSpec:
        return self.entries[j].branch_in(self.branch)

    def half_moments(self, j: int, twice_exps) -> np.ndarray:
        return self.entries[j].half_moments(twice_exps, self.branch_of(j))

    def half_moment(self, j: int, p: int) -> complex:
        return complex(self.half_moments(j, [p])[0])

    def moment(self, j: int, k: int) -> complex:
        return self.entries[j].moment(k)

    def integrate(self, j: int, p) -> complex:
        """``int p(z) dmu_j`` for a :class:`HalfLaurentPoly` ``p``."""
        if p.is_zero():
            return 0j
        keys = list(p.coeffs)
        vals = np.array(list(p.coeffs.values()))
        return complex(vals @ self.half_moments(j, keys))


def caratheodory_coeffs(m: CircleMeasure | MomentFunctional, K: int):
    """Truncated expansions of ``F(z) = int (w+z)/(w-z) dmu(w)`` at 0 and at infinity.

    Returns ``(at0, atinf)``: coefficients of ``z**0..z**K`` and of ``z**0..z**-K``.
    """
    c_pos = np.array([m.moment(k) for k in range(K + 1)], dtype=complex)
    c_neg = np.array([m.moment(-k) for k in range(K + 1)], dtype=complex)
    at0 = 2.0 * c_pos
    at0[0] = c_pos[0]
    atinf = -2.0 * c_neg
    atinf[0] = -c_neg[0]
    return at0, atinf


# Angelesco systems


def _normalize_arc(start, end, t0):
    if not end > start or end - start > TWO_PI + 1e-12:
        raise ArcOrderError(f"arc ({start}, {end}) must satisfy 0 < end - start <= 2pi")
    a = t0 + math.fmod(start - t0, TWO_PI)
    if a < t0:
        a += TWO_PI
    if a >= t0 + TWO_PI - 1e-14:
        a -= TWO_PI
    b = a + (end - start)
    if b > t0 + TWO_PI + 1e-12:
        raise ArcOrderError(f"arc ({start}, {end}) crosses the branch cut at t0={t0}")
    return a, b


def build_angelesco(arcs, measures, t0: float = 0.0, closed_end: str = "left",
                    tol: float = 1e-12) -> MeasureSystem:
    """Validate and assemble an Angelesco system.

    ``arcs[j] = (start, end)`` must be listed in increasing angle starting at
    ``t0`` and may share endpoints only.  ``measures[j]`` must live on
    ``arcs[j]``.  With ``closed_end="right"`` the last measure uses the
    ``(t0, t0 + 2pi]`` branch, which allows a point mass at ``exp(i t0)``.
    """
    if len(arcs) != len(measures) or not arcs:
        raise ValueError("need one arc per measure")
    norm = [_normalize_arc(a, b, t0) for a, b in arcs]
    for i in range(len(norm)):
        for j in range(i + 1, len(norm)):
            lo = max(norm[i][0], norm[j][0])
            hi = min(norm[i][1], norm[j][1])
            if hi - lo > tol:
                raise OverlappingArcs(f"arcs {i} and {j} overlap on an interval of length {hi - lo:.3g}")
    for i in range(len(norm) - 1):
        if norm[i][1] > norm[i + 1][0] + tol:
            raise ArcOrderError("arcs must be listed in increasing angle from t0")

    branch = BranchSpec(t0, "left")
    measures = list(measures)
    last = measures[-1]
    on_cut = [float(t) for t in last.atom_angles if branch.on_cut(t)]
    if on_cut:
        if closed_end == "left":
            raise AtomOnCut("last measure has a point mass on the branch cut; use closed_end='right'")
    if closed_end == "right":
        measures[-1] = last.with_closed_end("right")

    for j, (m, (a, b)) in enumerate(zip(measures, norm)):
        theta = np.atleast_1d(m.branch_in(branch).reduce(m.nodes))
        if np.any(theta < a - tol) or np.any(theta > b + tol):
            raise SupportOutOfRange(f"measure {j} has support outside its arc [{a}, {b}]")
    return MeasureSystem(measures, branch, kind="angelesco", arcs=tuple(norm))


# AT systems


def trig_family(m: int, f: Callable[[np.ndarray], np.ndarray]) -> list[Callable]:
    """Real functions spanning ``f(theta) * z**(k/2)`` for the ``m`` window exponents."""
    fam = []
    if m % 2 == 0:
        for k in range(1, m // 2 + 1):
            s = (2 * k - 1) / 2
            fam.append(lambda t, s=s: f(t) * np.cos(s * t))
            fam.append(lambda t, s=s: f(t) * np.sin(s * t))
    else:
        fam.append(lambda t: f(t) * np.ones_like(t))
        for k in range(1, (m - 1) // 2 + 1):
            fam.append(lambda t, k=k: f(t) * np.cos(k * t))
            fam.append(lambda t, k=k: f(t) * np.sin(k * t))
    return fam


@dataclass
class ChebyshevCertificate:
    """Sampled evidence (not proof) that a Trig family is Chebyshev on [alpha, beta]."""

    samples: int
    sign: int
    min_relative_det: float
    interval: tuple[float, float]


def chebyshev_certificate(funcs, alpha: float, beta: float, samples: int = 200,
                          seed: int = 0, rel_tol: float = 1e-12) -> ChebyshevCertificate:
    n = len(funcs)
    if n == 0:
        return ChebyshevCertificate(0, 1, 1.0, (alpha, beta))
    rng = np.random.default_rng(seed)
    signs = set()
    worst = math.inf
    done = 0
    while done < samples:
        x = np.sort(rng.uniform(alpha, beta, size=n))
        if n > 1 and np.any(np.diff(x) <= 0):
            continue
        W = np.array([u(x) for u in funcs], dtype=float)
        d = np.linalg.det(W)
        scale = np.prod(np.linalg.norm(W, axis=1))
        rel = abs(d) / scale if scale > 0 else 0.0
        worst = min(worst, rel)
        if rel <= rel_tol:
            raise ChebyshevSampleFailure(f"Chebyshev determinant vanishes at nodes {x.tolist()}")
        signs.add(int(np.sign(d)))
        if len(signs) > 1:
            raise ChebyshevSampleFailure("Chebyshev determinant changes sign across samples")
        done += 1
    return ChebyshevCertificate(samples, signs.pop(), worst, (alpha, beta))


def build_at_system(base: CircleMeasure, weights: Sequence[Callable], n, alpha: float, beta: float,
                    samples: int = 200, seed: int = 0):
    """System ``d mu_j = w_j d mu`` on the arc [alpha, beta] plus a Chebyshev certificate for ``n``.

    Raises :class:`ChebyshevSampleFailure` if the sampled certificate fails.
    """
    if not 0 < beta - alpha <= TWO_PI + 1e-12:
        raise ValueError("need 0 < beta - alpha <= 2pi")
    if np.any(base.nodes < alpha - 1e-12) or np.any(base.nodes > beta + 1e-12):
        raise SupportOutOfRange("base measure must live on [alpha, beta]")
    if len(weights) != len(n):
        raise ValueError("one weight function per index component")
    funcs = [u for w, nj in zip(weights, n) for u in trig_family(nj, w)]
    cert = chebyshev_certificate(funcs, alpha, beta, samples=samples, seed=seed)
    entries = [base.reweighted(w) for w in weights]
    return MeasureSystem(entries, BranchSpec(alpha, "left"), kind="at", certificate=cert), cert


# Real line and the Szego map


@dataclass(frozen=True, eq=False)
class RealMeasure:
    """Positive measure on [-2, 2]: atoms plus discretized intervals."""

    points: np.ndarray
    weights: np.ndarray
    intervals: tuple = ()

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.points, dtype=float))
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if p.shape != w.shape:
            raise ValueError("points and weights differ in length")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if np.any(np.abs(p) > 2 + 1e-14):
            raise SupportOutOfRange("real measure must be supported on [-2, 2]")
        object.__setattr__(self, "points", np.clip(p, -2.0, 2.0))
        object.__setattr__(self, "weights", w)

    @classmethod
    def interval(cls, a: float, b: float, density=None, nodes: int = DEFAULT_NODES, normalize=True):
        if not -2 <= a < b <= 2:
            raise SupportOutOfRange("interval must lie in [-2, 2]")
        x, w = _gauss_legendre(a, b, nodes)
        w = w * _density_fn(density)(x)
        if normalize:
            w = w / w.sum()
        return cls(x, w, intervals=((a, b),))

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def moments(self, K: int) -> np.ndarray:
        """``int x**k d gamma`` for k = 0..K."""
        return np.vander(self.points, K + 1, increasing=True).T @ self.weights

    def support_size(self) -> int:
        return len(np.unique(self.points))


def szego_map(g: RealMeasure, nodes_tol: float = 1e-15) -> CircleMeasure:
    """Push ``g`` forward to the conjugation-symmetric measure with ``x = 2 cos(theta)``."""
    if np.any(np.abs(g.points) > 2 + 1e-14):
        raise SupportOutOfRange("Szego map needs support in [-2, 2]")
    theta = np.arccos(np.clip(g.points / 2.0, -1.0, 1.0))
    end = (np.abs(g.points - 2) <= nodes_tol) | (np.abs(g.points + 2) <= nodes_tol)
    # endpoint atoms map to a single self-conjugate point
    theta = np.where(end, np.where(g.points > 0, 0.0, np.pi), theta)
    ang = np.concatenate([theta[end], theta[~end], -theta[~end]])
    wts = np.concatenate([g.weights[end], g.weights[~end] / 2, g.weights[~end] / 2])
    if g.intervals:
        lo = float(theta.min())
        hi = float(theta.max())
        arcs = (Arc(lo, hi, theta[~end], g.weights[~end] / 2),
                Arc(-hi, -lo, -theta[~end], g.weights[~end] / 2))
        return CircleMeasure(theta[end], g.weights[end], arcs, label="szego")
    return CircleMeasure(ang, wts, label="szego")


def szego_system(gammas: Sequence[RealMeasure], t0: float = 0.0) -> MeasureSystem:
    return MeasureSystem([szego_map(g) for g in gammas], BranchSpec(t0), kind="szego")

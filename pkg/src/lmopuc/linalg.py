"""Dense complex LU, determinants and smallest-singular-value estimates.

Moment matrices here are small (at most a few dozen rows), so a plain
partial-pivoting LU in numpy is enough and keeps the singularity threshold
under our control.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, Singular

EPS = np.finfo(float).eps
DEFAULT_EPS_NORMAL = 1e-10


@dataclass(frozen=True)
class LU:
    lu: np.ndarray
    perm: np.ndarray
    sign: int
    threshold: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    @property
    def singular(self) -> bool:
        return bool(np.any(np.abs(np.diag(self.lu)) <= self.threshold)) if self.n else False


def _square(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


def lu_factor(A) -> LU:
    """Partial-pivoting LU, ``A[perm] = L @ U`` with unit-diagonal ``L``."""
    A = _square(A)
    n = A.shape[0]
    a = A.copy()
    perm = np.arange(n)
    sign = 1
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        if a[k, k] != 0:
            a[k + 1:, k] /= a[k, k]
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    max_row = float(np.abs(A).sum(axis=1).max()) if n else 0.0
    return LU(a, perm, sign, n * EPS * max_row)


def _lu_apply(f: LU, b: np.ndarray) -> np.ndarray:
    y = b[f.perm].astype(complex)
    n = f.n
    for i in range(n):
        y[i] -= f.lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - f.lu[i, i + 1:] @ y[i + 1:]) / f.lu[i, i]
    return y


def _lu_apply_adjoint(f: LU, b: np.ndarray) -> np.ndarray:
    # solves A^H x = b with A[perm] = L U
    n = f.n
    U = f.lu
    y = b.astype(complex)
    for i in range(n):
        y[i] = (y[i] - np.conj(U[:i, i]) @ y[:i]) / np.conj(U[i, i])
    for i in range(n - 1, -1, -1):
        y[i] -= np.conj(U[i + 1:, i]) @ y[i + 1:]
    x = np.empty_like(y)
    x[f.perm] = y
    return x


def lu_solve(A, b, factor: LU | None = None) -> np.ndarray:
    """Solve ``A x = b``; raises :class:`Singular` when a pivot is below threshold."""
    A = _square(A)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"rhs of length {b.shape[0]} for a {A.shape[0]}x{A.shape[0]} matrix")
    f = factor or lu_factor(A)
    if f.singular:
        raise Singular("matrix is numerically singular (pivot below threshold)")
    if b.ndim == 1:
        return _lu_apply(f, b)
    return np.column_stack([_lu_apply(f, col) for col in b.T])


def det(A) -> complex:
    A = _square(A)
    if A.shape[0] == 0:
        return 1.0 + 0j
    f = lu_factor(A)
    return complex(f.sign * np.prod(np.diag(f.lu)))


def smallest_singular_value_estimate(A, iterations: int = 30, seed: int = 0) -> float:
    """Inverse power iteration on ``A^H A``; returns 0 for numerically singular ``A``."""
    A = _square(A)
    n = A.shape[0]
    if n == 0:
        return np.inf
    f = lu_factor(A)
    if f.singular:
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    for _ in range(iterations):
        y = _lu_apply(f, _lu_apply_adjoint(f, x))
        ny = np.linalg.norm(y)
        if not np.isfinite(ny) or ny == 0:
            return 0.0
        x = y / ny
    # Rayleigh quotient of A^H A at the converged vector
    return float(np.linalg.norm(A @ x))


@dataclass(frozen=True)
class NormalityReport:
    det: complex
    sigma_min: float
    norm: float
    verdict: bool
    eps_normal: float = DEFAULT_EPS_NORMAL

    @property
    def condition_estimate(self) -> float:
        return self.norm / self.sigma_min if self.sigma_min > 0 else np.inf

    @property
    def relative_sigma_min(self) -> float:
        return self.sigma_min / self.norm if self.norm > 0 else np.inf

    def to_json(self) -> dict:
        return {
            "det": [self.det.real, self.det.imag],
            "sigma_min": self.sigma_min,
            "relative_sigma_min": self.relative_sigma_min,
            "condition_estimate": self.condition_estimate,
            "normal": self.verdict,
        }


def normality_report(A, eps_normal: float = DEFAULT_EPS_NORMAL) -> NormalityReport:
    """Numerical nonsingularity verdict: ``sigma_min / ||A||_F > eps_normal``."""
    A = _square(A)
    if A.shape[0] == 0:
        return NormalityReport(1.0 + 0j, np.inf, 0.0, True, eps_normal)
    s = smallest_singular_value_estimate(A)
    nrm = float(np.linalg.norm(A))
    verdict = nrm > 0 and s / nrm > eps_normal
    return NormalityReport(det(A), s, nrm, bool(verdict), eps_normal)

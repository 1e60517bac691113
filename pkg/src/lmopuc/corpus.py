"""Reproducible toy systems used by tests, scripts and the CLI."""
from __future__ import annotations

import numpy as np

from .laurent import TWO_PI, BranchSpec
from .measures import (
    MeasureSystem,
    RealMeasure,
    atoms as atom_measure,
    build_angelesco,
    lebesgue,
    szego_system,
)


def angelesco_atoms_system(rng: np.random.Generator, r: int = 2, atoms=(10, 50), t0: float = 0.0,
                           gap: float = 0.05) -> MeasureSystem:
    """Atoms-only Angelesco system: ``r`` equal sectors, random atoms inside each.

    ``atoms`` is an inclusive ``(lo, hi)`` range for the atom count per measure.
    """
    lo, hi = atoms
    width = TWO_PI / r
    arcs, measures = [], []
    for j in range(r):
        a, b = t0 + j * width, t0 + (j + 1) * width
        k = int(rng.integers(lo, hi + 1))
        ang = np.sort(rng.uniform(a + gap, b - gap, k))
        w = rng.uniform(0.2, 1.0, k)
        arcs.append((a, b))
        measures.append(atom_measure(ang, w / w.sum()))
    return build_angelesco(arcs, measures, t0=t0)


def lebesgue_system(t0: float = 0.0, nodes: int = 200) -> MeasureSystem:
    return MeasureSystem([lebesgue(t0, nodes)], BranchSpec(t0), kind="lebesgue")


def random_real_atoms(rng: np.random.Generator, a: float, b: float, k: int) -> RealMeasure:
    x = np.sort(rng.uniform(a, b, k))
    w = rng.uniform(0.2, 1.0, k)
    return RealMeasure(x, w / w.sum())


def real_angelesco(rng: np.random.Generator, r: int = 2, atoms=(8, 16)) -> list[RealMeasure]:
    """Discrete real measures on disjoint subintervals of (-2, 2), listed left to right."""
    edges = np.linspace(-1.9, 1.9, r + 1)
    gap = 0.05
    lo, hi = atoms
    return [random_real_atoms(rng, edges[j] + gap, edges[j + 1] - gap, int(rng.integers(lo, hi + 1)))
            for j in range(r)]


def szego_corpus_system(rng: np.random.Generator, r: int = 2, atoms=(8, 16)):
    """``(gammas, system)`` with the circle system obtained through the Szego map."""
    gammas = real_angelesco(rng, r, atoms)
    return gammas, szego_system(gammas)

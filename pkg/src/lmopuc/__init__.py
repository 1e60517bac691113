"""Laurent polynomials orthogonal to several measures on the circle at once.

The package builds moment matrices for systems of measures on the circle,
solves the type I and type II orthogonality problems, checks the associated
two-point Hermite-Pade problems and nearest-neighbour recurrences, and
verifies the determinantal identities behind normality of Angelesco systems.
"""
from .engine import (
    TypeIVector,
    alpha_nm,
    beta_nm,
    build_M,
    build_Omega,
    heine_phi,
    is_laurent_normal,
    is_normal,
    solve_Lambda,
    solve_Lambda_star,
    solve_phi,
    solve_phi_sharp,
    solve_Phi_nm,
    solve_Phi_star_nm,
    solve_type_I,
    solve_type_I_sharp,
)
from .errors import LmopucError
from .laurent import BranchSpec, HalfLaurentPoly, compose_J
from .measures import (
    CircleMeasure,
    MeasureSystem,
    MomentFunctional,
    RealMeasure,
    arc_measure,
    atoms,
    build_angelesco,
    build_at_system,
    lebesgue,
    szego_map,
    szego_system,
)

__version__ = "0.1.0"

__all__ = [
    "BranchSpec", "CircleMeasure", "HalfLaurentPoly", "LmopucError", "MeasureSystem", "MomentFunctional",
    "RealMeasure", "TypeIVector", "alpha_nm", "arc_measure", "atoms", "beta_nm", "build_M", "build_Omega",
    "build_angelesco", "build_at_system", "compose_J", "heine_phi", "is_laurent_normal", "is_normal",
    "lebesgue", "solve_Lambda", "solve_Lambda_star", "solve_phi", "solve_phi_sharp", "solve_Phi_nm",
    "solve_Phi_star_nm", "solve_type_I", "solve_type_I_sharp", "szego_map", "szego_system",
]

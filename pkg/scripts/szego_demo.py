"""Szego-map relations on a discrete real system.

For each index, compares the circle polynomials with the real-line multiple
orthogonal polynomials composed with z + 1/z, and shows the two alternative
relations built from Phi_{n,m}.  The second one is printed next to the
corrected form that carries the extra alpha_{n,m} term.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from lmopuc import engine as E
from lmopuc import recurrence as R
from lmopuc.corpus import szego_corpus_system
from lmopuc.laurent import compose_J


@dataclass
class DemoConfig:
    r: int = 2
    max_total: int = 3
    seed: int = 0


def corrected_second_variant(gammas, system, n, m) -> float:
    P = compose_J(R.real_mop_typeII(gammas, n))
    Pnn, Pnn_s = E.solve_Phi_nm(system, n, n), E.solve_Phi_star_nm(system, n, n)
    a2n, anm = E.alpha_nm(Pnn, n), E.alpha_nm(E.solve_Phi_nm(system, n, m), m)
    lhs = E.solve_Phi_nm(system, n, m) + E.solve_Phi_star_nm(system, m, n)
    rhs = P.scale(1 + a2n) + (Pnn.mul_by_power(2) + Pnn_s.mul_by_power(-2)).scale(anm)
    return lhs.max_abs_diff(rhs)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(DemoConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = DemoConfig(**vars(ap.parse_args()))
    gammas, s = szego_corpus_system(np.random.default_rng(cfg.seed), r=cfg.r)
    print("index        typeII     typeI")
    for n in E.all_indices(cfg.r, cfg.max_total):
        a = R.verify_szego_typeII(gammas, n, system=s).deviation
        b = R.verify_szego_typeI(gammas, n, system=s).deviation if sum(n) else float("nan")
        print(f"{str(n):<12} {a:9.2e} {b:9.2e}")
    print("\npair                 check        deviation   corrected")
    for n in E.all_indices(cfg.r, cfg.max_total - 1):
        for k in range(cfg.r):
            m = tuple(v + (i == k) for i, v in enumerate(n))
            for rep in R.verify_szego_variants(gammas, n, m, system=s):
                extra = f"{corrected_second_variant(gammas, s, n, m):9.2e}" if rep.kind == "variant_ii" else ""
                print(f"{str((n, m)):<20} {rep.kind:<12} {rep.deviation:9.2e}   {extra}")


if __name__ == "__main__":
    main()

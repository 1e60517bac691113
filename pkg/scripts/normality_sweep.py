"""Normality sweep over random atoms-only Angelesco systems.

Prints, per system, how many indices were tested, how many came out normal
and the smallest relative singular value seen.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from lmopuc.corpus import angelesco_atoms_system
from lmopuc.engine import all_indices, is_normal


@dataclass
class SweepConfig:
    systems: int = 20
    max_total: int = 6
    min_atoms: int = 10
    max_atoms: int = 50
    seed: int = 100


def sweep(cfg: SweepConfig):
    for i in range(cfg.systems):
        r = 2 + i % 2
        s = angelesco_atoms_system(np.random.default_rng(cfg.seed + i), r=r, atoms=(cfg.min_atoms, cfg.max_atoms))
        reps = [is_normal(s, n) for n in all_indices(r, cfg.max_total, 1)]
        normal = sum(rep.verdict for rep in reps)
        worst = min(rep.relative_sigma_min for rep in reps)
        yield i, r, len(reps), normal, worst


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(SweepConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    print(f"{'system':>6} {'r':>2} {'indices':>7} {'normal':>6} {'min sigma/|M|':>14}")
    for i, r, total, normal, worst in sweep(cfg):
        print(f"{i:>6} {r:>2} {total:>7} {normal:>6} {worst:>14.3e}")


if __name__ == "__main__":
    main()

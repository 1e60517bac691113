"""Command-line front end: ``lmopuc <command> --config run.json``.

Reports are written as JSON lines (or CSV with ``--format csv``) in a fixed
index order.  Exit status: 0 when every check passed, 1 when some check
failed, 2 for configuration errors, 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Iterable

import numpy as np

from . import engine as E
from . import hermite_pade as HP
from . import recurrence as R
from .config import COMMANDS, PAIR_PROBLEMS, RunConfig
from .errors import ConfigError, LmopucError, NoTypeIAtZero
from .identities import verify_identities
from .linalg import normality_report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _clean(x):
    """Make a report JSON-safe: complex to [re, im], non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(float(x.real)), _clean(float(x.imag))]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def _row_ok(row: dict) -> bool:
    if "error" in row:
        return False
    for key in ("passed", "normal"):
        if key in row and row[key] is False:
            return False
    return True


def _guard(fn: Callable[[], dict], context: dict) -> dict:
    try:
        return fn()
    except LmopucError as exc:
        return {**context, "error": f"{type(exc).__name__}: {exc}"}


def _sweep(items: list, fn: Callable, jobs: int) -> list[dict]:
    """Evaluate ``fn`` over ``items``; rows come back in input order whatever the pool does."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# commands


def cmd_moments(cfg: RunConfig, system, gammas, jobs) -> list[dict]:
    rows = []
    for j in range(system.r):
        for k in range(-cfg.k_max, cfg.k_max + 1):
            rows.append(_guard(lambda: {"measure": j, "k": k, "moment": system.moment(j, k)},
                               {"measure": j, "k": k}))
    return rows


def cmd_normality_table(cfg: RunConfig, system, gammas, jobs) -> list[dict]:
    eps = cfg.tolerances.eps_normal

    def one(n):
        def go():
            rep = E.is_normal(system, n, eps)
            return {"index": n, "det": rep.det, "sigma_min": rep.sigma_min,
                    "relative_sigma_min": rep.relative_sigma_min, "normal": rep.verdict}
        return _guard(go, {"index": n})

    return _sweep(cfg.single_indices(system.r), one, jobs)


def _solve_one(cfg: RunConfig, system, n, m) -> dict:
    eps = cfg.tolerances.eps_normal
    p = cfg.problem
    if p in ("phi", "phi_sharp"):
        rep = E.is_normal(system, n, eps)
        poly = (E.solve_phi if p == "phi" else E.solve_phi_sharp)(system, n, eps)
        res = E.phi_residuals(system, n, poly.sharp() if p == "phi_sharp" else poly)
        return {"problem": p, **E.result_json(system, n, poly, rep, float(np.abs(res).max(initial=0.0)))}
    if p == "type_I":
        vec = E.solve_type_I(system, n, eps)
        rep = normality_report(E.type_I_matrix(system, n), eps)
        return {"problem": p, "index": n, "normal": rep.verdict, "det": rep.det, "sigma_min": rep.sigma_min,
                "coeffs": vec.to_json_list()}
    rep = E.is_laurent_normal(system, n, m, eps)
    if p in ("Phi", "Phi_star"):
        star = p == "Phi_star"
        poly = (E.solve_Phi_star_nm if star else E.solve_Phi_nm)(system, n, m, eps)
        res = (E.Phi_star_nm_residuals if star else E.Phi_nm_residuals)(system, n, m, poly)
        edge = E.beta_nm(poly, n) if star else E.alpha_nm(poly, m)
        coeffs = poly.to_json_list()
    else:
        star = p == "Lambda_star"
        vec = (E.solve_Lambda_star if star else E.solve_Lambda)(system, n, m, eps)
        res = E.lambda_residuals(system, n, m, vec, star)
        edge, coeffs = None, vec.to_json_list()
    out = {"problem": p, "index": [n, m], "normal": rep.verdict, "det": rep.det, "sigma_min": rep.sigma_min,
           "coeffs": coeffs, "residual_max": float(np.abs(res).max(initial=0.0))}
    if edge is not None:
        out["beta" if star else "alpha"] = edge
    return out


def _work_items(cfg: RunConfig, r: int) -> list[tuple]:
    if cfg.problem in PAIR_PROBLEMS:
        return cfg.pair_indices(r)
    return [(n, None) for n in cfg.single_indices(r)]


def cmd_solve(cfg: RunConfig, system, gammas, jobs) -> list[dict]:
    def one(item):
        n, m = item
        return _guard(lambda: _solve_one(cfg, system, n, m), {"problem": cfg.problem, "index": n if m is None else [n, m]})

    return _sweep(_work_items(cfg, system.r), one, jobs)


def cmd_hp_check(cfg: RunConfig, system, gammas, jobs) -> list[dict]:
    p = cfg.problem
    if p not in ("phi",) + PAIR_PROBLEMS:
        raise ConfigError(f"problem: hp-check supports phi, {', '.join(PAIR_PROBLEMS)}")
    check_necessity = bool(cfg.options.get("perturbation_check", False))

    def one(item):
        n, m = item

        def go():
            if p == "phi":
                rep = HP.phi_problem(system, n)
            elif p.startswith("Phi"):
                rep = HP.Phi_problem(system, n, m, star=p == "Phi_star")
            else:
                rep = HP.Lambda_problem(system, n, m, star=p == "Lambda_star")
            row = rep.to_json()
            if check_necessity:
                breaks = HP.perturbation_breaks(system, p, n, m)
                row["perturbations_broken"] = f"{sum(breaks)}/{len(breaks)}"
                row["passed"] = row["passed"] and all(breaks)
            return row

        return _guard(go, {"problem": p, "index": [n, n if m is None else m]})

    return _sweep(_work_items(cfg, system.r), one, jobs)


def cmd_recurrence_report(cfg: RunConfig, system, gammas, jobs) -> list[dict]:
    tol = cfg.tolerances

    def one(item):
        n, m = item

        def go():
            row = R.verify_recurrences(system, n, m, tol.eps_normal, tol.relation).to_json()
            if system.measure_backed:
                row["rho_sigma_duality"] = R.rho_sigma_duality(system, n, m, tol.eps_normal)
            return row

        return _guard(go, {"n": n, "m": m})

    return _sweep(cfg.pair_indices(system.r), one, jobs)


def cmd_szego_check(cfg: RunConfig, system, gammas, jobs) -> list[dict]:
    tol = cfg.tolerances.relation
    r = system.r

    def one(n):
        rows = [_guard(lambda: R.verify_szego_typeII(gammas, n, tol, system).to_json(),
                       {"index": n, "check": "typeII"})]
        try:
            rows.append(R.verify_szego_typeI(gammas, n, tol, system).to_json())
        except NoTypeIAtZero as exc:
            rows.append({"index": n, "check": "typeI", "inapplicable": str(exc)})
        except LmopucError as exc:
            rows.append({"index": n, "check": "typeI", "error": f"{type(exc).__name__}: {exc}"})
        return rows

    out = [row for rows in _sweep(cfg.single_indices(r), one, jobs) for row in rows]
    if "pairs" in cfg.indices:
        def variant(item):
            n, m = item
            try:
                return [x.to_json() for x in R.verify_szego_variants(gammas, n, m, tol, system=system)]
            except ValueError as exc:
                return [{"index": [n, m], "check": "variant", "inapplicable": str(exc)}]
            except LmopucError as exc:
                return [{"index": [n, m], "check": "variant", "error": f"{type(exc).__name__}: {exc}"}]

        out += [row for rows in _sweep(cfg.pair_indices(r), variant, jobs) for row in rows]
    return out


def cmd_verify_identities(cfg: RunConfig, system, gammas, jobs) -> list[dict]:
    keys = ("andreief_instances", "vandermonde_tuples", "angelesco_systems", "max_n")
    kwargs = {k: int(cfg.options[k]) for k in keys if k in cfg.options}
    return [verify_identities(seed=cfg.seed, **kwargs)]


HANDLERS = {
    "moments": cmd_moments,
    "normality-table": cmd_normality_table,
    "solve": cmd_solve,
    "hp-check": cmd_hp_check,
    "recurrence-report": cmd_recurrence_report,
    "szego-check": cmd_szego_check,
    "verify-identities": cmd_verify_identities,
}


def run(cfg: RunConfig, jobs: int = 1) -> tuple[int, list[dict]]:
    """Execute a validated config; returns the exit status and the report rows."""
    system, gammas = (None, None) if cfg.system is None else cfg.system.build(cfg.seed)
    rows = [_clean(r) for r in HANDLERS[cfg.command](cfg, system, gammas, jobs)]
    if any("error" in r for r in rows):
        return EXIT_NUMERIC, rows
    return (EXIT_OK if all(_row_ok(r) for r in rows) else EXIT_FAIL), rows


def format_rows(rows: Iterable[dict], fmt: str) -> str:
    rows = list(rows)
    if fmt == "json":
        return "".join(json.dumps(r, allow_nan=False) + "\n" for r in rows)
    cols: list[str] = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lmopuc", description="Orthogonality solvers and checks for Laurent polynomials against systems of circle measures.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON run configuration (optional for verify-identities)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--jobs", type=int, default=1, help="worker threads for index sweeps")
    ap.add_argument("--seed", type=int, help="overrides the seed in the config")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs: must be at least 1")
        if args.config:
            cfg = RunConfig.load(args.config, args.command)
        elif args.command == "verify-identities":
            cfg = RunConfig.from_dict({}, args.command)
        else:
            raise ConfigError("--config: required for this command")
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed: must be nonnegative")
            cfg = replace(cfg, seed=args.seed)
        status, rows = run(cfg, args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LmopucError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = format_rows(rows, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

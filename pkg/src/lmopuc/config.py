"""Run configurations for the command-line front end.

A config is a JSON object::

    {
      "command": "normality-table",
      "system": {"type": "atoms", "t0": 0.0, "closed_end": "left",
                 "arcs": [[0, 3.1], [3.2, 6.2]],
                 "measures": [{"angles": [...], "weights": [...]}, ...]},
      "indices": {"max_total": 4},
      "tolerances": {"eps_normal": 1e-10, "relation": 1e-8},
      "seed": 0
    }

All angles are radians.  Any key that mentions degrees is rejected.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .engine import all_indices, as_index
from .errors import ConfigError
from .laurent import BranchSpec
from .linalg import DEFAULT_EPS_NORMAL
from .measures import (
    MeasureSystem,
    MomentFunctional,
    RealMeasure,
    arc_measure,
    atoms,
    build_angelesco,
    lebesgue,
    szego_system,
)

COMMANDS = ("moments", "normality-table", "solve", "hp-check", "recurrence-report", "szego-check",
            "verify-identities")
SYSTEM_TYPES = ("atoms", "arc", "lebesgue", "szego_of_real", "functional", "random_angelesco")
PROBLEMS = ("phi", "phi_sharp", "type_I", "Phi", "Phi_star", "Lambda", "Lambda_star")
PAIR_PROBLEMS = ("Phi", "Phi_star", "Lambda", "Lambda_star")


def _reject_degrees(obj, path="config"):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if "deg" in str(k).lower():
                raise ConfigError(f"{path}.{k}: angles must be given in radians; degrees are not accepted")
            if str(k) == "units" and v != "radians":
                raise ConfigError(f"{path}.units: only 'radians' is accepted")
            _reject_degrees(v, f"{path}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _reject_degrees(v, f"{path}[{i}]")


def _get(d: dict, key: str, path: str, kind=None, default: Any = ...):
    if key not in d:
        if default is ...:
            raise ConfigError(f"{path}.{key}: required field missing")
        return default
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ConfigError(f"{path}.{key}: expected {getattr(kind, '__name__', kind)}, got {type(v).__name__}")
    return v


def _float_list(v, path) -> np.ndarray:
    try:
        a = np.asarray(v, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: expected a list of numbers") from exc
    if a.ndim != 1 or not np.all(np.isfinite(a)):
        raise ConfigError(f"{path}: expected a flat list of finite numbers")
    return a


@dataclass
class SystemConfig:
    """Declarative description of a measure system."""

    type: str
    t0: float = 0.0
    closed_end: str = "left"
    measures: list = field(default_factory=list)
    arcs: list | None = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "SystemConfig":
        if not isinstance(d, dict):
            raise ConfigError("system: expected an object")
        kind = _get(d, "type", "system", str)
        if kind not in SYSTEM_TYPES:
            raise ConfigError(f"system.type: unknown type {kind!r}; expected one of {', '.join(SYSTEM_TYPES)}")
        t0 = _get(d, "t0", "system", (int, float), 0.0)
        if not math.isfinite(t0):
            raise ConfigError("system.t0: must be finite")
        closed = _get(d, "closed_end", "system", str, "left")
        if closed not in ("left", "right"):
            raise ConfigError("system.closed_end: must be 'left' or 'right'")
        measures = _get(d, "measures", "system", list, [])
        if kind not in ("lebesgue", "random_angelesco") and not measures:
            raise ConfigError("system.measures: at least one measure is required")
        arcs = _get(d, "arcs", "system", list, None)
        known = {"type", "t0", "closed_end", "measures", "arcs"}
        options = {k: v for k, v in d.items() if k not in known}
        return cls(kind, float(t0), closed, measures, arcs, options)

    def build(self, seed: int = 0) -> tuple[MeasureSystem, list[RealMeasure] | None]:
        """Return the system and, for ``szego_of_real``, the underlying real measures."""
        try:
            return self._build(seed)
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(f"system: {exc}") from exc

    def _build(self, seed: int):
        branch = BranchSpec(self.t0, "left")
        if self.type == "lebesgue":
            nodes = int(self.options.get("nodes", 200))
            return MeasureSystem([lebesgue(self.t0, nodes)], branch, kind="lebesgue"), None
        if self.type == "random_angelesco":
            from .corpus import angelesco_atoms_system

            r = int(self.options.get("r", 2))
            lo, hi = self.options.get("atoms", [10, 50])
            rng = np.random.default_rng(seed)
            return angelesco_atoms_system(rng, r=r, atoms=(int(lo), int(hi)), t0=self.t0), None
        if self.type == "szego_of_real":
            gammas = [self._real(m, f"system.measures[{i}]") for i, m in enumerate(self.measures)]
            return szego_system(gammas, self.t0), gammas
        if self.type == "functional":
            return MeasureSystem([self._functional(m, f"system.measures[{i}]")
                                  for i, m in enumerate(self.measures)], branch, kind="functional"), None
        if self.type == "atoms":
            ms = []
            for i, m in enumerate(self.measures):
                p = f"system.measures[{i}]"
                ang = _float_list(_get(m, "angles", p), f"{p}.angles")
                w = m.get("weights")
                w = None if w is None else _float_list(w, f"{p}.weights")
                ms.append(atoms(ang, w, normalize=bool(m.get("normalize", False))))
        else:
            ms = []
            for i, m in enumerate(self.measures):
                p = f"system.measures[{i}]"
                start = float(_get(m, "start", p, (int, float)))
                end = float(_get(m, "end", p, (int, float)))
                nodes = int(m.get("nodes", 200))
                ms.append(arc_measure(start, end, nodes=nodes))
        if self.arcs is not None or self.type == "arc":
            arcs = self.arcs if self.arcs is not None else [[m["start"], m["end"]] for m in self.measures]
            return build_angelesco([tuple(map(float, a)) for a in arcs], ms, self.t0, self.closed_end), None
        return MeasureSystem(ms, BranchSpec(self.t0, self.closed_end)), None

    @staticmethod
    def _real(m: dict, path: str) -> RealMeasure:
        if "interval" in m:
            a, b = _float_list(m["interval"], f"{path}.interval")
            return RealMeasure.interval(float(a), float(b), nodes=int(m.get("nodes", 200)))
        pts = _float_list(_get(m, "points", path), f"{path}.points")
        w = m.get("weights")
        w = np.full(len(pts), 1.0 / len(pts)) if w is None else _float_list(w, f"{path}.weights")
        return RealMeasure(pts, w)

    @staticmethod
    def _functional(m: dict, path: str) -> MomentFunctional:
        k_max = _get(m, "k_max", path, int)
        raw = _get(m, "moments", path, list)
        if len(raw) != 2 * k_max + 1:
            raise ConfigError(f"{path}.moments: expected {2 * k_max + 1} entries for k = -k_max..k_max")
        vals = {}
        for k, v in zip(range(-k_max, k_max + 1), raw):
            re, im = (v, 0.0) if isinstance(v, (int, float)) else v
            vals[k] = complex(re, im)
        return MomentFunctional(vals, k_max)


@dataclass
class Tolerances:
    eps_normal: float = DEFAULT_EPS_NORMAL
    relation: float = 1e-8

    @classmethod
    def from_dict(cls, d: dict | None) -> "Tolerances":
        d = d or {}
        out = cls(**{k: float(d[k]) for k in ("eps_normal", "relation") if k in d})
        for k in ("eps_normal", "relation"):
            if not getattr(out, k) > 0:
                raise ConfigError(f"tolerances.{k}: must be positive")
        return out


@dataclass
class RunConfig:
    command: str
    system: SystemConfig | None = None
    indices: dict = field(default_factory=dict)
    problem: str = "phi"
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    k_max: int = 4
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict, command: str | None = None) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config: top level must be a JSON object")
        _reject_degrees(d)
        cmd = command or d.get("command")
        if cmd is None:
            raise ConfigError("command: required field missing")
        if cmd not in COMMANDS:
            raise ConfigError(f"command: unknown command {cmd!r}")
        seed = _get(d, "seed", "config", int, 0)
        if seed < 0:
            raise ConfigError("seed: must be nonnegative")
        system = None
        if cmd != "verify-identities":
            system = SystemConfig.from_dict(_get(d, "system", "config", dict))
        if cmd == "szego-check" and system.type != "szego_of_real":
            raise ConfigError("system.type: szego-check needs a 'szego_of_real' system")
        problem = _get(d, "problem", "config", str, "phi")
        if problem not in PROBLEMS:
            raise ConfigError(f"problem: unknown problem {problem!r}")
        indices = _get(d, "indices", "config", dict, {})
        k_max = _get(d, "k_max", "config", int, 4)
        if k_max < 0:
            raise ConfigError("k_max: must be nonnegative")
        known = {"command", "seed", "system", "problem", "indices", "tolerances", "k_max"}
        return cls(cmd, system, indices, problem, Tolerances.from_dict(d.get("tolerances")), seed, k_max,
                   {k: v for k, v in d.items() if k not in known})

    @classmethod
    def load(cls, path: str | Path, command: str | None = None) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: malformed JSON at line {exc.lineno} column {exc.colno}") from exc
        return cls.from_dict(data, command)

    # index handling

    def single_indices(self, r: int) -> list[tuple]:
        """Indices ``n`` from ``indices.list`` or all ``|n| <= indices.max_total``."""
        return self._indices(r, "list", "n")

    def pair_indices(self, r: int) -> list[tuple[tuple, tuple]]:
        """Pairs ``(n, m)`` from ``indices.pairs`` or all pairs with ``|n|, |m| <= max_total``."""
        ind = self.indices
        if "pairs" in ind:
            out = []
            for i, p in enumerate(ind["pairs"]):
                if not (isinstance(p, list) and len(p) == 2):
                    raise ConfigError(f"indices.pairs[{i}]: expected [n, m]")
                out.append((self._one(p[0], r, f"indices.pairs[{i}][0]"), self._one(p[1], r, f"indices.pairs[{i}][1]")))
            return out
        ns = self._range(r)
        return [(n, m) for n in ns for m in ns]

    def _indices(self, r, key, what):
        if key in self.indices:
            items = self.indices[key]
            if not isinstance(items, list):
                raise ConfigError(f"indices.{key}: expected a list of multi-indices")
            return [self._one(v, r, f"indices.{key}[{i}]") for i, v in enumerate(items)]
        return self._range(r)

    def _range(self, r):
        if "max_total" not in self.indices:
            raise ConfigError("indices: give 'max_total' or an explicit list")
        N = self.indices["max_total"]
        lo = self.indices.get("min_total", 0)
        if not isinstance(N, int) or N < 0 or not isinstance(lo, int) or lo < 0:
            raise ConfigError("indices.max_total: must be a nonnegative integer")
        return list(all_indices(r, N, lo))

    @staticmethod
    def _one(v, r, path):
        try:
            n = as_index(v, r)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if any(x < 0 for x in n):
            raise ConfigError(f"{path}: components must be nonnegative")
        return n

"""Batch Monte-Carlo runner for random-polytope expansion experiments.

Each (cell, trial) gets its own seed ``trial_seed(master, cell, trial)`` and
runs independently; records are sorted by (cell, trial) before aggregation,
so outputs are identical for any worker count.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bitgeom import project_codes
from .certify import certify_auto
from .errors import PolyExpandError, RegimeError
from .expansion import cheeger_bounds, edge_expansion_exact, vertex_expansion_exact
from .hullgraph import extract_skeleton
from .randmodels import ModelSpec, canonical_kind, make_rng, parse_fraction, sample, trial_seed
from .walk import build_chain, mixing_time

log = logging.getLogger(__name__)

CHECKS = ("certificate", "exact_expansion", "spectral", "mixing", "max_load", "coverage")
REGIMES = ("few_vertices", "full_cube_expected", "certified", "not_surjective")
DEFAULT_LIMITS = {
    "skeleton_max_points": 64,  # extract the hull graph only up to this many points
    "enum_cap": 24,
    "eigen_cap": 4096,
    "mixing_tmax": 20000,
}


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class CellSpec:
    model: str
    d: int
    n: int | None = None
    p: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "model", canonical_kind(self.model))

    def spec(self, seed: int = 0) -> ModelSpec:
        return ModelSpec(self.model, self.d, self.n, self.p, seed)

    def to_dict(self) -> dict:
        out = {"model": self.spec().kind, "d": self.d}
        if self.n is not None:
            out["n"] = self.n
        else:
            out["p"] = _frac(Fraction(self.p))
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    cells: tuple[CellSpec, ...]
    trials: int
    seed: int = 0
    checks: tuple[str, ...] = ("certificate",)
    limits: dict = field(default_factory=dict, hash=False)
    search_coords: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.cells:
            raise ValueError("the grid needs at least one cell")
        bad = set(self.checks) - set(CHECKS)
        if bad:
            raise ValueError(f"unknown checks {sorted(bad)}")
        for c in self.cells:
            c.spec()  # validates parameters

    @property
    def resolved_limits(self) -> dict:
        return {**DEFAULT_LIMITS, **self.limits}

    @classmethod
    def from_dict(cls, doc: dict, seed: int | None = None) -> "ExperimentConfig":
        cells = []
        for c in doc["cells"]:
            p = c.get("p")
            cells.append(CellSpec(c["model"], int(c["d"]), c.get("n"), parse_fraction(p) if p is not None else None))
        return cls(
            cells=tuple(cells),
            trials=int(doc.get("trials", 1)),
            seed=int(seed if seed is not None else doc.get("seed", 0)),
            checks=tuple(doc.get("checks", ["certificate"])),
            limits=dict(doc.get("limits", {})),
            search_coords=bool(doc.get("search_coords", False)),
        )

    def to_dict(self) -> dict:
        return {
            "cells": [c.to_dict() for c in self.cells],
            "trials": self.trials,
            "seed": self.seed,
            "checks": list(self.checks),
            "limits": self.resolved_limits,
            "search_coords": self.search_coords,
        }


def classify_regime(spec: ModelSpec) -> str | None:
    """Degenerate case of the model parameters, or None when a certificate applies."""
    d = spec.d
    if spec.kind == "binomial":
        if spec.p <= Fraction(d, 2**d) or spec.budget < 2:
            return "few_vertices"
        return None
    if spec.n <= d:
        return "few_vertices"
    if spec.n >= d * 2**d:
        return "full_cube_expected"
    return None


def _few_vertices_limit(spec: ModelSpec) -> int:
    # |V| <= L and connectivity give expansion >= 2/L; the binomial case uses 3 mu <= 3d
    return 3 * spec.d if spec.kind == "binomial" else spec.d


def run_trial(cfg: ExperimentConfig, cell: int, trial: int) -> tuple[dict, float]:
    """One trial; returns (record, wall seconds).  Wall time is kept out of the record."""
    t0 = time.perf_counter()
    c = cfg.cells[cell]
    spec = c.spec(trial_seed(cfg.seed, cell, trial))
    limits = cfg.resolved_limits
    threshold = Fraction(1, 12 * spec.d)
    rec: dict = {
        "cell": cell,
        "trial": trial,
        "model": spec.to_dict(),
        "regime": None,
        "n_points": None,
        "certificate": None,
        "direct_check": None,
        "success": None,
        "error": None,
    }
    try:
        ps, raw = sample(spec)
        regime = classify_regime(spec)
        if ps is None:
            rec["regime"] = regime or "few_vertices"
            rec["error"] = "empty_sample"
            return rec, time.perf_counter() - t0
        rec["n_points"] = len(ps)
        if regime == "few_vertices":
            ok = len(ps) <= _few_vertices_limit(spec)
            rec["direct_check"] = f"n_points <= {_few_vertices_limit(spec)}"
            rec["success"] = ok
        elif regime == "full_cube_expected":
            ok = len(ps) == 2**spec.d
            rec["direct_check"] = "full cube"
            rec["success"] = ok
        else:
            try:
                cert = certify_auto(ps, spec, search=cfg.search_coords)
            except RegimeError as exc:
                regime = exc.case
                rec["regime"] = regime
                ok = len(ps) <= _few_vertices_limit(spec)
                rec["direct_check"] = f"n_points <= {_few_vertices_limit(spec)}"
                rec["success"] = ok
            else:
                regime = "certified" if cert.surjective else "not_surjective"
                rec["certificate"] = cert.to_dict()
                rec["success"] = bool(cert.surjective and cert.edge_bound >= threshold)
                if "max_load" in cfg.checks:
                    loads = project_codes(raw, cert.coords) if raw is not None else None
                    rec["max_load"] = int(np.bincount(loads.astype(np.int64)).max()) if loads is not None else cert.max_fiber
        rec["regime"] = regime
        if "coverage" in cfg.checks and rec["certificate"] is not None:
            rec["coverage"] = rec["certificate"]["coverage"]
        _graph_checks(cfg, ps, rec, limits)
    except PolyExpandError as exc:
        rec["error"] = f"{type(exc).__name__}: {exc}"
    return rec, time.perf_counter() - t0


def _graph_checks(cfg: ExperimentConfig, ps, rec: dict, limits: dict) -> None:
    wanted = {"exact_expansion", "spectral", "mixing"} & set(cfg.checks)
    if not wanted:
        return
    if len(ps) > limits["skeleton_max_points"]:
        rec["graph_checks"] = "skipped: too many points"
        return
    g = extract_skeleton(ps)
    if "exact_expansion" in wanted and 2 <= g.n <= limits["enum_cap"]:
        e = edge_expansion_exact(g, allow_large=limits["enum_cap"] > 24)
        v = vertex_expansion_exact(g, allow_large=limits["enum_cap"] > 24)
        rec["exact"] = {"edge": _frac(e.value), "vertex": _frac(v.value), "edge_witness": list(e.witness)}
        cert = rec.get("certificate")
        if cert and cert["edge_bound"] is not None:
            rec["exact"]["bound_holds"] = Fraction(cert["edge_bound"]) <= e.value
    if "spectral" in wanted and g.n >= 2 and g.n <= limits["eigen_cap"]:
        sb = cheeger_bounds(g)
        rec["spectral"] = {"lambda2": sb.lambda2, "lower": sb.lower, "upper": sb.upper, "max_degree": sb.max_degree}
    if "mixing" in wanted and g.n >= 2:
        rec["mixing_time"] = mixing_time(build_chain(g), 0.25, tmax=limits["mixing_tmax"])


def _run_chunk(args):
    cfg, jobs = args
    return [run_trial(cfg, c, t) for c, t in jobs]


def summarize(cfg: ExperimentConfig, records: Sequence[dict]) -> list[dict]:
    out = []
    for ci, c in enumerate(cfg.cells):
        recs = [r for r in records if r["cell"] == ci]
        done = [r for r in recs if r["success"] is not None]
        wins = sum(1 for r in done if r["success"])
        regimes = {name: sum(1 for r in recs if r["regime"] == name) for name in REGIMES}
        frac = Fraction(wins, len(done)) if done else None
        out.append(
            {
                "cell": ci,
                **c.to_dict(),
                "trials": len(recs),
                "completed": len(done),
                "errors": len(recs) - len(done),
                "successes": wins,
                "success_fraction": _frac(frac),
                "success_rate": None if frac is None else float(frac),
                "empty": not done,
                "threshold": f"1/{12 * c.d}",
                **regimes,
            }
        )
    return out


def run_trials(cfg: ExperimentConfig, workers: int = 1) -> tuple[list[dict], list[dict], list[float]]:
    """All trials of the grid; returns (records, per-cell summaries, wall times)."""
    jobs = [(c, t) for c in range(len(cfg.cells)) for t in range(cfg.trials)]
    if workers <= 1:
        results = [run_trial(cfg, c, t) for c, t in jobs]
    else:
        size = max(1, math.ceil(len(jobs) / (4 * workers)))
        chunks = [(cfg, jobs[i:i + size]) for i in range(0, len(jobs), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_run_chunk, chunks) for r in part]
    results.sort(key=lambda rt: (rt[0]["cell"], rt[0]["trial"]))
    records = [r for r, _ in results]
    return records, summarize(cfg, records), [t for _, t in results]


def max_load_experiment(d: int, k: int, trials: int, seed: int) -> dict:
    """Max bin load when k 2^k uniform points of {0,1}^d are binned by their first k coordinates."""
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    n = k * 2**k
    coords = list(range(k))
    hist: dict[int, int] = {}
    over = 0
    for t in range(trials):
        raw = make_rng(seed, t).integers(0, (1 << d) - 1, size=n, dtype=np.uint64, endpoint=True)
        load = int(np.bincount(project_codes(raw, coords).astype(np.int64), minlength=2**k).max())
        hist[load] = hist.get(load, 0) + 1
        over += load > 6 * k
    return {
        "d": d,
        "k": k,
        "n": n,
        "trials": trials,
        "threshold": 6 * k,
        "histogram": dict(sorted(hist.items())),
        "exceedance": Fraction(over, trials),
    }


def coverage_experiment(d: int, trials: int, seed: int) -> dict:
    """Fraction of trials where d 2^d uniform draws miss some vertex of {0,1}^d."""
    if not 1 <= d <= 14:
        raise ValueError("coverage experiment supports 1 <= d <= 14")
    n = d * 2**d
    fails = 0
    for t in range(trials):
        raw = make_rng(seed, t).integers(0, (1 << d) - 1, size=n, dtype=np.int64, endpoint=True)
        occupied = np.zeros(2**d, dtype=bool)
        occupied[raw] = True
        fails += not occupied.all()
    return {"d": d, "n": n, "trials": trials, "failure": Fraction(fails, trials), "bound": (2 / math.e) ** d}


RECORD_COLUMNS = (
    "cell", "trial", "model", "d", "n", "p", "seed", "regime", "n_points", "k", "max_fiber",
    "coverage", "surjective", "edge_bound", "vertex_bound", "six_d_flag", "success", "error",
    "exact_edge", "exact_vertex", "lambda2", "mixing_time", "max_load",
)
SUMMARY_COLUMNS = (
    "cell", "model", "d", "n", "p", "trials", "completed", "errors", "successes",
    "success_fraction", "success_rate", "threshold", *REGIMES,
)


def _csv_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def record_row(rec: dict) -> dict:
    cert = rec.get("certificate") or {}
    exact = rec.get("exact") or {}
    m = rec["model"]
    row = {
        "cell": rec["cell"], "trial": rec["trial"], "model": m["model"], "d": m["d"],
        "n": m.get("n"), "p": m.get("p"), "seed": m["seed"], "regime": rec["regime"],
        "n_points": rec["n_points"], "k": cert.get("k"), "max_fiber": cert.get("max_fiber"),
        "coverage": cert.get("coverage"), "surjective": cert.get("surjective"),
        "edge_bound": cert.get("edge_bound"), "vertex_bound": cert.get("vertex_bound"),
        "six_d_flag": cert.get("six_d_flag"), "success": rec["success"], "error": rec["error"],
        "exact_edge": exact.get("edge"), "exact_vertex": exact.get("vertex"),
        "lambda2": (rec.get("spectral") or {}).get("lambda2"), "mixing_time": rec.get("mixing_time"),
        "max_load": rec.get("max_load"),
    }
    return {k: _csv_value(row[k]) for k in RECORD_COLUMNS}


def to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _csv_value(r.get(k)) for k in columns})
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def summary_markdown(cfg: ExperimentConfig | None, summaries: Sequence[dict]) -> str:
    lines = ["# Expansion experiment summary", ""]
    if cfg is not None:
        lines += [f"master seed: {cfg.seed}; trials per cell: {cfg.trials}; checks: {', '.join(cfg.checks)}", ""]
    lines += [
        "A certified trial succeeds iff its projection certificate gives edge_bound >= 1/(12d).",
        "Degenerate regimes succeed when their direct check passes.",
        "",
        "| cell | model | d | n / p | completed | errors | successes | fraction | certified | not surjective | few vertices | full cube |",
        "|---|---|---|---|---|---|---|---|---|---|---|---|",
    ]
    for s in summaries:
        size = s.get("n") if s.get("n") is not None else s.get("p")
        frac = "n/a (empty)" if s["success_fraction"] is None else f"{s['success_rate']:.3f}"
        lines.append(
            f"| {s['cell']} | {s['model']} | {s['d']} | {size} | {s['completed']} | {s['errors']} | "
            f"{s['successes']} | {frac} | {s['certified']} | {s['not_surjective']} | "
            f"{s['few_vertices']} | {s['full_cube_expected']} |"
        )
    return "\n".join(lines) + "\n"


def emit_report(
    records: Sequence[dict],
    summaries: Sequence[dict],
    out_dir,
    formats: Sequence[str] = ("json", "csv"),
    cfg: ExperimentConfig | None = None,
    allow_empty: bool = False,
) -> list[str]:
    """Write records/summaries; returns the written paths."""
    if not records and not allow_empty:
        raise ValueError("no records to report (pass allow_empty=True for an empty report)")
    written = []

    def put(name: str, text: str):
        path = os.path.join(out_dir, name)
        try:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        written.append(path)

    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out_dir}: {exc}") from exc
    if "json" in formats:
        doc = {"config": cfg.to_dict() if cfg else None, "records": list(records), "summary": list(summaries)}
        put("records.json", dump_json(doc))
    if "csv" in formats:
        put("records.csv", to_csv([record_row(r) for r in records], RECORD_COLUMNS))
        put("summary.csv", to_csv(summaries, SUMMARY_COLUMNS))
    put("summary.md", summary_markdown(cfg, summaries))
    return written

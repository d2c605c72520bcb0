"""Command line entry point: gen, skeleton, expansion, certify, walk, experiment."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

import numpy as np

from . import bitgeom, certify, expansion, harness, hullgraph, randmodels, walk
from .errors import PolyExpandError


def _frac(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _emit(doc, out):
    text = harness.dump_json(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_skeleton(path):
    with open(path) as fh:
        return hullgraph.skeleton_from_json(fh.read())


def cmd_gen(args):
    if args.model == "binomial":
        if args.p is None:
            raise SystemExit("gen: --p is required for the binomial model")
        ps = randmodels.sample_binomial(args.d, randmodels.parse_fraction(args.p), args.seed)
        if ps is None:
            raise SystemExit("gen: the binomial sample is empty; choose another seed")
    else:
        if args.n is None:
            raise SystemExit(f"gen: --n is required for the {args.model} model")
        if args.model == "bins":
            _, ps = randmodels.sample_balls_into_bins(args.d, args.n, args.seed)
        else:
            ps = randmodels.sample_uniform(args.d, args.n, args.seed)
    bitgeom.write_point_set(ps, args.out)


def cmd_skeleton(args):
    ps = bitgeom.read_point_set(args.inp)
    g = hullgraph.extract_skeleton(ps, budget=args.budget)
    text = hullgraph.skeleton_to_json(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_expansion(args):
    g = _read_skeleton(args.inp)
    fn = expansion.edge_expansion_exact if args.kind == "edge" else expansion.vertex_expansion_exact
    res = fn(g, allow_large=args.allow_large)
    doc = {
        "kind": res.kind,
        "value": _frac(res.value),
        "cut_size": res.cut_size,
        "witness": list(res.witness),
        "witness_labels": [bitgeom.code_to_str(g.labels[i], g.dim) for i in res.witness],
    }
    if args.spectral:
        sb = expansion.cheeger_bounds(g)
        doc.update(lambda2=sb.lambda2, lower=sb.lower, upper=sb.upper, max_degree=sb.max_degree)
    _emit(doc, args.out)


def cmd_certify(args):
    ps = bitgeom.read_point_set(args.inp)
    if args.auto:
        if args.model is None:
            raise SystemExit("certify: --auto needs --model and --n or --p")
        spec = randmodels.ModelSpec(args.model, ps.dim, n=args.n, p=args.p)
        cert = certify.certify_auto(ps, spec, search=args.search_coords)
    else:
        k = args.k if args.k is not None else ps.dim
        if args.search_coords:
            cert = certify.search_coords(ps, k)
        else:
            cert = certify.certify_projection(ps, range(k))
    doc = cert.to_dict()
    doc["fiber_histogram"] = {str(a): b for a, b in certify.fiber_histogram(cert.fibers).items()}
    _emit(doc, args.out)


def cmd_walk(args):
    g = _read_skeleton(args.inp)
    chain = walk.build_chain(g, Fraction(args.laziness))
    tv = walk.worst_tv_trajectory(chain, args.tmax, args.eps)
    if tv[-1] > args.eps:
        raise PolyExpandError(f"TV still above {args.eps} after {args.tmax} steps")
    doc = {"mixing_time": len(tv) - 1, "gap": walk.spectral_gap(chain), "tv": [float(x) for x in tv]}
    if args.trajectory:
        with open(args.trajectory, "w") as fh:
            fh.write("t,tv\n")
            for t, x in enumerate(tv):
                fh.write(f"{t},{float(x)!r}\n")
    _emit(doc, args.out)


def cmd_experiment(args):
    with open(args.config) as fh:
        cfg = harness.ExperimentConfig.from_dict(json.load(fh), seed=args.seed)
    records, summaries, times = harness.run_trials(cfg, workers=args.workers)
    harness.emit_report(records, summaries, args.out, cfg=cfg, allow_empty=True)
    logging.getLogger(__name__).info("%d trials in %.2fs of worker time", len(times), float(np.sum(times)))
    for s in summaries:
        frac = "empty" if s["success_rate"] is None else f"{s['success_rate']:.3f}"
        print(f"cell {s['cell']}: {s['model']} d={s['d']} success {frac} ({s['successes']}/{s['completed']})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyexpand", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a random 0/1 point set")
    p.add_argument("--model", choices=["bins", "binomial", "uniform"], required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--p", help="rational NUM/DEN")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("skeleton", help="extract the polytope graph")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--budget", type=int, default=hullgraph.PAIR_BUDGET)
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("expansion", help="exact edge or vertex expansion of a skeleton")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--kind", choices=["edge", "vertex"], default="edge")
    p.add_argument("--spectral", action="store_true")
    p.add_argument("--allow-large", action="store_true", help="raise the enumeration cap to 32 vertices")
    p.add_argument("--out")
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("certify", help="projection certificate for a point set")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--auto", action="store_true")
    p.add_argument("--model", choices=["bins", "binomial", "uniform"])
    p.add_argument("--n", type=int)
    p.add_argument("--p")
    p.add_argument("--search-coords", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("walk", help="lazy Metropolis walk mixing time")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--laziness", default="1/2")
    p.add_argument("--tmax", type=int, default=walk.MAX_STEPS)
    p.add_argument("--trajectory")
    p.add_argument("--out")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("experiment", help="run a seeded trial grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (PolyExpandError, OSError) as exc:
        print(f"polyexpand {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

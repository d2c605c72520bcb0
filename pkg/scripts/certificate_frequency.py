#!/usr/bin/env python3
"""Success frequency of the 1/(12d) certificate across models and dimensions.

Cells use n (or p 2^d) = k 2^k with k the largest value inside the model's
non-degenerate regime.  Writes records/summaries to --out.
"""

import argparse
import logging
from fractions import Fraction

from polyexpand.harness import CellSpec, ExperimentConfig, emit_report, run_trials


def largest_k(model, d):
    k = 1
    if model == "balls_into_bins":
        while (k + 1) * 2 ** (k + 1) < d * 2**d:
            k += 1
    else:
        while (k + 1) * 2 ** (k + 1) < 2**d:
            k += 1
    return k


def build_cells(models, dims):
    cells = []
    for m in models:
        for d in dims:
            k = largest_k(m, d)
            if m == "binomial":
                cells.append(CellSpec(m, d, p=Fraction(k * 2**k, 2**d)))
            else:
                cells.append(CellSpec(m, d, n=k * 2**k))
    return tuple(cells)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--models", nargs="+", default=["balls_into_bins", "binomial", "uniform"])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--search-coords", action="store_true")
    ap.add_argument("--out", default="results/certificate_frequency")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)

    cfg = ExperimentConfig(
        cells=build_cells(args.models, args.dims), trials=args.trials, seed=args.seed, search_coords=args.search_coords
    )
    records, summaries, times = run_trials(cfg, workers=args.workers)
    emit_report(records, summaries, args.out, cfg=cfg)
    for s in summaries:
        size = s.get("n", s.get("p"))
        print(f"{s['model']:>16} d={s['d']:>2} size={size:>10}  success {s['success_rate']:.3f}  ({s['successes']}/{s['completed']})")
    print(f"total worker time {sum(times):.1f}s; reports in {args.out}")


if __name__ == "__main__":
    main()

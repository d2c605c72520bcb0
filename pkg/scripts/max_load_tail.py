#!/usr/bin/env python3
"""Max bin load for k 2^k balls in 2^k bins, against the 6k threshold."""

import argparse

from polyexpand.harness import max_load_experiment

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--ks", type=int, nargs="+", default=[2, 4, 6, 8, 10])
ap.add_argument("--trials", type=int, default=500)
ap.add_argument("--seed", type=int, default=0)
args = ap.parse_args()

print("k,n,threshold,mean_max_load,max_seen,exceedance")
for k in args.ks:
    res = max_load_experiment(k + 4, k, args.trials, args.seed)
    hist = res["histogram"]
    mean = sum(a * b for a, b in hist.items()) / args.trials
    print(f"{k},{res['n']},{res['threshold']},{mean:.2f},{max(hist)},{float(res['exceedance']):.4f}")

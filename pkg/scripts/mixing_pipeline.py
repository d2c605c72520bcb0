#!/usr/bin/env python3
"""Mixing time of the lazy walk against expansion on cubes and sampled polytopes.

For each graph prints |V|, max degree, exact edge expansion h (when |V| <= 24),
the certified lower bound, the spectral gap, t_mix(1/4) and the ratio
t_mix / ((Delta / h^2) ln |V|).
"""

import argparse
import math

from polyexpand.bitgeom import hypercube_skeleton
from polyexpand.certify import certify_auto
from polyexpand.errors import RegimeError
from polyexpand.expansion import cheeger_bounds, edge_expansion_exact
from polyexpand.hullgraph import extract_skeleton
from polyexpand.randmodels import ModelSpec, sample, trial_seed
from polyexpand.walk import build_chain, mixing_time, spectral_gap


def row(name, g, cert_bound=None):
    chain = build_chain(g)
    t = mixing_time(chain, 0.25)
    h = float(edge_expansion_exact(g).value) if 2 <= g.n <= 24 else None
    low = max(cert_bound or 0.0, cheeger_bounds(g).lower)
    ref = h if h is not None else low
    ratio = t / (g.max_degree() / ref**2 * math.log(g.n)) if g.n > 1 else float("nan")
    hs = f"{h:.4f}" if h is not None else "-"
    print(f"{name:<24} {g.n:>5} {g.max_degree():>4} {hs:>8} {low:>8.4f} {spectral_gap(chain):>8.4f} {t:>6} {ratio:>8.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cube-max", type=int, default=8)
    ap.add_argument("--samples", type=int, default=12)
    ap.add_argument("--d", type=int, default=6)
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'graph':<24} {'|V|':>5} {'D':>4} {'h':>8} {'h_low':>8} {'gap':>8} {'t_mix':>6} {'ratio':>8}")
    for k in range(1, args.cube_max + 1):
        row(f"cube {k}", hypercube_skeleton(k))
    for i in range(args.samples):
        spec = ModelSpec("bins", args.d, n=args.n, seed=trial_seed(args.seed, 0, i))
        ps, _ = sample(spec)
        try:
            cert = certify_auto(ps, spec)
        except RegimeError as exc:
            print(f"sample {i}: {exc.case}")
            continue
        bound = float(cert.edge_bound) if cert.surjective else None
        row(f"bins d={args.d} n={args.n} #{i}", extract_skeleton(ps), bound)


if __name__ == "__main__":
    main()

"""Lazy Metropolis walk on a polytope graph and its total-variation mixing.

The chain moves to each neighbour with probability (1 - laziness) / Delta,
Delta the maximum degree, and stays put otherwise.  The matrix is symmetric,
hence doubly stochastic, so the uniform distribution on vertices is
stationary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitgeom import SkeletonGraph
from .errors import CapExceededError, InvalidArgumentError, ResourceLimitError
from .randmodels import make_rng

MAX_VERTICES = 4096
MAX_STEPS = 100_000


@dataclass(frozen=True, eq=False)
class ChainSpec:
    graph: SkeletonGraph
    laziness: Fraction
    transition: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n

    def exact_transition(self) -> list[list[Fraction]]:
        """The transition matrix in exact rationals."""
        g = self.graph
        delta = g.max_degree()
        step = (1 - self.laziness) / delta if delta else Fraction(0)
        rows = []
        for i in range(g.n):
            row = [Fraction(0)] * g.n
            for j in g.neighbors(i):
                row[int(j)] = step
            row[i] = 1 - len(g.neighbors(i)) * step
            rows.append(row)
        return rows


def build_chain(g: SkeletonGraph, laziness=Fraction(1, 2)) -> ChainSpec:
    laziness = Fraction(laziness)
    if not Fraction(1, 2) <= laziness < 1:
        raise InvalidArgumentError("laziness must lie in [1/2, 1)")
    if g.n > MAX_VERTICES:
        raise ResourceLimitError(f"{g.n} vertices exceed the chain cap of {MAX_VERTICES}")
    if not g.is_connected():
        raise InvalidArgumentError("the walk needs a connected graph")
    delta = g.max_degree()
    if delta == 0:
        return ChainSpec(g, laziness, np.ones((1, 1)))
    move = float((1 - laziness) / delta)
    P = g.adjacency_matrix() * move
    np.fill_diagonal(P, 1.0 - g.degrees() * move)
    return ChainSpec(g, laziness, P)


def _tv_rows(dist: np.ndarray) -> np.ndarray:
    n = dist.shape[-1]
    return 0.5 * np.abs(dist - 1.0 / n).sum(axis=-1)


def tv_trajectory(chain: ChainSpec, start: int, tmax: int) -> np.ndarray:
    """TV distance to uniform after t = 0..tmax steps from ``start``."""
    if not 1 <= tmax <= MAX_STEPS:
        raise ResourceLimitError(f"tmax must be in [1, {MAX_STEPS}]")
    if not 0 <= start < chain.n:
        raise InvalidArgumentError(f"start vertex {start} out of range")
    dist = np.zeros(chain.n)
    dist[start] = 1.0
    out = np.empty(tmax + 1)
    out[0] = _tv_rows(dist)
    for t in range(1, tmax + 1):
        dist = dist @ chain.transition
        out[t] = _tv_rows(dist)
    return out


def worst_tv_trajectory(chain: ChainSpec, tmax: int, eps: float | None = None) -> np.ndarray:
    """max over starts of TV(t); stops early once it is <= eps."""
    dist = np.eye(chain.n)
    out = [float(_tv_rows(dist).max())]
    for _ in range(tmax):
        if eps is not None and out[-1] <= eps:
            break
        dist = dist @ chain.transition
        out.append(float(_tv_rows(dist).max()))
    return np.array(out)


def mixing_time(chain: ChainSpec, eps: float = 0.25, tmax: int = MAX_STEPS) -> int:
    """Smallest t with max over starts of TV(t) <= eps."""
    if not 0 < eps < 1:
        raise InvalidArgumentError("eps must lie in (0, 1)")
    traj = worst_tv_trajectory(chain, tmax, eps)
    if traj[-1] > eps:
        raise CapExceededError(f"TV still above {eps} after {tmax} steps", trajectory=traj)
    return len(traj) - 1


def spectral_gap(chain: ChainSpec) -> float:
    """1 - second largest eigenvalue of the (symmetric) transition matrix."""
    if chain.n < 2:
        return 1.0
    ev = np.linalg.eigvalsh(chain.transition)
    return float(1.0 - ev[-2])


def relaxation_bound(chain: ChainSpec, eps: float) -> int:
    """ceil(ln(1 / (eps * pi_min)) / gap), the spectral upper bound on mixing."""
    return math.ceil(math.log(chain.n / eps) / spectral_gap(chain))


def empirical_tv(chain: ChainSpec, start: int, steps: int, walkers: int, seed: int) -> float:
    """TV to uniform of the empirical law of independent walkers after ``steps``.

    Walker w draws from its own stream (seed, w).  Carries sampling noise of
    order sqrt(n / walkers); meant for graphs too big for matrix powering.
    """
    g = chain.graph
    delta = g.max_degree()
    move = float((1 - chain.laziness) / delta) if delta else 0.0
    counts = np.zeros(g.n)
    for w in range(walkers):
        rng = make_rng(seed, w)
        v = start
        u = rng.random(steps)
        for t in range(steps):
            nb = g.neighbors(v)
            j = int(u[t] / move) if move else len(nb)
            if j < len(nb):
                v = int(nb[j])
        counts[v] += 1
    return float(_tv_rows(counts / walkers))

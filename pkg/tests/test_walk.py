from fractions import Fraction
from itertools import combinations
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyexpand.bitgeom import SkeletonGraph, hypercube_skeleton
from polyexpand.errors import CapExceededError, InvalidArgumentError, ResourceLimitError
from polyexpand.walk import (
    build_chain,
    empirical_tv,
    mixing_time,
    relaxation_bound,
    spectral_gap,
    tv_trajectory,
    worst_tv_trajectory,
)

EDGE = SkeletonGraph.from_edges(2, [(0, 1)])
SQUARE = SkeletonGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@st.composite
def connected_graphs(draw):
    n = draw(st.integers(2, 14))
    # random spanning tree plus extra edges
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    pairs = list(combinations(range(n), 2))
    edges |= set(draw(st.lists(st.sampled_from(pairs), max_size=20)))
    return SkeletonGraph.from_edges(n, edges)


def test_single_edge_chain():
    c = build_chain(EDGE)
    assert c.exact_transition() == [[Fraction(1, 2)] * 2] * 2
    tv = tv_trajectory(c, 0, 3)
    assert tv[0] == 0.5 and tv[1] == 0
    assert mixing_time(c, 0.25) == 1


def test_square_chain():
    P = build_chain(SQUARE).exact_transition()
    assert P[0] == [Fraction(1, 2), Fraction(1, 4), Fraction(0), Fraction(1, 4)]
    tv = tv_trajectory(build_chain(SQUARE), 0, 200)
    stop = int(np.argmax(tv < 1e-12))
    assert stop > 0
    assert np.all(np.diff(tv[: stop + 1]) < 0)


@given(connected_graphs(), st.sampled_from([Fraction(1, 2), Fraction(2, 3), Fraction(9, 10)]))
def test_chain_invariants(g, lazy):
    c = build_chain(g, lazy)
    P = c.exact_transition()
    assert all(sum(row) == 1 for row in P)
    assert all(sum(P[i][j] for i in range(g.n)) == 1 for j in range(g.n))
    assert np.allclose(c.transition, np.array(P, dtype=float), atol=1e-15)
    u = np.full(g.n, 1 / g.n)
    assert np.max(np.abs(u @ c.transition - u)) <= 1e-12
    tv = tv_trajectory(c, 0, 60)
    assert tv[0] == pytest.approx(1 - 1 / g.n)
    assert np.all(np.diff(tv) <= 1e-12)
    assert mixing_time(c, 0.25) >= 1


def test_cube4_relaxation_bound():
    c = build_chain(hypercube_skeleton(4))
    gap = spectral_gap(c)
    assert gap == pytest.approx(1 / 4)  # P = I/2 + A/8, second adjacency eigenvalue 2
    assert mixing_time(c, 0.25) <= math.ceil(math.log(4 * 16) / gap)
    assert relaxation_bound(c, 0.25) == math.ceil(math.log(4 * 16) / gap)


def test_worst_start_dominates():
    g = SkeletonGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    c = build_chain(g)
    worst = worst_tv_trajectory(c, 30)
    for s in range(5):
        assert np.all(tv_trajectory(c, s, 30) <= worst + 1e-15)


def test_cap_exceeded_carries_trajectory():
    g = SkeletonGraph.from_edges(30, [(i, i + 1) for i in range(29)])
    with pytest.raises(CapExceededError) as err:
        mixing_time(build_chain(g), 0.01, tmax=5)
    assert len(err.value.trajectory) == 6


def test_chain_errors():
    with pytest.raises(InvalidArgumentError):
        build_chain(SkeletonGraph.from_edges(3, [(0, 1)]))
    with pytest.raises(InvalidArgumentError):
        build_chain(EDGE, Fraction(1, 3))
    with pytest.raises(InvalidArgumentError):
        build_chain(EDGE, 1)
    with pytest.raises(ResourceLimitError):
        tv_trajectory(build_chain(EDGE), 0, 10**6)
    with pytest.raises(InvalidArgumentError):
        mixing_time(build_chain(EDGE), 1.5)


def test_empirical_tv_tracks_exact():
    c = build_chain(hypercube_skeleton(3))
    exact = tv_trajectory(c, 0, 12)[12]
    emp = empirical_tv(c, 0, 12, walkers=4000, seed=1)
    assert abs(emp - exact) < 0.06  # sampling noise ~ sqrt(8/4000)
    assert emp == empirical_tv(c, 0, 12, walkers=4000, seed=1)

from fractions import Fraction
from itertools import combinations
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_expansion, simplicial_order_vertex_expansion
from polyexpand.bitgeom import PointSet, SkeletonGraph, hypercube_skeleton
from polyexpand.errors import InvalidArgumentError, ResourceLimitError, UndefinedExpansionError
from polyexpand.expansion import (
    cheeger_bounds,
    edge_boundary,
    edge_expansion_exact,
    fiedler_value,
    harper_boundary,
    harper_vertex_bound,
    vertex_boundary,
    vertex_expansion_exact,
)
from polyexpand.hullgraph import extract_skeleton


def single_edge():
    return SkeletonGraph.from_edges(2, [(0, 1)])


def cycle(n):
    return SkeletonGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


@st.composite
def graphs(draw, lo=2, hi=12):
    n = draw(st.integers(lo, hi))
    pairs = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return SkeletonGraph.from_edges(n, edges)


def test_square_edge_expansion():
    r = edge_expansion_exact(hypercube_skeleton(2))
    assert r.value == 1 and r.cut_size == 2
    a, b = r.witness
    assert bin(int(a) ^ int(b)).count("1") == 1  # a facet of the square


def test_single_edge():
    assert edge_expansion_exact(single_edge()).value == 1
    assert vertex_expansion_exact(single_edge()).value == 1


def test_triangle_skeleton():
    g = extract_skeleton(PointSet.from_strings(["000", "001", "010"]))
    assert g.num_edges == 3
    assert edge_expansion_exact(g).value == 2
    assert vertex_expansion_exact(g).value == 2


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cube_edge_expansion_is_one(k):
    assert edge_expansion_exact(hypercube_skeleton(k)).value == 1


def test_cube3_vertex_expansion_witness():
    g = hypercube_skeleton(3)
    r = vertex_expansion_exact(g)
    assert r.value == Fraction(3, 4)
    assert sorted(g.label_strings()[i] for i in r.witness) == ["000", "001", "010", "100"]
    assert vertex_expansion_exact(hypercube_skeleton(2)).value == 1


def test_disconnected_graph_has_zero_edge_expansion():
    g = SkeletonGraph.from_edges(4, [(0, 1), (2, 3)])
    r = edge_expansion_exact(g)
    assert r.value == 0 and r.witness == (0, 1)


def test_expansion_errors():
    with pytest.raises(UndefinedExpansionError):
        edge_expansion_exact(SkeletonGraph.from_edges(1, []))
    with pytest.raises(UndefinedExpansionError):
        vertex_expansion_exact(SkeletonGraph.from_edges(1, []))
    with pytest.raises(ResourceLimitError):
        edge_expansion_exact(cycle(25))
    assert edge_expansion_exact(cycle(25), allow_large=True).value == Fraction(2, 12)


@given(graphs())
def test_matches_naive_enumeration(g):
    edges = list(g.edges())
    for kind, fn in (("edge", edge_expansion_exact), ("vertex", vertex_expansion_exact)):
        r = fn(g)
        value, witness = naive_expansion(g.n, edges, kind)
        assert r.value == value
        assert r.witness == witness


@given(graphs(hi=16))
def test_witness_reproduces_value(g):
    e = edge_expansion_exact(g)
    v = vertex_expansion_exact(g)
    for r, boundary in ((e, edge_boundary), (v, vertex_boundary)):
        assert 1 <= len(r.witness) <= g.n // 2
        assert r.cut_size == boundary(g, r.witness)
        assert r.value == Fraction(r.cut_size, len(r.witness))
    assert v.value <= e.value


def test_random_graph_speed_24_vertices():
    rng = np.random.default_rng(0)
    edges = [(i, j) for i, j in combinations(range(24), 2) if rng.random() < 0.3]
    g = SkeletonGraph.from_edges(24, edges)
    e = edge_expansion_exact(g)
    assert e.cut_size == edge_boundary(g, e.witness)


def test_fiedler_examples():
    assert fiedler_value(single_edge()) == pytest.approx(2, abs=1e-9)
    assert fiedler_value(cycle(4)) == pytest.approx(2, abs=1e-9)
    for k in range(1, 9):
        assert fiedler_value(hypercube_skeleton(k)) == pytest.approx(2, abs=1e-9)
    assert fiedler_value(SkeletonGraph.from_edges(3, [(0, 1)])) == 0.0


def test_cheeger_examples():
    sb = cheeger_bounds(cycle(4))
    assert (sb.lower, sb.upper, sb.max_degree) == (pytest.approx(1), pytest.approx(2), 2)
    sb = cheeger_bounds(single_edge())
    assert sb.lower == pytest.approx(1) and sb.upper == sb.lower
    sb = cheeger_bounds(hypercube_skeleton(3))
    assert sb.upper == pytest.approx(math.sqrt(8))
    assert not cheeger_bounds(SkeletonGraph.from_edges(3, [(0, 1)])).connected


@given(graphs(hi=14))
def test_cheeger_sandwich(g):
    sb = cheeger_bounds(g)
    h = float(edge_expansion_exact(g).value)
    assert 0 <= sb.lower <= sb.upper
    assert sb.lower - 1e-9 <= h <= sb.upper + 1e-9


@pytest.mark.parametrize("k,expected", [(1, Fraction(1)), (2, Fraction(1)), (3, Fraction(3, 4)), (4, Fraction(3, 4))])
def test_harper_small(k, expected):
    assert harper_vertex_bound(k) == expected
    assert vertex_expansion_exact(hypercube_skeleton(k)).value == expected


@pytest.mark.parametrize("k", range(1, 11))
def test_harper_matches_materialized_order(k):
    assert harper_vertex_bound(k) == simplicial_order_vertex_expansion(k)


@pytest.mark.parametrize("k", range(1, 9))
def test_harper_boundary_matches_graph(k):
    # boundary counts from binomial arithmetic against the materialized order
    g = hypercube_skeleton(k)
    order = sorted(range(1 << k), key=lambda c: (bin(c).count("1"), [i for i in range(k) if c >> i & 1]))
    labels = [int(x) for x in g.labels]
    pos = {c: i for i, c in enumerate(labels)}
    for m in range(0, (1 << k) + 1, max(1, (1 << k) // 37)):
        assert harper_boundary(k, m) == vertex_boundary(g, [pos[c] for c in order[:m]])


def test_harper_lower_bound_up_to_30():
    for k in range(1, 31):
        h = harper_vertex_bound(k)
        assert h * h * 4 * k >= 1  # h >= 1/(2 sqrt k), exactly


def test_harper_range():
    for k in (0, 31):
        with pytest.raises(InvalidArgumentError):
            harper_vertex_bound(k)


@settings(max_examples=15)
@given(st.integers(11, 14))
def test_harper_branch_and_bound_equals_scan(k):
    scan = min(Fraction(harper_boundary(k, m), m) for m in range(1, 2 ** (k - 1) + 1))
    assert harper_vertex_bound(k) == scan

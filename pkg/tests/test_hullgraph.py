import json
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import facet_oracle_edges
from polyexpand.bitgeom import BitPoint, PointSet, hypercube_skeleton
from polyexpand.errors import InvalidArgumentError, ResourceLimitError
from polyexpand.hullgraph import (
    extract_skeleton,
    is_edge,
    lp_membership,
    skeleton_from_json,
    skeleton_to_json,
)

H = Fraction(1, 2)


def P(s):
    return BitPoint.from_str(s)


def gens(*ss):
    return [P(s) for s in ss]


def test_lp_midpoint_of_two_generators():
    out = lp_membership([H, H], gens("01", "10"))
    assert out.feasible and out.coefficients == (H, H)


def test_lp_vertex_outside_triangle():
    g = gens("00", "01", "10")
    out = lp_membership([1, 1], g)
    assert not out.feasible
    a, b = out.normal, out.offset
    assert sum(a) > b  # separates (1,1)
    assert all(sum(ai * gi for ai, gi in zip(a, p.bits)) <= b for p in g)


def test_lp_tetrahedron_barycenter():
    out = lp_membership([H, H, H], gens("000", "011", "101", "110"))
    assert out.feasible
    assert out.coefficients == (Fraction(1, 4),) * 4


def test_lp_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        lp_membership([H, H, H], gens("01", "10"))
    with pytest.raises(InvalidArgumentError):
        lp_membership([H], [])


def test_lp_negative_rhs_rows():
    out = lp_membership([Fraction(-1), 0], [(0, 0), (1, 0)])
    assert not out.feasible
    assert out.verify([Fraction(-1), 0], [(0, 0), (1, 0)])


@st.composite
def membership_queries(draw):
    d = draw(st.integers(1, 4))
    g = draw(st.lists(st.tuples(*[st.integers(0, 1)] * d), min_size=1, max_size=8))
    q = draw(st.tuples(*[st.fractions(min_value=-1, max_value=2, max_denominator=4)] * d))
    return list(q), g


@given(membership_queries())
def test_lp_witness_verifies_and_is_reproducible(args):
    q, g = args
    out = lp_membership(q, g)
    assert out.verify(q, g)
    assert lp_membership(q, g) == out


@given(membership_queries())
def test_lp_agrees_with_scipy_on_feasibility(args):
    from scipy.optimize import linprog

    q, g = args
    A = np.array(g, dtype=float).T
    A_eq = np.vstack([A, np.ones(len(g))])
    b_eq = np.array([float(x) for x in q] + [1.0])
    res = linprog(np.zeros(len(g)), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert lp_membership(q, g).feasible == (res.status == 0)


def test_is_edge_square():
    sq = PointSet.full_cube(2)
    assert is_edge(sq, P("00"), P("01"))
    assert not is_edge(sq, P("00"), P("11"))


def test_is_edge_two_points():
    ps = PointSet.from_strings(["0110", "1011"])
    assert is_edge(ps, P("0110"), P("1011"))


def test_is_edge_tetrahedron_all_pairs():
    ps = PointSet.from_strings(["000", "011", "101", "110"])
    assert all(is_edge(ps, u, v) for u, v in combinations(ps.points, 2))


def test_is_edge_errors():
    sq = PointSet.full_cube(2)
    with pytest.raises(InvalidArgumentError):
        is_edge(sq, P("00"), P("00"))
    with pytest.raises(InvalidArgumentError):
        is_edge(PointSet.from_strings(["00", "01"]), P("00"), P("11"))


def test_extract_square_is_four_cycle():
    g = extract_skeleton(PointSet.full_cube(2))
    assert g.num_edges == 4 and set(g.degrees()) == {2}


def test_extract_single_point():
    g = extract_skeleton(PointSet.from_strings(["101"]))
    assert g.n == 1 and g.num_edges == 0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_extract_cube_matches_hypercube(k):
    assert extract_skeleton(PointSet.full_cube(k)) == hypercube_skeleton(k)


def test_extract_budget():
    ps = PointSet(10, range(600))
    with pytest.raises(ResourceLimitError):
        extract_skeleton(ps)


@st.composite
def small_point_sets(draw):
    d = draw(st.integers(1, 4))
    codes = draw(st.sets(st.integers(0, 2**d - 1), min_size=1, max_size=min(16, 2**d)))
    return PointSet(d, sorted(codes))


@given(small_point_sets())
def test_extract_matches_facet_oracle(ps):
    g = extract_skeleton(ps)
    assert set(int(c) for c in g.labels) == ps.code_set()
    assert g.edge_set_by_label() == facet_oracle_edges(ps.code_set(), ps.dim)
    assert g.is_connected()


@given(small_point_sets(), st.data())
def test_is_edge_symmetric(ps, data):
    if len(ps) < 2:
        return
    u, v = data.draw(st.lists(st.sampled_from(ps.points), min_size=2, max_size=2, unique=True))
    assert is_edge(ps, u, v) == is_edge(ps, v, u)


def test_skeleton_json_format():
    g = extract_skeleton(PointSet.from_strings(["00", "10", "01"]))
    doc = json.loads(skeleton_to_json(g))
    assert doc["d"] == 2
    assert doc["vertices"] == ["00", "10", "01"]
    assert doc["edges"] == sorted(doc["edges"])
    assert all(i < j for i, j in doc["edges"])
    assert skeleton_from_json(skeleton_to_json(g)) == g

"""Polytope graph of a 0/1 point set via exact-rational LP adjacency tests.

Every point of a 0/1 set is a vertex of its hull.  ``[u, v]`` is an edge iff
``v - u`` spans an extreme ray of the cone generated by ``w - u`` over the
other points.  Only points agreeing with u and v off their differing
coordinates D can contribute; after flipping coordinates so that u = 0 the
question is whether the all-ones vector of D lies in cone(W), which is the
hull-membership query ``(1/|D|) * 1 in conv{w / |w|}``.  Membership is
decided by a phase-one simplex over ``fractions.Fraction`` with Bland's rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bitgeom import BitPoint, PointSet, SkeletonGraph, code_to_str
from .errors import InternalConsistencyError, InvalidArgumentError, ResourceLimitError

PAIR_BUDGET = 512  # max |ps| for extract_skeleton

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class RationalLPOutcome:
    """Result of a convex-hull membership query.

    Feasible: ``coefficients`` are the convex weights of the generators.
    Infeasible: ``normal . g <= offset`` for every generator and
    ``normal . q > offset``.
    """

    feasible: bool
    coefficients: tuple[Fraction, ...] | None = None
    normal: tuple[Fraction, ...] | None = None
    offset: Fraction | None = None

    def verify(self, q: Sequence[Fraction], gens: Sequence[Sequence[int]]) -> bool:
        if self.feasible:
            lam = self.coefficients
            if lam is None or len(lam) != len(gens):
                return False
            if any(x < 0 for x in lam) or sum(lam) != 1:
                return False
            return all(sum(lam[j] * gens[j][i] for j in range(len(gens))) == q[i] for i in range(len(q)))
        a, b = self.normal, self.offset
        if a is None or b is None:
            return False
        if sum(ai * qi for ai, qi in zip(a, q)) <= b:
            return False
        return all(sum(ai * gi for ai, gi in zip(a, g)) <= b for g in gens)


def _phase_one(A: list[list[Fraction]], b: list[Fraction]):
    """Minimize the sum of artificials for A x = b, x >= 0 (b >= 0 assumed).

    Returns (objective, x, y) where y are the optimal duals, so that
    y.A_j <= 0 for every column and y.b == objective.
    """
    R, m = len(A), len(A[0]) if A else 0
    ncol = m + R
    T = [row[:] + [_ONE if r == i else _ZERO for r in range(R)] + [b[i]] for i, row in enumerate(A)]
    obj = [-sum((T[i][j] for i in range(R)), _ZERO) for j in range(m)] + [_ZERO] * R
    obj.append(-sum(b, _ZERO))
    basis = list(range(m, m + R))

    while True:
        enter = next((j for j in range(ncol) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(R):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise InternalConsistencyError("phase-one LP reported unbounded")
        prow = T[leave]
        piv = prow[enter]
        if piv != 1:
            prow = [x / piv for x in prow]
            T[leave] = prow
        nz = [j for j, x in enumerate(prow) if x]
        for i in range(R):
            if i != leave:
                f = T[i][enter]
                if f:
                    row = T[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        f = obj[enter]
        for j in nz:
            obj[j] -= f * prow[j]
        basis[leave] = enter

    x = [_ZERO] * m
    for i, j in enumerate(basis):
        if j < m:
            x[j] = T[i][-1]
    y = [_ONE - obj[m + i] for i in range(R)]
    return -obj[-1], x, y


def lp_membership(q: Sequence, gens: Sequence[BitPoint] | Sequence[Sequence[int]]) -> RationalLPOutcome:
    """Decide exactly whether rational point ``q`` lies in conv(gens)."""
    if not gens:
        raise InvalidArgumentError("need at least one generator")
    vecs = [tuple(map(Fraction, g.bits)) if isinstance(g, BitPoint) else tuple(map(Fraction, g)) for g in gens]
    q = tuple(Fraction(x) for x in q)
    d = len(q)
    if any(len(v) != d for v in vecs):
        raise InvalidArgumentError("dimension mismatch between query and generators")

    # rows: one per coordinate, then sum(lambda) = 1; flip rows with negative rhs
    rows = [[v[i] for v in vecs] for i in range(d)] + [[_ONE] * len(vecs)]
    rhs = list(q) + [_ONE]
    sign = []
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
            sign.append(-1)
        else:
            sign.append(1)

    value, x, y = _phase_one(rows, rhs)
    if value == 0:
        out = RationalLPOutcome(True, coefficients=tuple(x))
    else:
        y = [s * yi for s, yi in zip(sign, y)]
        out = RationalLPOutcome(False, normal=tuple(y[:d]), offset=-y[d])
    if not out.verify(q, vecs):
        raise InternalConsistencyError("LP witness failed exact re-verification")
    return out


def _popcount(x: int) -> int:
    return x.bit_count()


def _edge_test(codes: frozenset[int], u: int, v: int) -> bool:
    diff = u ^ v
    if _popcount(diff) == 1:
        return True
    # flipped generators w ^ u, supported inside diff
    face = [w ^ u for w in codes if (w ^ u) & ~diff == 0 and w != u and w != v]
    union = 0
    for w in face:
        union |= w
    if union != diff:
        return True  # some coordinate of the all-ones target is unreachable
    face_set = set(face)
    if any((w ^ diff) in face_set for w in face):
        return False  # w + (diff - w) = all-ones
    idx = [i for i in range(diff.bit_length()) if (diff >> i) & 1]
    h = len(idx)
    gens = [tuple(Fraction((w >> i) & 1, _popcount(w)) for i in idx) for w in face]
    return not lp_membership([Fraction(1, h)] * h, gens).feasible


def is_edge(ps: PointSet, u: BitPoint, v: BitPoint) -> bool:
    if u not in ps or v not in ps:
        raise InvalidArgumentError("both endpoints must belong to the point set")
    if u == v:
        raise InvalidArgumentError("endpoints must be distinct")
    return _edge_test(ps.code_set(), u.code, v.code)


def extract_skeleton(ps: PointSet, budget: int = PAIR_BUDGET) -> SkeletonGraph:
    n = len(ps)
    if n > budget:
        raise ResourceLimitError(f"{n} points exceed the pair budget of {budget}")
    codes = [int(c) for c in ps.codes]
    cs = frozenset(codes)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if _edge_test(cs, codes[i], codes[j])]
    g = SkeletonGraph.from_edges(n, edges, labels=ps.codes, dim=ps.dim)
    if not g.is_connected():
        raise InternalConsistencyError("extracted polytope graph is disconnected")
    return g


def skeleton_to_json(g: SkeletonGraph) -> str:
    doc = {"d": g.dim, "vertices": g.label_strings(), "edges": [list(e) for e in sorted(g.edges())]}
    return json.dumps(doc, indent=2) + "\n"


def skeleton_from_json(text: str) -> SkeletonGraph:
    doc = json.loads(text)
    d = int(doc["d"])
    labels = [BitPoint.from_str(s) for s in doc["vertices"]]
    if any(p.dim != d for p in labels):
        raise InvalidArgumentError("vertex bitstrings must have length d")
    return SkeletonGraph.from_edges(
        len(labels), [tuple(e) for e in doc["edges"]], labels=np.array([p.code for p in labels], dtype=np.uint64), dim=d
    )


def skeleton_labels(g: SkeletonGraph) -> list[str]:
    return [code_to_str(c, g.dim) for c in g.labels]

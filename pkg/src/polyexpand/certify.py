"""Projection certificates for edge and vertex expansion.

If projecting a 0/1 point set onto k coordinates hits every vertex of the
k-cube and no cube vertex receives more than c points, the polytope graph
has edge expansion at least 1/(2c).  The vertex analogue scales the cube's
exact vertex expansion (Harper) by the same 1/(2c).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .bitgeom import FiberMap, PointSet, project
from .errors import InvalidArgumentError, RegimeError
from .expansion import harper_vertex_bound
from .randmodels import ModelSpec


@dataclass(frozen=True)
class ProjectionCertificate:
    coords: tuple[int, ...]
    surjective: bool
    max_fiber: int
    coverage: Fraction
    edge_bound: Fraction | None
    vertex_bound: Fraction | None
    six_d_flag: bool | None = None  # set by certify_auto: max_fiber <= 6d
    fibers: FiberMap | None = None

    @property
    def k(self) -> int:
        return len(self.coords)

    def to_dict(self) -> dict:
        def frac(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"

        return {
            "k": self.k,
            "coords": list(self.coords),
            "surjective": self.surjective,
            "coverage": frac(self.coverage),
            "max_fiber": self.max_fiber,
            "edge_bound": frac(self.edge_bound),
            "vertex_bound": frac(self.vertex_bound),
            "six_d_flag": self.six_d_flag,
        }


def _largest_k(budget: Fraction) -> int:
    if budget < 2:
        raise RegimeError("few_vertices", f"budget {budget} admits no k >= 1 with k 2^k <= budget")
    k = 1
    while (k + 1) * 2 ** (k + 1) <= budget:
        k += 1
    return k


def choose_k_count(n: int, d: int) -> int:
    """Largest k with n >= k 2^k, valid for d < n < d 2^d."""
    if n <= d:
        raise RegimeError("few_vertices", f"n = {n} <= d = {d}")
    if n >= d * 2**d:
        raise RegimeError("full_cube_expected", f"n = {n} >= d 2^d = {d * 2**d}")
    return _largest_k(Fraction(n))


def choose_k_binomial(p, d: int) -> int:
    """Largest k with p 2^d >= k 2^k, valid for d / 2^d < p < 1."""
    p = Fraction(p)
    if not p < 1:
        raise InvalidArgumentError("p must be below 1")
    if p <= Fraction(d, 2**d):
        raise RegimeError("few_vertices", f"p = {p} <= d/2^d")
    return _largest_k(p * 2**d)


def fiber_histogram(fibers: FiberMap) -> dict[int, int]:
    """load -> number of cube vertices receiving exactly that many points."""
    return dict(sorted(Counter(fibers.loads.values()).items()))


def certify_projection(ps: PointSet, coords: Sequence[int]) -> ProjectionCertificate:
    _, fibers = project(ps, coords)
    k = fibers.k
    hit = len(fibers.loads)
    coverage = Fraction(hit, 2**k)
    c = fibers.max_load
    surjective = hit == 2**k
    edge = vertex = None
    if surjective:
        edge = Fraction(1, 2 * c)
        vertex = harper_vertex_bound(k) / (2 * c)
    return ProjectionCertificate(fibers.coords, surjective, c, coverage, edge, vertex, fibers=fibers)


def _certificate_key(cert: ProjectionCertificate):
    return (-cert.coverage, cert.max_fiber, cert.coords)


def search_coords(ps: PointSet, k: int, exhaustive_limit: int = 2000) -> ProjectionCertificate:
    """Best k-coordinate certificate: maximize coverage, then minimize max fiber.

    Exhaustive when C(d, k) <= exhaustive_limit, otherwise greedy: grow the
    coordinate set one index at a time keeping the best partial certificate.
    """
    d = ps.dim
    if not 1 <= k <= d:
        raise InvalidArgumentError(f"k must be in [1, {d}]")
    if comb(d, k) <= exhaustive_limit:
        return min((certify_projection(ps, c) for c in combinations(range(d), k)), key=_certificate_key)
    chosen: list[int] = []
    for _ in range(k):
        cands = [tuple(sorted(chosen + [i])) for i in range(d) if i not in chosen]
        best = min((certify_projection(ps, c) for c in cands), key=_certificate_key)
        chosen = list(best.coords)
    return certify_projection(ps, chosen)


def model_k(model: ModelSpec) -> int:
    """k from the model's choose rule; raises RegimeError in degenerate regimes."""
    if model.kind == "binomial":
        return choose_k_binomial(model.p, model.d)
    return choose_k_count(model.n, model.d)


def certify_auto(ps: PointSet, model: ModelSpec, search: bool = False) -> ProjectionCertificate:
    """Certificate on the first k coordinates, k from the model's rule.

    The uniform model uses the count rule with its n.  ``six_d_flag`` records
    whether every fiber holds at most 6d points, which makes edge_bound at
    least 1/(12d).
    """
    if ps.dim != model.d:
        raise InvalidArgumentError("point set dimension differs from the model's d")
    k = model_k(model)
    cert = search_coords(ps, k) if search else certify_projection(ps, range(k))
    flag = cert.max_fiber <= 6 * model.d
    return ProjectionCertificate(
        cert.coords, cert.surjective, cert.max_fiber, cert.coverage, cert.edge_bound, cert.vertex_bound, flag, cert.fibers
    )

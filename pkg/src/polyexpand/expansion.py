"""Exact edge/vertex expansion by cut enumeration, spectral bounds, Harper.

The enumerators walk subsets in reflected Gray-code order so each step
toggles one vertex and the cut size is updated in O(deg).  Ties between
equally good subsets go to the lexicographically smallest sorted index
tuple, so results do not depend on the enumeration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .bitgeom import SkeletonGraph
from .errors import InvalidArgumentError, ResourceLimitError, UndefinedExpansionError

ENUM_CAP = 24
ENUM_CAP_LARGE = 32
EIGEN_CAP = 4096


@dataclass(frozen=True)
class ExpansionResult:
    kind: str  # "edge" or "vertex"
    value: Fraction
    witness: tuple[int, ...]
    cut_size: int


@dataclass(frozen=True)
class SpectralBound:
    lambda2: float
    lower: float
    upper: float
    max_degree: int
    connected: bool = True


@numba.njit(cache=True, inline="always")
def _lex_less(a, b):
    # sorted-index-tuple order on bitmasks
    z = a ^ b
    if z == 0:
        return False
    low = z & (-z)
    above = ~((low << 1) - 1)
    if a & low:
        return (b & above) != 0
    return (a & above) == 0


@numba.njit(cache=True, inline="always")
def _better(c, s, m, bc, bs, bm):
    if bs == 0:
        return True
    lhs = c * bs
    rhs = bc * s
    if lhs != rhs:
        return lhs < rhs
    return _lex_less(m, bm)


@numba.njit(cache=True)
def _edge_kernel(n, indptr, indices):
    """Min |delta(S)|/|S| with vertex 0 fixed outside the toggled set."""
    cnt = np.zeros(n, dtype=np.int64)  # neighbours inside the toggled set
    deg = indptr[1:] - indptr[:-1]
    full = (np.int64(1) << n) - 1
    half = n // 2
    mask = np.int64(0)
    size = 0
    cut = 0
    bc, bs, bm = 0, 0, np.int64(0)
    total = np.int64(1) << (n - 1)
    for i in range(1, total):
        b = 0
        x = i
        while (x & 1) == 0:
            x >>= 1
            b += 1
        v = b + 1
        bit = np.int64(1) << v
        if mask & bit:
            mask ^= bit
            size -= 1
            cut -= deg[v] - 2 * cnt[v]
            for p in range(indptr[v], indptr[v + 1]):
                cnt[indices[p]] -= 1
        else:
            mask |= bit
            size += 1
            cut += deg[v] - 2 * cnt[v]
            for p in range(indptr[v], indptr[v + 1]):
                cnt[indices[p]] += 1
        if size <= half and _better(cut, size, mask, bc, bs, bm):
            bc, bs, bm = cut, size, mask
        other = n - size
        if other <= half and _better(cut, other, full ^ mask, bc, bs, bm):
            bc, bs, bm = cut, other, full ^ mask
    return bc, bs, bm


@numba.njit(cache=True)
def _vertex_kernel(n, indptr, indices):
    """Min |N(S)|/|S| over all S with 1 <= |S| <= n/2."""
    cnt = np.zeros(n, dtype=np.int64)
    inside = np.zeros(n, dtype=np.bool_)
    half = n // 2
    mask = np.int64(0)
    size = 0
    nb = 0  # outside vertices with a neighbour in S
    bc, bs, bm = 0, 0, np.int64(0)
    total = np.int64(1) << n
    for i in range(1, total):
        v = 0
        x = i
        while (x & 1) == 0:
            x >>= 1
            v += 1
        bit = np.int64(1) << v
        if inside[v]:
            inside[v] = False
            mask ^= bit
            size -= 1
            for p in range(indptr[v], indptr[v + 1]):
                u = indices[p]
                cnt[u] -= 1
                if cnt[u] == 0 and not inside[u]:
                    nb -= 1
            if cnt[v] > 0:
                nb += 1
        else:
            if cnt[v] > 0:
                nb -= 1
            inside[v] = True
            mask |= bit
            size += 1
            for p in range(indptr[v], indptr[v + 1]):
                u = indices[p]
                cnt[u] += 1
                if cnt[u] == 1 and not inside[u]:
                    nb += 1
        if size <= half and _better(nb, size, mask, bc, bs, bm):
            bc, bs, bm = nb, size, mask
    return bc, bs, bm


def _check_enumerable(g: SkeletonGraph, allow_large: bool) -> None:
    cap = ENUM_CAP_LARGE if allow_large else ENUM_CAP
    if g.n <= 1:
        raise UndefinedExpansionError("expansion is undefined for graphs with fewer than two vertices")
    if g.n > cap:
        raise ResourceLimitError(f"{g.n} vertices exceed the enumeration cap of {cap}")


def _result(kind: str, cut: int, size: int, mask: int) -> ExpansionResult:
    witness = tuple(i for i in range(int(mask).bit_length()) if (int(mask) >> i) & 1)
    assert len(witness) == size
    return ExpansionResult(kind, Fraction(int(cut), int(size)), witness, int(cut))


def edge_expansion_exact(g: SkeletonGraph, allow_large: bool = False) -> ExpansionResult:
    _check_enumerable(g, allow_large)
    cut, size, mask = _edge_kernel(g.n, g.indptr.astype(np.int64), g.indices.astype(np.int64))
    return _result("edge", cut, size, mask)


def vertex_expansion_exact(g: SkeletonGraph, allow_large: bool = False) -> ExpansionResult:
    _check_enumerable(g, allow_large)
    cut, size, mask = _vertex_kernel(g.n, g.indptr.astype(np.int64), g.indices.astype(np.int64))
    return _result("vertex", cut, size, mask)


def edge_boundary(g: SkeletonGraph, subset) -> int:
    s = set(int(i) for i in subset)
    return sum(1 for i in s for j in g.neighbors(i) if int(j) not in s)


def vertex_boundary(g: SkeletonGraph, subset) -> int:
    s = set(int(i) for i in subset)
    return len({int(j) for i in s for j in g.neighbors(i)} - s)


def laplacian(g: SkeletonGraph) -> np.ndarray:
    a = g.adjacency_matrix()
    return np.diag(a.sum(axis=1)) - a


def fiedler_value(g: SkeletonGraph) -> float:
    """Second-smallest Laplacian eigenvalue; exactly 0.0 for disconnected graphs."""
    if g.n > EIGEN_CAP:
        raise ResourceLimitError(f"{g.n} vertices exceed the dense eigensolver cap of {EIGEN_CAP}")
    if g.n < 2 or not g.is_connected():
        return 0.0
    ev = np.linalg.eigvalsh(laplacian(g))
    return float(max(ev[1], 0.0))


def cheeger_bounds(g: SkeletonGraph) -> SpectralBound:
    """lambda2/2 <= edge expansion <= sqrt(lambda2 (2 Delta - lambda2)).

    The upper formula collapses when lambda2 = 2 Delta (a single edge), so the
    reported upper end is max(lower, formula).
    """
    lam = fiedler_value(g)
    delta = g.max_degree()
    lower = lam / 2
    upper = max(lower, math.sqrt(max(lam * (2 * delta - lam), 0.0)))
    return SpectralBound(lam, lower, upper, delta, connected=g.is_connected())


# --- Harper: exact vertex expansion of the k-cube --------------------------
#
# Initial segments of the simplicial order (by weight, then lexicographic by
# smallest differing element) minimise the vertex boundary.  A segment of
# size m is the Hamming ball B(r) plus the first j sets of level s = r + 1,
# and its boundary is (C(k, s) - j) + |upper shadow of those j sets|.


def _shadow_prefix(k: int, s: int, j: int) -> int:
    """|upper shadow| of the first j s-subsets of a k-set in lex order.

    Lex order lists the sets containing the first element before the rest;
    every (s+1)-set containing it is in the shadow once j passes that block.
    """
    total = 0
    while j and k:
        if s == 0:
            return total + k
        with_first = math.comb(k - 1, s - 1)
        if j <= with_first:
            s -= 1
        else:
            total += math.comb(k - 1, s)
            j -= with_first
        k -= 1
    return total


def harper_boundary(k: int, m: int) -> int:
    """Vertex boundary of the first m points of the simplicial order on {0,1}^k."""
    if not 0 <= m <= 1 << k:
        raise InvalidArgumentError(f"m must be in [0, 2^{k}]")
    if m == 0:
        return 0
    s, ball = 0, 0
    while s <= k and ball + math.comb(k, s) <= m:
        ball += math.comb(k, s)
        s += 1
    if s > k:
        return 0
    j = m - ball
    return math.comb(k, s) - j + _shadow_prefix(k, s, j)


def harper_vertex_bound(k: int) -> Fraction:
    """Exact vertex expansion of the k-cube: min of boundary(m)/m, 1 <= m <= 2^(k-1)."""
    if not 1 <= k <= 30:
        raise InvalidArgumentError(f"k must be in [1, 30], got {k}")
    limit = 1 << (k - 1)
    best = Fraction(harper_boundary(k, limit), limit)
    ball, s = 0, 0
    while ball < limit:
        level = math.comb(k, s)
        best = _level_min(k, s, ball, min(level, limit - ball), best)
        ball += level
        s += 1
    return best


def _level_min(k: int, s: int, ball: int, jmax: int, best: Fraction) -> Fraction:
    """Branch and bound over lex blocks of level s (segments ball + j, 1 <= j <= jmax).

    Adding the j-th set x changes the boundary by k - max(x) - 1 >= -1, and
    only sets with max(x) = k reach -1; that bounds every block from below.
    """
    base = math.comb(k, s)
    # block: sets fixing elements < t, choosing r more from t..k; first index j0
    stack = [(0, base, 1, s)]
    while stack:
        j0, length, t, r = stack.pop()
        hi = min(length, jmax - j0)
        if hi <= 0:
            continue
        num0 = base - j0 + _shadow_prefix(k, s, j0)
        free = k - t + 1
        drop = min(math.comb(free - 1, r - 1) if r >= 1 else 0, hi)
        if num0 - drop > 0 and Fraction(num0 - drop, ball + j0 + hi) >= best:
            continue
        if hi <= 64 or r == 0:
            num = num0
            for j in range(j0 + 1, j0 + hi + 1):
                num = base - j + _shadow_prefix(k, s, j)
                if num * best.denominator < best.numerator * (ball + j):
                    best = Fraction(num, ball + j)
            continue
        with_t = math.comb(free - 1, r - 1)
        stack.append((j0 + with_t, math.comb(free - 1, r), t + 1, r))
        stack.append((j0, with_t, t + 1, r - 1))
    return best

"""0/1 points, point sets, coordinate projections and the cube skeleton.

A point of {0,1}^d is packed into one unsigned 64-bit word: bit ``i`` of the
code is coordinate ``i``.  In the text format coordinate ``i`` is character
``i`` of the bitstring, so ``"011"`` has code ``0b110 == 6``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

MAX_DIM = 64
HYPERCUBE_CAP = 20


def _check_dim(dim: int) -> None:
    if not 1 <= dim <= MAX_DIM:
        raise InvalidArgumentError(f"dimension must be in [1, {MAX_DIM}], got {dim}")


@dataclass(frozen=True, order=True)
class BitPoint:
    code: int
    dim: int

    def __post_init__(self):
        _check_dim(self.dim)
        if not 0 <= self.code < (1 << self.dim):
            raise InvalidArgumentError(f"code {self.code} does not fit in {self.dim} bits")

    @classmethod
    def from_str(cls, s: str) -> "BitPoint":
        s = s.strip()
        if not s or any(ch not in "01" for ch in s):
            raise InvalidArgumentError(f"not a bitstring: {s!r}")
        code = 0
        for i, ch in enumerate(s):
            if ch == "1":
                code |= 1 << i
        return cls(code, len(s))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitPoint":
        if any(b not in (0, 1) for b in bits):
            raise InvalidArgumentError(f"entries must be 0 or 1: {bits!r}")
        return cls(sum(int(b) << i for i, b in enumerate(bits)), len(bits))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.code >> i) & 1 for i in range(self.dim))

    def __str__(self) -> str:
        return code_to_str(self.code, self.dim)


def code_to_str(code: int, dim: int) -> str:
    return "".join("1" if (int(code) >> i) & 1 else "0" for i in range(dim))


def hamming_distance(u: BitPoint, v: BitPoint) -> int:
    if u.dim != v.dim:
        raise InvalidArgumentError(f"dimension mismatch: {u.dim} vs {v.dim}")
    return (u.code ^ v.code).bit_count()


_TABLE_SLOTS = 1 << 16  # direct-address dedup table: at most max(this, 8n) slots


def _first_occurrences(arr: np.ndarray, dim: int) -> np.ndarray:
    """Sorted positions of the first occurrence of each distinct code."""
    n = arr.size
    if dim < 63 and n > 64 and (1 << dim) <= max(_TABLE_SLOTS, 8 * n):
        first = np.full(1 << dim, n, dtype=np.int64)
        np.minimum.at(first, arr.astype(np.int64), np.arange(n, dtype=np.int64))
        return np.sort(first[first < n])
    _, first = np.unique(arr, return_index=True)
    return np.sort(first)


class PointSet:
    """Duplicate-free set of points of {0,1}^dim, kept in first-occurrence order.

    Equality is set equality; ``codes`` exposes the packed words in order.
    """

    __slots__ = ("dim", "codes", "_index")

    def __init__(self, dim: int, codes: Iterable[int] | np.ndarray, *, strict: bool = False):
        _check_dim(dim)
        arr = np.asarray(codes if isinstance(codes, np.ndarray) else list(codes), dtype=np.uint64)
        arr = arr.reshape(-1)
        if arr.size == 0:
            raise InvalidArgumentError("a point set needs at least one point")
        if dim < 64 and int(arr.max()) >> dim:
            raise InvalidArgumentError(f"code out of range for dimension {dim}")
        first = _first_occurrences(arr, dim)
        if first.size != arr.size:
            if strict:
                raise InvalidArgumentError("duplicate points")
            arr = arr[first]
        arr.setflags(write=False)
        self.dim = dim
        self.codes = arr
        self._index = None

    @classmethod
    def from_points(cls, points: Iterable[BitPoint], *, strict: bool = False) -> "PointSet":
        pts = list(points)
        if not pts:
            raise InvalidArgumentError("a point set needs at least one point")
        dims = {p.dim for p in pts}
        if len(dims) != 1:
            raise InvalidArgumentError(f"mixed dimensions {sorted(dims)}")
        return cls(dims.pop(), [p.code for p in pts], strict=strict)

    @classmethod
    def from_strings(cls, strings: Iterable[str], *, strict: bool = False) -> "PointSet":
        return cls.from_points((BitPoint.from_str(s) for s in strings), strict=strict)

    @classmethod
    def full_cube(cls, dim: int) -> "PointSet":
        if dim > 24:
            raise ResourceLimitError(f"refusing to materialize 2^{dim} points")
        return cls(dim, np.arange(1 << dim, dtype=np.uint64))

    def __len__(self) -> int:
        return int(self.codes.size)

    def __iter__(self):
        for c in self.codes:
            yield BitPoint(int(c), self.dim)

    @property
    def points(self) -> tuple[BitPoint, ...]:
        return tuple(self)

    def index_of(self, p: BitPoint | int) -> int:
        """Position of a point in ``codes``; raises KeyError if absent."""
        if self._index is None:
            self._index = {int(c): i for i, c in enumerate(self.codes)}
        code = p.code if isinstance(p, BitPoint) else int(p)
        if isinstance(p, BitPoint) and p.dim != self.dim:
            raise KeyError(p)
        return self._index[code]

    def __contains__(self, p) -> bool:
        try:
            self.index_of(p)
        except KeyError:
            return False
        return True

    def code_set(self) -> frozenset[int]:
        return frozenset(int(c) for c in self.codes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(np.sort(self.codes), np.sort(other.codes))

    def __hash__(self):
        return hash((self.dim, self.code_set()))

    def __repr__(self) -> str:
        shown = ", ".join(code_to_str(c, self.dim) for c in self.codes[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"PointSet(dim={self.dim}, n={len(self)}, [{shown}{more}])"

    def strings(self) -> list[str]:
        return [code_to_str(c, self.dim) for c in self.codes]


def format_point_set(ps: PointSet) -> str:
    lines = [f"{ps.dim} {len(ps)}"]
    lines.extend(ps.strings())
    return "\n".join(lines) + "\n"


def parse_point_set(text: str) -> PointSet:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise InvalidArgumentError("empty point-set file")
    header = rows[0].split()
    if len(header) != 2:
        raise InvalidArgumentError(f"bad header line {rows[0]!r}, expected 'd n'")
    d, n = int(header[0]), int(header[1])
    body = rows[1:]
    if len(body) != n:
        raise InvalidArgumentError(f"header announces {n} points, found {len(body)}")
    if any(len(s) != d for s in body):
        raise InvalidArgumentError(f"every bitstring must have length {d}")
    return PointSet.from_strings(body, strict=True)


def read_point_set(path) -> PointSet:
    with open(path) as fh:
        return parse_point_set(fh.read())


def write_point_set(ps: PointSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_point_set(ps))


@dataclass(frozen=True)
class FiberMap:
    """Loads of a coordinate projection: image code -> number of source points."""

    coords: tuple[int, ...]
    loads: dict[int, int] = field(hash=False)

    @property
    def k(self) -> int:
        return len(self.coords)

    @property
    def total(self) -> int:
        return sum(self.loads.values())

    @property
    def max_load(self) -> int:
        return max(self.loads.values())


def _check_coords(coords: Sequence[int], dim: int) -> tuple[int, ...]:
    coords = tuple(int(c) for c in coords)
    if not coords:
        raise InvalidArgumentError("coordinate list is empty")
    if any(b <= a for a, b in zip(coords, coords[1:])):
        raise InvalidArgumentError(f"coordinates must be strictly increasing: {coords}")
    if coords[0] < 0 or coords[-1] >= dim:
        raise InvalidArgumentError(f"coordinates {coords} out of range for dimension {dim}")
    return coords


def project_codes(codes: np.ndarray, coords: Sequence[int]) -> np.ndarray:
    """Restrict packed codes to ``coords``; output bit j is input bit coords[j]."""
    codes = np.asarray(codes, dtype=np.uint64)
    out = np.zeros(codes.shape, dtype=np.uint64)
    one = np.uint64(1)
    for j, c in enumerate(coords):
        out |= ((codes >> np.uint64(c)) & one) << np.uint64(j)
    return out


def project(ps: PointSet, coords: Sequence[int]) -> tuple[PointSet, FiberMap]:
    coords = _check_coords(coords, ps.dim)
    img = project_codes(ps.codes, coords)
    keys, counts = np.unique(img, return_counts=True)
    loads = {int(k): int(c) for k, c in zip(keys, counts)}
    return PointSet(len(coords), img), FiberMap(coords, loads)


@dataclass(frozen=True, eq=False)
class SkeletonGraph:
    """Graph of a polytope: labelled vertices with CSR adjacency (sorted rows)."""

    dim: int
    labels: np.ndarray  # uint64 codes, vertex i is labels[i]
    indptr: np.ndarray  # int64, length n + 1
    indices: np.ndarray  # int64 neighbour lists

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None, dim: int | None = None):
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidArgumentError(f"self-loop at {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidArgumentError(f"edge ({i}, {j}) out of range")
            nbrs[i].add(j)
            nbrs[j].add(i)
        if labels is None:
            labels = np.arange(n, dtype=np.uint64)
            dim = dim or max(1, (n - 1).bit_length())
        labels = np.asarray(labels, dtype=np.uint64)
        if labels.size != n:
            raise InvalidArgumentError("labels length differs from vertex count")
        if np.unique(labels).size != n:
            raise InvalidArgumentError("labels must be pairwise distinct")
        if dim is None:
            raise InvalidArgumentError("dim is required when labels are given")
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(s) for s in nbrs])
        indices = np.fromiter((j for s in nbrs for j in sorted(s)), dtype=np.int64, count=int(indptr[-1]))
        return cls(dim, labels, indptr, indices)

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def num_edges(self) -> int:
        return int(self.indices.size) // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            out.extend((i, int(j)) for j in self.neighbors(i) if j > i)
        return out

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        k = np.searchsorted(row, j)
        return bool(k < row.size and row[k] == j)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in self.neighbors(i):
                if not seen[j]:
                    seen[j] = True
                    queue.append(int(j))
        return bool(seen.all())

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), self.degrees())
        a[rows, self.indices] = 1.0
        return a

    def label_strings(self) -> list[str]:
        return [code_to_str(c, self.dim) for c in self.labels]

    def edge_set_by_label(self) -> set[frozenset[int]]:
        return {frozenset((int(self.labels[i]), int(self.labels[j]))) for i, j in self.edges()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkeletonGraph):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )


def hypercube_skeleton(k: int, cap: int = HYPERCUBE_CAP) -> SkeletonGraph:
    if k < 1:
        raise InvalidArgumentError(f"k must be positive, got {k}")
    if k > cap:
        raise ResourceLimitError(f"hypercube of dimension {k} exceeds cap {cap}")
    n = 1 << k
    labels = np.arange(n, dtype=np.uint64)
    flips = (np.int64(1) << np.arange(k, dtype=np.int64))
    nbrs = np.arange(n, dtype=np.int64)[:, None] ^ flips[None, :]
    nbrs.sort(axis=1)
    indptr = np.arange(0, n * k + 1, k, dtype=np.int64)
    return SkeletonGraph(k, labels, indptr, nbrs.reshape(-1))

"""Seeded samplers for the balls-into-bins, binomial and uniform 0/1 models.

Every sampler builds its own ``numpy.random.Generator`` on the counter-based
Philox bit generator, keyed by ``SeedSequence(seed)``; no state is shared
between calls.  Per-trial seeds come from :func:`trial_seed`, which hashes
(master seed, cell, trial) with ``SeedSequence`` spawn keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitgeom import MAX_DIM, PointSet
from .errors import InvalidArgumentError

KINDS = ("balls_into_bins", "binomial", "uniform")
_ALIASES = {"bins": "balls_into_bins", "balls_into_bins": "balls_into_bins", "binomial": "binomial", "uniform": "uniform"}

# binomial: per-point exact threshold draws while 2^d stays below this, geometric gaps above
EXACT_BINOMIAL_MAX_DIM = 20
# uniform: numpy's without-replacement choice below this, rejection/complement above
CHOICE_MAX_DIM = 20


def canonical_kind(kind: str) -> str:
    try:
        return _ALIASES[kind]
    except KeyError:
        raise InvalidArgumentError(f"unknown model {kind!r}; expected one of bins, binomial, uniform") from None


def parse_fraction(p) -> Fraction:
    try:
        return Fraction(p) if not isinstance(p, float) else Fraction(str(p))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgumentError(f"not a rational number: {p!r}") from exc


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    d: int
    n: int | None = None
    p: Fraction | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if self.p is not None:
            object.__setattr__(self, "p", parse_fraction(self.p))
        if not 1 <= self.d <= MAX_DIM:
            raise InvalidArgumentError(f"d must be in [1, {MAX_DIM}]")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit unsigned integer")
        if self.kind == "binomial":
            if self.p is None or self.n is not None:
                raise InvalidArgumentError("binomial model takes p and no n")
            if not 0 < self.p < 1:
                raise InvalidArgumentError("p must lie strictly between 0 and 1")
        else:
            if self.n is None or self.p is not None:
                raise InvalidArgumentError(f"{self.kind} model takes n and no p")
            if self.n < 1:
                raise InvalidArgumentError("n must be positive")
            if self.kind == "uniform" and self.n > 2**self.d:
                raise InvalidArgumentError("uniform model needs n <= 2^d")

    @property
    def budget(self) -> Fraction:
        """Expected number of draws: n, or p * 2^d for the binomial model."""
        return Fraction(self.n) if self.n is not None else self.p * 2**self.d

    def with_seed(self, seed: int) -> "ModelSpec":
        return ModelSpec(self.kind, self.d, self.n, self.p, seed)

    def to_dict(self) -> dict:
        out = {"model": self.kind, "d": self.d, "seed": self.seed}
        if self.n is not None:
            out["n"] = self.n
        else:
            out["p"] = f"{self.p.numerator}/{self.p.denominator}"
        return out


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=tuple(stream))))


def trial_seed(master: int, cell: int, trial: int) -> int:
    state = np.random.SeedSequence(int(master), spawn_key=(int(cell), int(trial))).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def _uniform_codes(rng: np.random.Generator, d: int, size: int) -> np.ndarray:
    return rng.integers(0, (1 << d) - 1, size=size, dtype=np.uint64, endpoint=True)


def sample_balls_into_bins(d: int, n: int, seed: int) -> tuple[np.ndarray, PointSet]:
    """n i.i.d. uniform draws (repetition allowed) and the set of distinct draws."""
    ModelSpec("balls_into_bins", d, n=n, seed=seed)
    raw = _uniform_codes(make_rng(seed), d, n)
    return raw, PointSet(d, raw)


def sample_binomial(d: int, p, seed: int) -> PointSet | None:
    """Include each cube vertex independently with probability p.

    Returns ``None`` for an empty sample; callers decide whether to resample.
    For 2^d <= 2^EXACT_BINOMIAL_MAX_DIM (and a denominator below 2^63) each
    vertex draws an integer in [0, den) and is kept iff it is below num, which
    realises p exactly.  Larger cubes walk the included vertices by geometric
    gaps with success probability float(p).
    """
    p = parse_fraction(p)
    ModelSpec("binomial", d, p=p, seed=seed)
    if d > 62:
        raise InvalidArgumentError("binomial sampling supports d <= 62")
    rng = make_rng(seed)
    if d <= EXACT_BINOMIAL_MAX_DIM and p.denominator < 2**63:
        draws = rng.integers(0, p.denominator, size=1 << d, dtype=np.int64)
        codes = np.flatnonzero(draws < p.numerator).astype(np.uint64)
    else:
        total = 1 << d
        pf = float(p)
        chunks, pos = [], -1
        batch = max(16, int(pf * min(total, 1 << 24) * 1.1) + 16)
        while True:
            gaps = rng.geometric(pf, size=batch).astype(np.int64)
            steps = np.cumsum(gaps) + pos
            keep = steps[steps < total]
            chunks.append(keep)
            if keep.size < steps.size:
                break
            pos = int(steps[-1])
        codes = np.concatenate(chunks).astype(np.uint64) if chunks else np.zeros(0, dtype=np.uint64)
    if codes.size == 0:
        return None
    return PointSet(d, codes)


def _rejection_distinct(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    seen: dict[int, None] = {}
    while len(seen) < n:
        for c in _uniform_codes(rng, d, 2 * (n - len(seen)) + 8):
            seen.setdefault(int(c))
            if len(seen) == n:
                break
    return np.fromiter(seen, dtype=np.uint64, count=n)


def sample_uniform(d: int, n: int, seed: int) -> PointSet:
    """A uniformly random n-element subset of {0,1}^d."""
    ModelSpec("uniform", d, n=n, seed=seed)
    rng = make_rng(seed)
    total = 1 << d
    if d <= CHOICE_MAX_DIM:
        codes = rng.choice(total, size=n, replace=False).astype(np.uint64)
    elif 2 * n <= total:
        codes = _rejection_distinct(rng, d, n)
    else:
        drop = _rejection_distinct(rng, d, total - n) if n < total else np.zeros(0, dtype=np.uint64)
        mask = np.ones(total, dtype=bool)
        mask[drop.astype(np.int64)] = False
        codes = np.flatnonzero(mask).astype(np.uint64)
    return PointSet(d, codes)


def sample(spec: ModelSpec) -> tuple[PointSet | None, np.ndarray | None]:
    """Draw from ``spec``; returns (point set or None if empty, raw balls or None)."""
    if spec.kind == "balls_into_bins":
        raw, ps = sample_balls_into_bins(spec.d, spec.n, spec.seed)
        return ps, raw
    if spec.kind == "binomial":
        return sample_binomial(spec.d, spec.p, spec.seed), None
    return sample_uniform(spec.d, spec.n, spec.seed), None

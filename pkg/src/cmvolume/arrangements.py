"""Torus fixed points of (P^n)^m and their weight statistics.

A fixed point is a word ``f`` in ``{1, ..., n+1}^m``: the i-th point sits at
the ``f[i]``-th coordinate vertex.  Everything here is pure and exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice, product
from math import lcm
from typing import Iterator, Sequence

from .exactmath import format_rational, parse_rational

__all__ = [
    "VolumeError",
    "WeightError",
    "NonGenericError",
    "StabilityClassError",
    "StabilityClass",
    "Chamber",
    "WeightVector",
    "FixedPointStats",
    "parse_weights",
    "validate_weights",
    "require_log_fano",
    "require_generic",
    "enumerate_fixed_points",
    "count_fixed_points",
    "stats",
    "classify",
    "wall_check",
    "integer_weights",
    "split_tables",
    "integer_classifier",
]


class VolumeError(Exception):
    """Base class for errors raised by the volume engine."""


class WeightError(VolumeError, ValueError):
    """Weight vector outside the admissible range."""


class NonGenericError(VolumeError):
    """Weights lie on a wall; ``points`` lists offending fixed points."""

    def __init__(self, message: str, points: Sequence[tuple[int, ...]] = ()):
        super().__init__(message)
        self.points = list(points)


class StabilityClassError(VolumeError):
    """Weights are Calabi-Yau or general type where log Fano is required."""

    def __init__(self, message: str, stability: "StabilityClass"):
        super().__init__(message)
        self.stability = stability


class StabilityClass(enum.Enum):
    LOG_FANO = "LogFano"
    CALABI_YAU = "CalabiYau"
    GENERAL_TYPE = "GeneralType"


class Chamber(enum.Enum):
    A = "A"
    B = "B"
    F_PLUS = "FPlus"
    OUTSIDE = "Outside"
    WALL = "Wall"


@dataclass(frozen=True)
class WeightVector:
    """Linearization ``O(d_1, ..., d_m)`` on ``(P^n)^m``."""

    n: int
    d: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 1:
            raise WeightError(f"ambient dimension must be >= 1, got {self.n}")
        object.__setattr__(self, "d", tuple(Fraction(x) for x in self.d))

    @classmethod
    def parse(cls, n: int, text: str) -> "WeightVector":
        return cls(n, parse_weights(text))

    @property
    def m(self) -> int:
        return len(self.d)

    @property
    def total(self) -> Fraction:
        return sum(self.d, Fraction(0))

    def scaled(self, t: Fraction) -> "WeightVector":
        return WeightVector(self.n, tuple(t * x for x in self.d))

    def permuted(self, perm: Sequence[int]) -> "WeightVector":
        """Weights reordered so that entry ``i`` is ``d[perm[i]]``."""
        return WeightVector(self.n, tuple(self.d[p] for p in perm))

    def __str__(self):
        return ",".join(format_rational(x) for x in self.d)


@dataclass(frozen=True)
class FixedPointStats:
    counts: tuple[int, ...]  # m_j, j = 1..n+1
    deltas: tuple[Fraction, ...]  # delta_j
    xi: tuple[Fraction, ...] | None  # shifted weights, n = 2 only
    lam: tuple[Fraction, ...]  # moment coordinates on the simple roots
    sign: int

    @property
    def n(self) -> int:
        return len(self.counts) - 1


def parse_weights(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.split(",")]
    if not parts or any(not p.strip() for p in parts):
        raise WeightError(f"malformed weight list {text!r}")
    try:
        return tuple(parse_rational(p) for p in parts)
    except ValueError as exc:
        raise WeightError(str(exc)) from None


def validate_weights(w: WeightVector) -> StabilityClass:
    """Check ``0 < d_i < 1`` and ``m >= n + 2``; classify by ``sum d`` against ``n + 1``."""
    for i, x in enumerate(w.d):
        if not 0 < x < 1:
            raise WeightError(f"weight d_{i + 1} = {format_rational(x)} is not in (0, 1)")
    if w.m < w.n + 2:
        raise WeightError(f"need m >= n + 2 weights, got m = {w.m} for n = {w.n}")
    s = w.total
    if s < w.n + 1:
        return StabilityClass.LOG_FANO
    if s == w.n + 1:
        return StabilityClass.CALABI_YAU
    return StabilityClass.GENERAL_TYPE


def require_log_fano(w: WeightVector) -> None:
    cls = validate_weights(w)
    if cls is not StabilityClass.LOG_FANO:
        raise StabilityClassError(
            f"weights are {cls.value} (sum d = {format_rational(w.total)}, n + 1 = {w.n + 1})",
            cls,
        )


def require_generic(w: WeightVector) -> None:
    bad = wall_check(w)
    if bad:
        raise NonGenericError(f"weights lie on a wall: {len(bad)} fixed point(s) degenerate", bad)


def count_fixed_points(n: int, m: int) -> int:
    return (n + 1) ** m


def enumerate_fixed_points(
    n: int, m: int, start: int = 0, stop: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Yield the fixed points of ``(P^n)^m`` in lexicographic order.

    ``start``/``stop`` select the half-open rank range ``[start, stop)`` so
    disjoint ranges can be handed to separate workers.
    """
    it = product(range(1, n + 2), repeat=m)
    if start or stop is not None:
        it = islice(it, start, stop)
    return it


def _sign_exponent(n: int, counts: Sequence[int]) -> int:
    m = sum(counts)
    return m * (n + 1) - sum(j * c for j, c in enumerate(counts, start=1))


def stats(f: Sequence[int], w: WeightVector) -> FixedPointStats:
    n = w.n
    if len(f) != w.m:
        raise ValueError(f"fixed point has length {len(f)}, weights have length {w.m}")
    counts = [0] * (n + 1)
    deltas = [Fraction(0)] * (n + 1)
    for fi, di in zip(f, w.d):
        if not 1 <= fi <= n + 1:
            raise ValueError(f"fixed point entry {fi} outside [1, {n + 1}]")
        counts[fi - 1] += 1
        deltas[fi - 1] += di
    total = sum(deltas, Fraction(0))
    # coefficient of the i-th simple root in the moment image
    lam = []
    for i in range(1, n + 1):
        head = sum(deltas[:i], Fraction(0))
        lam.append(head - Fraction(i, n + 1) * total)
    xi = None
    if n == 2:
        xi = tuple(dj - total / 3 for dj in deltas)
    sign = -1 if _sign_exponent(n, counts) % 2 else 1
    return FixedPointStats(tuple(counts), tuple(deltas), xi, tuple(lam), sign)


def classify(st: FixedPointStats) -> Chamber:
    if st.n == 1:
        gap = st.deltas[0] - st.deltas[1]
        if gap == 0:
            return Chamber.WALL
        return Chamber.F_PLUS if gap > 0 else Chamber.OUTSIDE
    if st.n == 2:
        x1, x2, x3 = st.xi
        if x1 == 0 or x2 == 0 or x3 == 0:
            return Chamber.WALL
        if x2 < 0 and x3 < 0:
            return Chamber.A
        if x1 > 0 and x2 > 0:
            return Chamber.B
        return Chamber.OUTSIDE
    raise ValueError(f"chamber classification is only defined for n in (1, 2), got n = {st.n}")


def integer_weights(w: WeightVector) -> tuple[int, list[int]]:
    """Common denominator ``L`` and integer numerators ``L * d_i``."""
    L = 1
    for x in w.d:
        L = lcm(L, x.denominator)
    return L, [x.numerator * (L // x.denominator) for x in w.d]


def half_table(n: int, weights: Sequence[int]) -> list[tuple]:
    """``(word, counts, sums)`` for every word over ``weights`` in lexicographic order."""
    out = []
    for f in product(range(1, n + 2), repeat=len(weights)):
        counts = [0] * (n + 1)
        sums = [0] * (n + 1)
        for fi, wi in zip(f, weights):
            counts[fi - 1] += 1
            sums[fi - 1] += wi
        out.append((f, tuple(counts), tuple(sums)))
    return out


def split_tables(w: WeightVector):
    """Prefix and suffix tables whose concatenations enumerate all fixed points.

    Iterating the prefix table in the outer loop and the suffix table in the
    inner loop visits fixed points in lexicographic order, and a range of
    prefix indices is a contiguous lexicographic block.
    """
    _, D = integer_weights(w)
    h = w.m // 2
    return half_table(w.n, D[:h]), half_table(w.n, D[h:])


def integer_classifier(w: WeightVector):
    """Chamber of a fixed point from its integer weight sums (units of ``1/L``)."""
    _, D = integer_weights(w)
    S = sum(D)
    if w.n == 1:

        def classify_int(sums):
            gap = sums[0] - sums[1]
            if gap == 0:
                return Chamber.WALL
            return Chamber.F_PLUS if gap > 0 else Chamber.OUTSIDE

    elif w.n == 2:

        def classify_int(sums):
            x1 = 3 * sums[0] - S
            x2 = 3 * sums[1] - S
            x3 = -x1 - x2
            if x1 == 0 or x2 == 0 or x3 == 0:
                return Chamber.WALL
            if x2 < 0 and x3 < 0:
                return Chamber.A
            if x1 > 0 and x2 > 0:
                return Chamber.B
            return Chamber.OUTSIDE

    else:
        raise ValueError(f"chamber classification is only defined for n in (1, 2), got n = {w.n}")
    return classify_int


def wall_check(w: WeightVector) -> list[tuple[int, ...]]:
    """Fixed points at which some classifying quantity vanishes exactly."""
    classify_int = integer_classifier(w)
    prefixes, suffixes = split_tables(w)
    bad = []
    for f1, _, s1 in prefixes:
        for f2, _, s2 in suffixes:
            sums = [a + b for a, b in zip(s1, s2)]
            if classify_int(sums) is Chamber.WALL:
                bad.append(f1 + f2)
    return bad

"""Seeded weight generation.

The generator is the 64-bit linear congruential generator
``state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64``
(Knuth's MMIX constants).  Bounded integers take the top 32 bits of each
state and use rejection sampling, so draws are unbiased and the stream is
reproducible in any language with 64-bit unsigned arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from .arrangements import StabilityClass, WeightVector, validate_weights, wall_check

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1
MAX_DENOMINATOR = 64


class Lcg64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK
        return self.state

    def next_u32(self) -> int:
        return self.next_u64() >> 32

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        span = hi - lo + 1
        if span <= 0 or span > 1 << 32:
            raise ValueError(f"bad range [{lo}, {hi}]")
        limit = (1 << 32) - (1 << 32) % span
        while True:
            r = self.next_u32()
            if r < limit:
                return lo + r % span

    def shuffle(self, items: list) -> list:
        """Fisher-Yates, in place; returns ``items``."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]
        return items

    def rational_in_unit(self, max_den: int = MAX_DENOMINATOR) -> Fraction:
        """``p/q`` with ``q`` uniform in ``[2, max_den]`` and ``p`` uniform in ``[1, q-1]``."""
        q = self.randint(2, max_den)
        return Fraction(self.randint(1, q - 1), q)


def random_weights(rng: Lcg64, n: int, m: int, max_tries: int = 100_000) -> WeightVector:
    """Draw weights until they are log Fano and off every wall.

    Raw draws ``r_i`` are scaled by ``t = min(1, (n+1) u / sum r)`` for a
    further draw ``u``, so ``sum d < n + 1`` holds by construction and each
    ``d_i <= r_i < 1``.  Only wall hits are rejected.
    """
    for _ in range(max_tries):
        raw = [rng.rational_in_unit() for _ in range(m)]
        t = min(Fraction(1), (n + 1) * rng.rational_in_unit() / sum(raw))
        w = WeightVector(n, tuple(t * r for r in raw))
        if validate_weights(w) is not StabilityClass.LOG_FANO:
            continue
        if wall_check(w):
            continue
        return w
    raise RuntimeError(f"no generic log Fano weights found for n = {n}, m = {m}")

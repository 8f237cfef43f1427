"""Exact rational arithmetic and the combinatorial primitives used by the volume formulas.

Rationals are plain :class:`fractions.Fraction` values.  Binomials follow the
extended convention: ``C(z, k) = z^[k] / k!`` for ``k >= 0`` and any integer
``z``, and ``0`` for ``k < 0``.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from math import comb
from math import factorial as _factorial

__all__ = [
    "Rational",
    "falling_factorial",
    "gen_binomial",
    "clipped_binomial",
    "factorial",
    "format_rational",
    "parse_rational",
    "approx",
]

Rational = Fraction


def falling_factorial(z: int, k: int) -> Fraction:
    """Return ``z (z-1) ... (z-k+1)``; the empty product is 1."""
    if k < 0:
        raise ValueError(f"falling factorial needs k >= 0, got {k}")
    out = 1
    for j in range(k):
        out *= z - j
    return Fraction(out)


@lru_cache(maxsize=65536)
def _gen_binomial_int(z: int, k: int) -> int:
    if k < 0:
        return 0
    if z >= 0:
        return comb(z, k)
    # upper negation: C(z, k) = (-1)^k C(k - z - 1, k)
    return (-1) ** k * comb(k - z - 1, k)


def gen_binomial(z: int, k: int) -> Fraction:
    """Extended binomial coefficient with integer upper argument.

    >>> gen_binomial(-3, 2)
    Fraction(6, 1)
    >>> gen_binomial(7, -1)
    Fraction(0, 1)
    """
    return Fraction(_gen_binomial_int(z, k))


def gen_binomial_int(z: int, k: int) -> int:
    """Integer-valued :func:`gen_binomial` (no Fraction wrapping)."""
    return _gen_binomial_int(z, k)


def clipped_binomial(z: int, k: int) -> int:
    """Classical binomial, zero unless ``0 <= k <= z``."""
    if k < 0 or z < 0 or k > z:
        return 0
    return comb(z, k)


def factorial(k: int) -> Fraction:
    if k < 0:
        raise ValueError(f"factorial needs k >= 0, got {k}")
    return Fraction(_factorial(k))


def format_rational(q: Fraction | int) -> str:
    """Serialize as ``"p/q"`` in lowest terms, or ``"p"`` when ``q == 1``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or an exact decimal such as ``"0.3"``.

    Decimals are converted exactly (``0.3`` is ``3/10``); exponent notation is
    accepted for the same reason.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            p, q = int(num), int(den)
        except ValueError:
            raise ValueError(f"cannot parse rational {text!r}") from None
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(p, q)
    try:
        dec = Decimal(s)
    except InvalidOperation:
        raise ValueError(f"cannot parse rational {text!r}") from None
    if not dec.is_finite():
        raise ValueError(f"non-finite value {text!r}")
    return Fraction(dec)


def approx(q: Fraction, digits: int = 12) -> str:
    """Decimal string rounded to ``digits`` significant digits (display only)."""
    if q == 0:
        return "0"
    return format(Decimal(q.numerator) / Decimal(q.denominator), f".{digits}g")

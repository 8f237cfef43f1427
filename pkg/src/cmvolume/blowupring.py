"""Intersection ring of the blow-up of a quadric along the base locus of a pencil.

Classes: ``H`` (hyperplane pullback), ``h`` (hyperplane class of the centre
``B`` pulled back to the exceptional divisor ``E``) and ``x = c_1(E)|_E``.
The normal bundle of ``B`` in ``Q_0`` has ``c_1 = 4h`` and ``c_2 = 4h^2``, so on
``E`` we have the relation ``x^2 = -4 h x - 4 h^2``.

Integration over ``E`` pushes forward to ``B``: ``x`` restricts to the
tautological ``O(-1)`` on the fibres, so ``p_*(x) = -1`` and ``p_*(1) = 0``.
``B = Q_0 . Q_1 . Q_2`` is a complete intersection of three quadrics in
``P^(n+2)``, of dimension ``n - 1`` and degree 8, hence
``int_B H^a h^b = 8`` whenever ``a + b = n - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

__all__ = [
    "RingElement",
    "BASE_DEGREE",
    "xpow_reduce",
    "xpow_reduce_direct",
    "xpow_closed",
    "mixed_power",
    "dp4_c_ring",
    "reconcile",
    "reduction_trace",
]

BASE_DEGREE = 8  # deg Q_0 . Q_1 . Q_2 = 2^3


@dataclass
class RingElement:
    """Polynomial in ``H, h, x`` with rational coefficients, keyed by exponents."""

    terms: dict = field(default_factory=dict)

    @classmethod
    def monomial(cls, H: int = 0, h: int = 0, x: int = 0, coeff=1) -> "RingElement":
        return cls({(H, h, x): Fraction(coeff)})

    def __add__(self, other: "RingElement") -> "RingElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return RingElement({k: c for k, c in out.items() if c})

    def __mul__(self, other: "RingElement") -> "RingElement":
        out: dict = {}
        for (a1, b1, c1), q1 in self.terms.items():
            for (a2, b2, c2), q2 in other.terms.items():
                k = (a1 + a2, b1 + b2, c1 + c2)
                out[k] = out.get(k, 0) + q1 * q2
        return RingElement({k: c for k, c in out.items() if c})

    def reduce(self) -> "RingElement":
        """Rewrite until every monomial has ``x``-degree at most 1."""
        terms = dict(self.terms)
        # lower the top x-degree one step at a time so like terms merge
        while True:
            top = max((c for _, _, c in terms), default=0)
            if top <= 1:
                break
            for (a, b, c) in [k for k in terms if k[2] == top]:
                q = terms.pop((a, b, c))
                # x^c = x^(c-2) * (-4 h x - 4 h^2)
                for k in ((a, b + 1, c - 1), (a, b + 2, c - 2)):
                    terms[k] = terms.get(k, 0) - 4 * q
        return RingElement({k: v for k, v in terms.items() if v})

    def coeff(self, H: int = 0, h: int = 0, x: int = 0) -> Fraction:
        return Fraction(self.terms.get((H, h, x), 0))


_X = RingElement.monomial(x=1)


def xpow_reduce(k: int) -> tuple[Fraction, Fraction]:
    """``(A_k, B_k)`` with ``x^k = A_k h^(k-1) x + B_k h^k``, by repeated multiplication by ``x``."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    p = _X
    for _ in range(k - 1):
        p = (p * _X).reduce()
    return p.coeff(h=k - 1, x=1), p.coeff(h=k)


def xpow_reduce_direct(k: int) -> tuple[Fraction, Fraction]:
    """Same coefficients by expanding ``x^k`` with binary powering and reducing once."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    result = RingElement.monomial()
    base = _X
    e = k
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    p = result.reduce()
    return p.coeff(h=k - 1, x=1), p.coeff(h=k)


def xpow_closed(k: int) -> dict:
    """Closed forms: the published pair and the one the reduction actually yields.

    Published: ``A_k = (-1)^(k-1) k 2^(k-1)``, ``B_k = (-1)^k (k-1) 2^k``.
    The reduction gives the same ``A_k`` and ``B_k = (-1)^(k-1) (k-1) 2^k``.
    """
    A = (-1) ** (k - 1) * k * 2 ** (k - 1)
    return {
        "A": Fraction(A),
        "B_published": Fraction((-1) ** k * (k - 1) * 2**k),
        "B_reduced": Fraction((-1) ** (k - 1) * (k - 1) * 2**k),
    }


def _integrate_over_E(elem: RingElement, n: int) -> Fraction:
    # push forward to B, then integrate monomials of degree n - 1
    out = Fraction(0)
    for (a, b, c), q in elem.terms.items():
        if c == 1 and a + b == n - 1:
            out += -q * BASE_DEGREE
        elif c > 1:
            raise ValueError("element must be reduced before integration")
    return out


def mixed_power(n: int, i: int) -> dict:
    """``H^(n+1-i) E^i`` on the blow-up, for ``2 <= i <= n+1``.

    ``reduction``: ``int_E H^(n+1-i) x^(i-1)`` with ``x^(i-1)`` reduced in the ring.
    ``printed``: the published general term ``(-1)^(i-1) (i-1) 2^(i+1)``.
    """
    if not 2 <= i <= n + 1:
        raise ValueError(f"need 2 <= i <= n + 1, got i = {i} for n = {n}")
    integrand = RingElement.monomial(H=n + 1 - i) * RingElement.monomial(x=i - 1)
    value = _integrate_over_E(integrand.reduce(), n)
    printed = Fraction((-1) ** (i - 1) * (i - 1) * 2 ** (i + 1))
    return {"reduction": value, "printed": printed}


def _intersection(n: int, i: int) -> Fraction:
    if i == 0:
        return Fraction(1)  # H^(n+1)
    if i == 1:
        return Fraction(0)  # H^n E, moving lemma
    return mixed_power(n, i)["reduction"]


def dp4_c_ring(n: int) -> Fraction:
    """``8(n+1)(n-1)^n - ((n+1)H - E)^(n+1)`` expanded with ring-computed intersections."""
    if n < 2:
        raise ValueError(f"need n >= 2, got n = {n}")
    top = Fraction(0)
    for i in range(n + 2):
        top += comb(n + 1, i) * (n + 1) ** (n + 1 - i) * (-1) ** i * _intersection(n, i)
    return 8 * (n + 1) * (n - 1) ** n - top


def reconcile(n: int) -> dict:
    """Side-by-side published and ring values of ``c`` and of each ``H^(n+1-i) E^i``.

    ``backsolved`` is the per-term value of ``H^(n+1-i) E^i`` that the published
    sum implicitly uses (``None`` where the published sum has no such term).
    """
    from .closedform import dp4_c_paper

    rows = []
    for i in range(2, n + 2):
        mp = mixed_power(n, i)
        back = Fraction((i - 1) * 2 ** (i + 1)) if i <= n else None
        rows.append(
            {"i": i, "printed": mp["printed"], "reduction": mp["reduction"], "backsolved": back}
        )
    c_paper = dp4_c_paper(n)
    c_ring = dp4_c_ring(n)
    return {"n": n, "cPaper": c_paper, "cRing": c_ring, "agree": c_paper == c_ring, "terms": rows}


def reduction_trace(n: int) -> dict:
    """Full audit trail for ``n``: the ``x^k`` reductions, mixed powers and ``c`` values."""
    from .exactmath import format_rational as fr

    xs = []
    for k in range(1, n + 2):
        A, B = xpow_reduce(k)
        cl = xpow_closed(k)
        xs.append(
            {
                "k": k,
                "A": fr(A),
                "B": fr(B),
                "A_published": fr(cl["A"]),
                "B_published": fr(cl["B_published"]),
            }
        )
    rec = reconcile(n)
    return {
        "n": n,
        "relation": "x^2 = -4 h x - 4 h^2",
        "baseDegree": BASE_DEGREE,
        "xpow": xs,
        "mixedPowers": [
            {
                "i": r["i"],
                "printed": fr(r["printed"]),
                "reduction": fr(r["reduction"]),
                "backsolved": None if r["backsolved"] is None else fr(r["backsolved"]),
            }
            for r in rec["terms"]
        ],
        "cPaper": fr(rec["cPaper"]),
        "cRing": fr(rec["cRing"]),
        "agree": rec["agree"],
    }

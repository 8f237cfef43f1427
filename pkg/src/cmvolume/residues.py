"""Jeffrey-Kirwan residue engine over exponential-polynomial terms.

Terms carry exact rational data.  A one-variable term is
``q * exp(mu * x) * x**p``; a two-variable term is
``q * exp(mux * x + muy * y) * x**px * y**py * (x + y)**pz``.  Residues are
taken by reading off Laurent coefficients from Cauchy products of an
exponential series and a binomial series, so no closed-form residue formula
is used anywhere in this module.

The positive residue keeps a pole only when the exponential slope left in the
variable being integrated is strictly positive; a pole with slope exactly zero
means the weights are on a wall and raises :class:`NonGenericError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator

from .arrangements import (
    NonGenericError,
    WeightVector,
    enumerate_fixed_points,
    require_generic,
    require_log_fano,
    stats,
)
from .exactmath import format_rational, gen_binomial_int

__all__ = [
    "ExpSum1",
    "ExpSum2",
    "MeromorphicDatum",
    "rank1_prefactor",
    "RANK2_PREFACTOR",
    "SU2_JK_CONSTANT",
    "SU2_LOCALIZATION_FACTOR",
    "jk_constant",
    "res_plus_1d",
    "inner_res_plus_y",
    "iterated_res_plus",
    "build_hf",
    "jk_volume_rank1",
    "jk_volume_rank1_from_hf",
    "jk_volume_rank2",
    "dp4_residue_sum",
]

# Prefactors of the two arrangement volume formulas.
RANK2_PREFACTOR = Fraction(-1, 6)


def rank1_prefactor(m: int) -> Fraction:
    return Fraction(-1, 2 * factorial(m - 3))


# C^G for SU(2) as used for points on P^1; the general sign rule in
# jk_constant gives the opposite sign for n = 1, so it is not used there.
SU2_JK_CONSTANT = Fraction(-1, 2)

# n_0 / 2 in the SU(2) localization formula for binary forms (n_0 = 1).
SU2_LOCALIZATION_FACTOR = Fraction(1, 2)


def jk_constant(n: int) -> Fraction:
    """``(-1)^(s + n_+) / |W|`` for SU(n+1) with vol(T) = 1.

    ``s = dim G = (n+1)^2 - 1``, ``n_+ = n(n+1)/2`` positive roots, ``|W| = (n+1)!``.
    Reference value only: the volume assemblies use the fixed prefactors above.
    """
    s = (n + 1) ** 2 - 1
    n_plus = n * (n + 1) // 2
    return Fraction((-1) ** (s + n_plus), factorial(n + 1))


class _ExpSum:
    """Finite sum of exponential terms keyed by (slopes, powers)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict = {}
        if terms:
            for key, q in terms.items():
                self.add(key, q)

    def add(self, key, q) -> None:
        if q == 0:
            return
        v = self.terms.get(key, 0) + q
        if v == 0:
            del self.terms[key]
        else:
            self.terms[key] = v

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        out = type(self)(self.terms)
        for key, q in other:
            out.add(key, q)
        return out

    def scale(self, c):
        return type(self)({k: c * q for k, q in self.terms.items()})

    def __eq__(self, other):
        return type(self) is type(other) and self.terms == other.terms

    def __repr__(self):
        return f"{type(self).__name__}({self.terms!r})"


class ExpSum1(_ExpSum):
    """Sum of ``q * exp(mu * x) * x**p``, keyed by ``(mu, p)``."""

    @classmethod
    def term(cls, q, mu, p: int) -> "ExpSum1":
        return cls({(Fraction(mu), p): Fraction(q)})


class ExpSum2(_ExpSum):
    """Sum of ``q * exp(mux*x + muy*y) * x**px * y**py * (x+y)**pz``.

    Keyed by ``(mux, muy, px, py, pz)``.
    """

    @classmethod
    def term(cls, q, mux, muy, px: int, py: int, pz: int) -> "ExpSum2":
        return cls({(Fraction(mux), Fraction(muy), px, py, pz): Fraction(q)})


def res_plus_1d(terms: ExpSum1) -> Fraction:
    """Positive residue at ``x = 0`` of a one-variable sum."""
    out = Fraction(0)
    for (mu, p), q in terms:
        if p >= 0:
            continue
        if mu == 0:
            raise NonGenericError(f"pole of order {-p} with zero exponential slope")
        if mu < 0:
            continue
        k = -p - 1
        out += q * mu**k / factorial(k)
    return out


def _exp_coeff(mu: Fraction, k: int) -> Fraction:
    # [t^k] exp(mu t)
    return mu**k / factorial(k)


def inner_res_plus_y(terms: ExpSum2) -> ExpSum1:
    """Positive residue in ``y`` (poles at ``y = 0`` and ``y = -x``), leaving ``x``."""
    out = ExpSum1()
    for (mux, muy, px, py, pz), q in terms:
        if py >= 0 and pz >= 0:
            continue
        if muy == 0:
            raise NonGenericError("pole in y with zero exponential slope")
        if muy < 0:
            continue
        if py < 0:
            # [y^K] exp(muy y) (x + y)^pz, binomial series in y/x
            K = -py - 1
            for l in range(K + 1):
                c = gen_binomial_int(pz, l)
                if c:
                    out.add((mux, px + pz - l), q * c * _exp_coeff(muy, K - l))
        if pz < 0:
            # u = x + y: [u^K] exp(muy u) (u - x)^py, times exp(-muy x)
            K = -pz - 1
            for l in range(K + 1):
                c = gen_binomial_int(py, l)
                if c:
                    sgn = -1 if (py - l) % 2 else 1
                    out.add((mux - muy, px + py - l), q * sgn * c * _exp_coeff(muy, K - l))
    return out


def iterated_res_plus(lam1, lam2, a: int, b: int, c: int) -> Fraction:
    """``res+_x res+_y  exp(lam1 x + lam2 y) / (x^a y^b (x+y)^c)``."""
    integrand = ExpSum2.term(1, lam1, lam2, -a, -b, -c)
    return res_plus_1d(inner_res_plus_y(integrand))


@dataclass(frozen=True)
class MeromorphicDatum:
    """Fixed-point contribution ``sign * exp(sum_i e_i alpha_i) / prod alpha_ij^k_ij``."""

    sign: int
    exp_coeffs: tuple[Fraction, ...]
    pole_orders: dict  # (i, j) with i < j  ->  m_i + m_j - 2

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "expCoeffs": [format_rational(e) for e in self.exp_coeffs],
            "poleOrders": [
                {"i": i, "j": j, "order": k} for (i, j), k in sorted(self.pole_orders.items())
            ],
        }


def build_hf(n: int, m: int, f, w: WeightVector) -> MeromorphicDatum:
    if w.n != n or w.m != m:
        raise ValueError(f"weights are for (n, m) = ({w.n}, {w.m}), not ({n}, {m})")
    st = stats(f, w)
    counts = st.counts
    deltas = st.deltas
    coeffs = []
    for i in range(1, n + 1):
        head = sum(
            (Fraction(n + 1 - i, n + 1) * deltas[k - 1] for k in range(1, i + 1)), Fraction(0)
        )
        tail = sum((Fraction(i, n + 1) * deltas[k - 1] for k in range(i + 1, n + 2)), Fraction(0))
        coeffs.append(head - tail)
    poles = {
        (i, j): counts[i - 1] + counts[j - 1] - 2
        for i in range(1, n + 2)
        for j in range(i + 1, n + 2)
    }
    exponent = m * (n + 1) - sum(j * c for j, c in enumerate(counts, start=1))
    return MeromorphicDatum(-1 if exponent % 2 else 1, tuple(coeffs), poles)


def _check_rank(w: WeightVector, n: int) -> None:
    if w.n != n:
        raise ValueError(f"expected n = {n}, got n = {w.n}")
    require_log_fano(w)
    if w.m < 4:
        raise ValueError(f"need m >= 4, got m = {w.m}")
    require_generic(w)


def jk_volume_rank1(w: WeightVector) -> Fraction:
    """Residue-sum volume for points on P^1, summed over all ``2^m`` fixed points."""
    _check_rank(w, 1)
    m = w.m
    total = Fraction(0)
    for f in enumerate_fixed_points(1, m):
        st = stats(f, w)
        slope = st.deltas[0] - st.deltas[1]
        total += st.sign * res_plus_1d(ExpSum1.term(1, slope, -(m - 2)))
    return Fraction(-1, 2) * total


def jk_volume_rank1_from_hf(w: WeightVector) -> Fraction:
    """Same volume, assembled from :func:`build_hf` data with ``n_0 = 2^(m-3)``.

    Uses the moment slope ``(delta_1 - delta_2) / 2`` on the simple root, the
    SU(2) constant ``-1/2`` and the generic stabilizer order ``2^(m-3)``.
    """
    _check_rank(w, 1)
    m = w.m
    total = Fraction(0)
    for f in enumerate_fixed_points(1, m):
        hf = build_hf(1, m, f, w)
        term = ExpSum1.term(hf.sign, hf.exp_coeffs[0], -hf.pole_orders[(1, 2)])
        total += res_plus_1d(term)
    return 2 ** (m - 3) * SU2_JK_CONSTANT * total


def jk_volume_rank2(w: WeightVector, start: int = 0, stop: int | None = None) -> Fraction:
    """Residue-sum volume for points on P^2, iterated ``res+_x res+_y`` per fixed point.

    ``start``/``stop`` restrict to a lexicographic rank range (for partial
    sums); the full volume is the sum over ``[0, 3^m)``.
    """
    _check_rank(w, 2)
    return RANK2_PREFACTOR * _rank2_partial(w, start, stop)


def _rank2_partial(w: WeightVector, start: int = 0, stop: int | None = None) -> Fraction:
    m = w.m
    total = Fraction(0)
    for f in enumerate_fixed_points(2, m, start, stop):
        hf = build_hf(2, m, f, w)
        lam1, lam2 = hf.exp_coeffs
        a = hf.pole_orders[(1, 2)]
        b = hf.pole_orders[(2, 3)]
        c = hf.pole_orders[(1, 3)]
        r = iterated_res_plus(lam1, lam2, a, b, c)
        if r:
            total += hf.sign * r
    return total


def _laurent_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, 0) + a * b
    return out


def dp4_residue_sum(m: int) -> Fraction:
    """Localization sum for ``S^m P^1 // SL(2)`` with the moment-map class.

    Each positive fixed point ``e_k`` (``0 < m - 2k <= m``) contributes the
    Laurent monomial ``(m-2k)^(m-3) x^(m-3) / (2^m k! (m-k)! x^m)``; the sum is
    multiplied by the Weyl factor ``4 x^2``, the ``x^-1`` coefficient is read
    off, and the result is scaled by ``n_0 / 2``.
    """
    if m < 4:
        raise ValueError(f"need m >= 4, got m = {m}")
    fixed_sum: dict = {}
    for k in range(m + 1):
        w = m - 2 * k
        if not 0 < w <= m:
            continue
        coeff = Fraction(w ** (m - 3), 2**m * factorial(k) * factorial(m - k))
        power = (m - 3) - m
        fixed_sum[power] = fixed_sum.get(power, 0) + coeff
    product = _laurent_mul({2: Fraction(4)}, fixed_sum)
    return SU2_LOCALIZATION_FACTOR * product.get(-1, Fraction(0))


"""Closed-form volumes and CM scaling.

Arrangement volumes are evaluated in integer arithmetic: with ``L`` the common
denominator of the weights, every weight sum is an integer multiple of ``1/L``
and every shifted weight ``xi_i`` an integer multiple of ``1/(3L)``, so the
chamber sums are integer polynomials divided by a single power of ``L`` at the
end.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any

from .arrangements import (
    Chamber,
    NonGenericError,
    VolumeError,
    WeightVector,
    enumerate_fixed_points,
    integer_classifier,
    integer_weights,
    require_log_fano,
    split_tables,
    stats,
    validate_weights,
)
from .exactmath import approx, format_rational, gen_binomial, gen_binomial_int

__all__ = [
    "ConsistencyError",
    "VolumeReport",
    "DP4Input",
    "dimension",
    "cm_scale",
    "vol1_closed",
    "vol2_closed",
    "vol2_printed",
    "chamber_a_coeffs",
    "chamber_b_coeffs",
    "rank2_residue_closed",
    "dp4_sum_closed",
    "dp4_c_paper",
    "dp4_volume",
    "vol_arrangement",
]


class ConsistencyError(VolumeError):
    """Closed form and residue oracle disagree."""

    def __init__(self, closed: Fraction, oracle: Fraction, weights: WeightVector | None = None):
        super().__init__(
            f"closed form {format_rational(closed)} != residue oracle {format_rational(oracle)}"
        )
        self.closed = closed
        self.oracle = oracle
        self.weights = weights


def dimension(n: int, m: int) -> int:
    """Complex dimension of ``(P^n)^m // SL(n+1)``."""
    return n * m - (n + 1) ** 2 + 1


def cm_scale(w: WeightVector) -> Fraction:
    """Multiplier taking ``O(d)`` to the log CM line bundle: ``(n+1)(n+1 - sum d)^n``."""
    require_log_fano(w)
    return (w.n + 1) * (w.n + 1 - w.total) ** w.n


# ---------------------------------------------------------------- n = 1


def vol1_closed(w: WeightVector, workers: int = 1) -> Fraction:
    """``-1/(2(m-3)!) * sum over delta_1 > delta_2 of (-1)^m_1 (delta_1 - delta_2)^(m-3)``."""
    total, census = _scan(w, workers)
    m = w.m
    L, _ = integer_weights(w)
    return Fraction(-total, 2 * factorial(m - 3) * L ** (m - 3))


def _rank1_block(w: WeightVector, lo: int, hi: int):
    prefixes, suffixes = split_tables(w)
    classify_int = integer_classifier(w)
    k = w.m - 3
    total = 0
    census: Counter = Counter()
    walls = []
    for f1, c1, s1 in prefixes[lo:hi]:
        for f2, c2, s2 in suffixes:
            sums = (s1[0] + s2[0], s1[1] + s2[1])
            ch = classify_int(sums)
            census[ch.value] += 1
            if ch is Chamber.F_PLUS:
                term = (sums[0] - sums[1]) ** k
                total += -term if (c1[0] + c2[0]) % 2 else term
            elif ch is Chamber.WALL:
                walls.append(f1 + f2)
    return total, census, walls


# ---------------------------------------------------------------- n = 2


def chamber_a_coeffs(m: int, counts: tuple[int, int, int]) -> tuple[int, ...]:
    """Coefficients ``c_i`` of ``xi_2^i xi_3^(2m-8-i)`` for a fixed point in chamber A.

    ``c_i = C(2m-8, i) * (C(m+m_2-6-i, m_2+m_3-3) + (-1)^(b+e+i) C(-b, i-e))``
    with ``b = m_2+m_3-2`` and ``e = m+m_2-5``.  The second binomial only
    survives when ``b <= 0``; for ``b >= 1`` the two terms cancel for
    ``i >= e`` and the first one is zero there after clipping, so the sum
    reduces to ``i < e``.
    """
    _, m2, m3 = counts
    N = 2 * m - 8
    b = m2 + m3 - 2
    e = m + m2 - 5
    out = []
    for i in range(N + 1):
        w = gen_binomial_int(e - i - 1, b - 1)
        w += (-1 if (b + e + i) % 2 else 1) * gen_binomial_int(-b, i - e)
        out.append(comb(N, i) * w)
    return tuple(out)


def chamber_b_coeffs(m: int, counts: tuple[int, int, int]) -> tuple[int, ...]:
    """Coefficients ``c_i`` of ``xi_1^(2m-8-i) xi_2^i`` for a fixed point in chamber B.

    ``c_i = C(2m-8, i) * C(m+m_2-6-i, m_2+m_3-3-i)`` for ``0 <= i < m_2+m_3-2``.
    """
    _, m2, m3 = counts
    N = 2 * m - 8
    b = m2 + m3 - 2
    return tuple(
        comb(N, i) * gen_binomial_int(m + m2 - 6 - i, m2 + m3 - 3 - i) if i < b else 0
        for i in range(N + 1)
    )


def _homogeneous(coeffs: tuple[int, ...], u: int, v: int) -> int:
    # sum_i coeffs[i] * u^i * v^(N-i)
    N = len(coeffs) - 1
    vpow = [1] * (N + 1)
    for k in range(1, N + 1):
        vpow[k] = vpow[k - 1] * v
    acc = 0
    for i in range(N, -1, -1):
        acc = acc * u
        c = coeffs[i]
        if c:
            acc += c * vpow[N - i]
    return acc


def _rank2_block(w: WeightVector, lo: int, hi: int):
    prefixes, suffixes = split_tables(w)
    _, D = integer_weights(w)
    S = sum(D)
    m = w.m
    a_cache: dict = {}
    b_cache: dict = {}
    total = 0
    n_a = n_b = n_out = 0
    walls = []
    for f1, c1, s1 in prefixes[lo:hi]:
        p1, p2, p3 = c1
        q1, q2 = s1[0], s1[1]
        for f2, c2, s2 in suffixes:
            x1 = 3 * (q1 + s2[0]) - S
            x2 = 3 * (q2 + s2[1]) - S
            x3 = -x1 - x2
            if x1 == 0 or x2 == 0 or x3 == 0:
                walls.append(f1 + f2)
                continue
            if x2 < 0 and x3 < 0:
                n_a += 1
                counts = (p1 + c2[0], p2 + c2[1], p3 + c2[2])
                coeffs = a_cache.get(counts)
                if coeffs is None:
                    coeffs = a_cache[counts] = chamber_a_coeffs(m, counts)
                val = _homogeneous(coeffs, x2, x3)
            elif x1 > 0 and x2 > 0:
                n_b += 1
                counts = (p1 + c2[0], p2 + c2[1], p3 + c2[2])
                coeffs = b_cache.get(counts)
                if coeffs is None:
                    coeffs = b_cache[counts] = chamber_b_coeffs(m, counts)
                val = _homogeneous(coeffs, x2, x1)
            else:
                n_out += 1
                continue
            total += -val if counts[1] % 2 else val
    census = Counter({"A": n_a, "B": n_b, "Outside": n_out, "Wall": len(walls)})
    return total, census, walls


def _scan(w: WeightVector, workers: int = 1):
    """Chamber sum over all fixed points, split across ``workers`` processes.

    Returns the integer numerator of the chamber sum and the chamber census;
    raises :class:`NonGenericError` if any fixed point lies on a wall.
    """
    if w.n not in (1, 2):
        raise ValueError(f"closed forms exist for n in (1, 2), got n = {w.n}")
    require_log_fano(w)
    if w.m < 4:
        raise ValueError(f"need m >= 4, got m = {w.m}")
    block = _rank1_block if w.n == 1 else _rank2_block
    n_prefix = (w.n + 1) ** (w.m // 2)
    workers = max(1, min(workers, n_prefix))
    if workers == 1:
        results = [block(w, 0, n_prefix)]
    else:
        step = -(-n_prefix // workers)
        bounds = [(lo, min(lo + step, n_prefix)) for lo in range(0, n_prefix, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(block, w, lo, hi) for lo, hi in bounds]
            results = [fut.result() for fut in futures]
    total = 0
    census: Counter = Counter()
    walls: list = []
    for t, c, wl in results:
        total += t
        census.update(c)
        walls.extend(wl)
    if walls:
        raise NonGenericError(
            f"weights lie on a wall: {len(walls)} fixed point(s) degenerate", walls
        )
    census.pop("Wall", None)
    return total, dict(census)


def vol2_closed(w: WeightVector, workers: int = 1) -> Fraction:
    """Chamber-sum volume of ``(P^2)^m // SL(3)``.

    ``-1/(6(2m-8)!)`` times the sum over chamber A of
    ``(-1)^m_2 sum_i c_i xi_2^i xi_3^(2m-8-i)`` plus the sum over chamber B of
    ``(-1)^m_2 sum_i c_i xi_1^(2m-8-i) xi_2^i``; see :func:`chamber_a_coeffs`
    and :func:`chamber_b_coeffs`.
    """
    total, _ = _scan(w, workers)
    return _rank2_normalize(w, total)


def _rank2_normalize(w: WeightVector, total: int) -> Fraction:
    L, _ = integer_weights(w)
    N = 2 * w.m - 8
    return Fraction(-total, 6 * factorial(N) * (3 * L) ** N)


def vol2_printed(w: WeightVector) -> Fraction:
    """Literal transcription of the published rank-2 chamber formula.

    Generalized binomials throughout, sums over ``j in [0, 2m-8]`` and the
    B-chamber monomial ``xi_1^j xi_2^(2m-8-j)`` exactly as printed.  It does not
    agree with the residue sum in general; kept for the verification report.
    """
    require_log_fano(w)
    m = w.m
    N = 2 * m - 8
    total = Fraction(0)
    for f in enumerate_fixed_points(2, m):
        st = stats(f, w)
        m1, m2, m3 = st.counts
        x1, x2, x3 = st.xi
        if 0 in (x1, x2, x3):
            raise NonGenericError("weights lie on a wall", [f])
        sgn = -1 if m2 % 2 else 1
        if x2 < 0 and x3 < 0:
            inner = sum(
                comb(N, j) * gen_binomial(m + m2 - 6 - j, m2 + m3 - 3) * x2**j * x3 ** (N - j)
                for j in range(N + 1)
            )
        elif x1 > 0 and x2 > 0:
            inner = sum(
                comb(N, j) * gen_binomial(m + m2 - 6 - j, m1 + m2 - 3) * x1**j * x2 ** (N - j)
                for j in range(N + 1)
            )
        else:
            continue
        total += sgn * inner
    return -total / (6 * factorial(N))


def rank2_residue_closed(lam1, lam2, a: int, b: int, c: int) -> Fraction:
    """``[lam1 > lam2 > 0] R_1 + [lam2 > lam1 > 0] R_2`` for pole orders ``a, b, c``.

    With ``N = a+b+c-2`` and ``e = a+b-1``::

        R_1 = 1/N! sum_i C(N,i) (C(e-i-1, b-1) + (-1)^(b+e+i) C(-b, i-e)) (lam1-lam2)^i lam2^(N-i)
        R_2 = 1/N! sum_{i<b} C(N,i) C(a+b-2-i, b-1-i) lam1^(N-i) (lam2-lam1)^i

    Valid when ``a + b >= 1`` and ``a + c >= 1``.
    """
    lam1, lam2 = Fraction(lam1), Fraction(lam2)
    N = a + b + c - 2
    if N < 0:
        return Fraction(0)
    e = a + b - 1
    if lam1 > lam2 > 0:
        s = 0
        for i in range(N + 1):
            w = gen_binomial_int(e - i - 1, b - 1)
            w += (-1 if (b + e + i) % 2 else 1) * gen_binomial_int(-b, i - e)
            if w:
                s += comb(N, i) * w * (lam1 - lam2) ** i * lam2 ** (N - i)
        return Fraction(s) / factorial(N)
    if lam2 > lam1 > 0:
        s = sum(
            comb(N, i) * gen_binomial_int(a + b - 2 - i, b - 1 - i) * lam1 ** (N - i) * (lam2 - lam1) ** i
            for i in range(max(b, 0))
        )
        return Fraction(s) / factorial(N)
    return Fraction(0)


# ---------------------------------------------------------------- quartic del Pezzo


def dp4_sum_closed(m: int) -> Fraction:
    """``1/2^(m-1) * sum over 0 < m-2k <= m of (m-2k)^(m-3) / (k! (m-k)!)``."""
    if m < 4:
        raise ValueError(f"need m >= 4, got m = {m}")
    s = sum(
        (Fraction((m - 2 * k) ** (m - 3), factorial(k) * factorial(m - k)) for k in range(m + 1) if 0 < m - 2 * k <= m),
        Fraction(0),
    )
    return s / 2 ** (m - 1)


def dp4_c_paper(n: int) -> Fraction:
    """CM degree of the Lefschetz-pencil family, evaluated literally as published.

    ``8(n+1)(n-1)^n + sum_{i=1}^{n} (-1)^(i-1) C(n+1,i) (n+1)^(n+1-i) (i-1) 2^(i+1)``
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got n = {n}")
    c = 8 * (n + 1) * (n - 1) ** n
    for i in range(1, n + 1):
        c += (-1) ** (i - 1) * comb(n + 1, i) * (n + 1) ** (n + 1 - i) * (i - 1) * 2 ** (i + 1)
    return Fraction(c)


@dataclass
class VolumeReport:
    git_volume: Fraction
    cm_scale: Fraction
    cm_volume: Fraction
    dimension: int
    method: str
    chamber_census: dict = field(default_factory=dict)
    wall_diagnostics: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            **self.params,
            "gitVolume": format_rational(self.git_volume),
            "gitVolume_approx": approx(self.git_volume),
            "cmScale": format_rational(self.cm_scale),
            "cmVolume": format_rational(self.cm_volume),
            "cmVolume_approx": approx(self.cm_volume),
            "dimension": self.dimension,
            "method": self.method,
            "chamberCensus": dict(sorted(self.chamber_census.items())),
            "wallDiagnostics": list(self.wall_diagnostics),
            "warnings": list(self.warnings),
            **self.extra,
        }


@dataclass(frozen=True)
class DP4Input:
    """``c_mode`` is ``"paper"``, ``"ring"`` or an explicit rational value of ``c``."""

    m: int
    n: int | None = None
    c_mode: str | Fraction = "paper"

    def __post_init__(self):
        if self.m < 4:
            raise ValueError(f"need m >= 4, got m = {self.m}")
        if self.n is not None and self.m != self.n + 2:
            raise ValueError(f"m = n + 2 required, got m = {self.m}, n = {self.n}")
        if isinstance(self.c_mode, str) and self.c_mode not in ("paper", "ring"):
            raise ValueError(f"unknown c mode {self.c_mode!r}")


def dp4_volume(inp: DP4Input) -> VolumeReport:
    from .blowupring import dp4_c_ring

    m = inp.m
    n = inp.n if inp.n is not None else m - 2
    c_paper = dp4_c_paper(n)
    c_ring = dp4_c_ring(n)
    if inp.c_mode == "paper":
        c, source = c_paper, "paper"
    elif inp.c_mode == "ring":
        c, source = c_ring, "ring"
    else:
        c, source = Fraction(inp.c_mode), "explicit"
    s = dp4_sum_closed(m)
    scale = c / m
    report = VolumeReport(
        git_volume=s,
        cm_scale=scale,
        cm_volume=scale ** (m - 3) * s,
        dimension=m - 3,
        method="closed",
        params={"kind": "dp4", "m": m, "n": n},
        extra={
            "c": format_rational(c),
            "cSource": source,
            "cPaper": format_rational(c_paper),
            "cRing": format_rational(c_ring),
            "cAgree": c_paper == c_ring,
        },
    )
    if c_paper != c_ring:
        report.wall_diagnostics.append(
            f"c mismatch for n = {n}: published {format_rational(c_paper)}, "
            f"ring reduction {format_rational(c_ring)}"
        )
    if m % 2 == 0:
        report.warnings.append(
            f"m = {m} is even: semistable != stable; formula applied unchanged "
            "(the SL(2) action on S^m P^1 is weakly balanced)"
        )
    return report


def vol_arrangement(w: WeightVector, method: str = "closed", workers: int = 1) -> VolumeReport:
    """Volume report for ``(P^n)^m // SL(n+1)``, ``n in (1, 2)``.

    ``method`` is ``"closed"``, ``"residue"`` or ``"both"``; ``"both"`` raises
    :class:`ConsistencyError` unless the two values agree exactly.
    """
    from .residues import jk_volume_rank1, jk_volume_rank2

    if method not in ("closed", "residue", "both"):
        raise ValueError(f"unknown method {method!r}")
    if w.n not in (1, 2):
        raise ValueError(f"volumes are implemented for n in (1, 2), got n = {w.n}")
    stability = validate_weights(w)
    total, census = _scan(w, workers)
    if w.n == 1:
        L, _ = integer_weights(w)
        closed = Fraction(-total, 2 * factorial(w.m - 3) * L ** (w.m - 3))
    else:
        closed = _rank2_normalize(w, total)
    value = closed
    if method in ("residue", "both"):
        oracle = jk_volume_rank1(w) if w.n == 1 else jk_volume_rank2(w)
        if method == "both" and oracle != closed:
            raise ConsistencyError(closed, oracle, w)
        value = oracle
    dim = dimension(w.n, w.m)
    scale = cm_scale(w)
    return VolumeReport(
        git_volume=value,
        cm_scale=scale,
        cm_volume=scale**dim * value,
        dimension=dim,
        method=method,
        chamber_census=census,
        params={
            "kind": "arrangement",
            "n": w.n,
            "m": w.m,
            "weights": [format_rational(x) for x in w.d],
            "stability": stability.value,
        },
    )

"""Verification suites: identities, oracle equivalences, homogeneity, recursion, reconciliation.

Each suite returns a list of :class:`Check`.  A check marked ``report_only``
carries information and never fails its suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arrangements import WeightVector
from .blowupring import reconcile, xpow_closed, xpow_reduce, xpow_reduce_direct
from .closedform import (
    dimension,
    dp4_sum_closed,
    vol1_closed,
    vol2_closed,
    vol2_printed,
)
from .exactmath import format_rational, gen_binomial_int
from .residues import dp4_residue_sum, jk_volume_rank1, jk_volume_rank2
from .rng import Lcg64, random_weights

SUITES = ("identities", "arr1", "arr2", "dp4", "ring")

PINNED_RANK1 = (WeightVector(1, (Fraction(3, 10),) * 3 + (Fraction(2, 5),)), Fraction(1, 2))


@dataclass
class Check:
    name: str
    passed: bool
    count: int = 0
    detail: str = ""
    report_only: bool = False
    counterexample: dict | None = None
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "INFO" if self.report_only else ("PASS" if self.passed else "FAIL")
        text = f"{tag} {self.name} [{self.count}]"
        return f"{text} {self.detail}" if self.detail else text

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "reportOnly": self.report_only,
            "count": self.count,
            "detail": self.detail,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.data:
            out["data"] = self.data
        return out


def _first_failure(name: str, count: int, example: dict | None, detail: str = "") -> Check:
    return Check(name, example is None, count, detail, counterexample=example)


# ---------------------------------------------------------------- identities

C = gen_binomial_int


def check_upper_negation(kmax: int = 40, zmax: int = 30) -> Check:
    count, bad = 0, None
    for z in range(-zmax, zmax + 1):
        for k in range(kmax + 1):
            count += 1
            if C(z, k) != (-1) ** k * C(k - z - 1, k) and bad is None:
                bad = {"z": z, "k": k}
    return _first_failure("upper negation", count, bad)


def check_negated_upper(bound: int = 30) -> Check:
    """``C(-n, k) = (-1)^k C(n+k-1, k)``."""
    count, bad = 0, None
    for n in range(-bound, bound + 1):
        for k in range(0, bound + 1):
            count += 1
            if C(-n, k) != (-1) ** k * C(n + k - 1, k) and bad is None:
                bad = {"n": n, "k": k}
    return _first_failure("negated upper argument", count, bad)


def check_symmetric_negation(bound: int = 30) -> Check:
    """``(-1)^m C(-n-1, m) = (-1)^n C(-m-1, n)`` for ``n, m >= 0``."""
    count, bad = 0, None
    for n in range(bound + 1):
        for m in range(bound + 1):
            count += 1
            if (-1) ** m * C(-n - 1, m) != (-1) ** n * C(-m - 1, n) and bad is None:
                bad = {"n": n, "m": m}
    return _first_failure("symmetric negation", count, bad)


def _support(l: int, m: int) -> range:
    # j with C(l, m + j) != 0 for l >= 0
    return range(-m, l - m + 1)


def check_vandermonde(rng: Lcg64, trials: int = 10_000, bound: int = 30) -> Check:
    """``sum_j C(l, m+j) C(s, n+j) = C(l+s, l-m+n)`` for ``l >= 0``."""
    bad = None
    for _ in range(trials):
        l = rng.randint(0, bound)
        m, n, s = (rng.randint(-bound, bound) for _ in range(3))
        lhs = sum(C(l, m + j) * C(s, n + j) for j in _support(l, m))
        if lhs != C(l + s, l - m + n) and bad is None:
            bad = {"l": l, "m": m, "n": n, "s": s}
    return _first_failure("Vandermonde convolution", trials, bad)


def check_alternating(rng: Lcg64, trials: int = 10_000, bound: int = 30) -> Check:
    """``sum_j (-1)^j C(s+j, n) C(l, m+j) = (-1)^(l+m) C(s-m, n-l)`` for ``l >= 0``."""
    bad = None
    for _ in range(trials):
        l = rng.randint(0, bound)
        m, n, s = (rng.randint(-bound, bound) for _ in range(3))
        lhs = sum((-1) ** (j % 2) * C(s + j, n) * C(l, m + j) for j in _support(l, m))
        if lhs != (-1) ** ((l + m) % 2) * C(s - m, n - l) and bad is None:
            bad = {"l": l, "m": m, "n": n, "s": s}
    return _first_failure("alternating convolution", trials, bad)


def suite_identities(seed: int = 0, trials: int = 10_000) -> list[Check]:
    rng = Lcg64(seed)
    return [
        check_upper_negation(),
        check_negated_upper(),
        check_symmetric_negation(),
        check_vandermonde(rng, trials),
        check_alternating(rng, trials),
    ]


# ---------------------------------------------------------------- arrangements


def _wjson(w: WeightVector) -> dict:
    return {"n": w.n, "weights": [format_rational(x) for x in w.d]}


def check_oracle(n: int, trials: int, seed: int, m_lo: int, m_hi: int) -> Check:
    rng = Lcg64(seed)
    closed_fn = vol1_closed if n == 1 else vol2_closed
    oracle_fn = jk_volume_rank1 if n == 1 else jk_volume_rank2
    bad = None
    nonzero = 0
    for _ in range(trials):
        w = random_weights(rng, n, rng.randint(m_lo, m_hi))
        closed, oracle = closed_fn(w), oracle_fn(w)
        nonzero += closed != 0
        if closed != oracle and bad is None:
            bad = {**_wjson(w), "closed": format_rational(closed), "oracle": format_rational(oracle)}
    return _first_failure(
        f"closed form == residue oracle (n={n}, m in [{m_lo},{m_hi}])",
        trials,
        bad,
        f"{nonzero} non-zero volumes",
    )


def check_homogeneity_symmetry(n: int, trials: int, seed: int, m_lo: int, m_hi: int) -> list[Check]:
    rng = Lcg64(seed ^ 0x5DEECE66D)
    vol = vol1_closed if n == 1 else vol2_closed
    bad_h = bad_s = None
    for _ in range(trials):
        w = random_weights(rng, n, rng.randint(m_lo, m_hi))
        base = vol(w)
        t = rng.rational_in_unit()
        scaled = vol(w.scaled(t))
        if scaled != t ** dimension(n, w.m) * base and bad_h is None:
            bad_h = {**_wjson(w), "t": format_rational(t)}
        perm = rng.shuffle(list(range(w.m)))
        if vol(w.permuted(perm)) != base and bad_s is None:
            bad_s = {**_wjson(w), "perm": perm}
    return [
        _first_failure(f"homogeneity Vol(t d) = t^dim Vol(d) (n={n})", trials, bad_h),
        _first_failure(f"permutation symmetry (n={n})", trials, bad_s),
    ]


def check_pinned_rank1() -> Check:
    w, expected = PINNED_RANK1
    got = vol1_closed(w)
    oracle = jk_volume_rank1(w)
    ok = got == expected == oracle
    ex = None if ok else {"closed": format_rational(got), "oracle": format_rational(oracle)}
    return Check("pinned n=1 volume 1/2", ok, 1, f"d = {w}", counterexample=ex)


def check_printed_rank2(trials: int, seed: int) -> Check:
    """How often the literal published rank-2 formula matches the residue sum."""
    rng = Lcg64(seed ^ 0xC0FFEE)
    agree = 0
    examples = []
    for _ in range(trials):
        w = random_weights(rng, 2, rng.randint(4, 6))
        printed, oracle = vol2_printed(w), jk_volume_rank2(w)
        if printed == oracle:
            agree += 1
        elif len(examples) < 3:
            examples.append(
                {**_wjson(w), "published": format_rational(printed), "oracle": format_rational(oracle)}
            )
    return Check(
        "published rank-2 formula vs residue oracle",
        True,
        trials,
        f"{agree}/{trials} agree",
        report_only=True,
        data={"disagreements": examples},
    )


def suite_arr1(trials: int = 200, seed: int = 0) -> list[Check]:
    return [
        check_pinned_rank1(),
        check_oracle(1, trials, seed, 4, 9),
        *check_homogeneity_symmetry(1, min(trials, 100), seed, 4, 9),
    ]


def suite_arr2(trials: int = 50, seed: int = 0) -> list[Check]:
    return [
        check_oracle(2, trials, seed, 4, 7),
        *check_homogeneity_symmetry(2, min(trials, 100), seed, 4, 7),
        check_printed_rank2(min(trials, 10), seed),
    ]


# ---------------------------------------------------------------- dP4 and ring


def suite_dp4(m_max: int = 15) -> list[Check]:
    bad = None
    for m in range(4, m_max + 1):
        a, b = dp4_sum_closed(m), dp4_residue_sum(m)
        if a != b and bad is None:
            bad = {"m": m, "closed": format_rational(a), "residue": format_rational(b)}
    pinned = dp4_sum_closed(5)
    return [
        _first_failure(f"dP4 closed sum == residue sum (4 <= m <= {m_max})", m_max - 3, bad),
        Check(
            "dP4 sum at m=5 is 1/24",
            pinned == Fraction(1, 24),
            1,
            f"got {format_rational(pinned)}",
        ),
    ]


def suite_ring(k_max: int = 32, n_range: range = range(2, 7)) -> list[Check]:
    rec_bad = direct_bad = a_bad = None
    b_published_ok = 0
    prev = xpow_reduce(1)
    for k in range(1, k_max + 1):
        A, B = xpow_reduce(k)
        if k > 1:
            pa, pb = prev
            if (A, B) != (pb - 4 * pa, -4 * pa) and rec_bad is None:
                rec_bad = {"k": k}
        if (A, B) != xpow_reduce_direct(k) and direct_bad is None:
            direct_bad = {"k": k}
        cl = xpow_closed(k)
        if A != cl["A"] and a_bad is None:
            a_bad = {"k": k}
        b_published_ok += B == cl["B_published"]
        prev = (A, B)
    checks = [
        _first_failure(f"x^k recursion A_(k+1) = B_k - 4A_k, B_(k+1) = -4A_k (k <= {k_max})", k_max, rec_bad),
        _first_failure(f"x^k step reduction == binary-power reduction (k <= {k_max})", k_max, direct_bad),
        _first_failure("A_k = (-1)^(k-1) k 2^(k-1)", k_max, a_bad),
        Check(
            "published B_k = (-1)^k (k-1) 2^k",
            True,
            k_max,
            f"{b_published_ok}/{k_max} agree with the reduction",
            report_only=True,
        ),
    ]
    rows = []
    integral = True
    for n in n_range:
        r = reconcile(n)
        integral &= r["cRing"].denominator == 1
        rows.append(
            {
                "n": n,
                "cPaper": format_rational(r["cPaper"]),
                "cRing": format_rational(r["cRing"]),
                "agree": r["agree"],
            }
        )
    checks.append(Check("ring c is integer-valued", integral, len(rows)))
    detail = "; ".join(f"n={r['n']}: paper {r['cPaper']} ring {r['cRing']}" for r in rows)
    checks.append(
        Check("c reconciliation", True, len(rows), detail, report_only=True, data={"rows": rows})
    )
    return checks


def run_suite(name: str, trials: int | None = None, seed: int = 0) -> list[Check]:
    if name == "identities":
        return suite_identities(seed)
    if name == "arr1":
        return suite_arr1(trials or 200, seed)
    if name == "arr2":
        return suite_arr2(trials or 50, seed)
    if name == "dp4":
        return suite_dp4()
    if name == "ring":
        return suite_ring()
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s, trials, seed))
        return out
    raise ValueError(f"unknown suite {name!r}")

from fractions import Fraction as F
from itertools import product

import pytest
import sympy as sp

from cmvolume.arrangements import NonGenericError, StabilityClassError, WeightVector
from cmvolume.residues import (
    ExpSum1,
    ExpSum2,
    build_hf,
    dp4_residue_sum,
    inner_res_plus_y,
    iterated_res_plus,
    jk_volume_rank1,
    jk_volume_rank1_from_hf,
    jk_volume_rank2,
    res_plus_1d,
)
from cmvolume.rng import Lcg64, random_weights

X, Y = sp.symbols("x y")


def test_res_plus_1d_basic():
    assert res_plus_1d(ExpSum1.term(1, 2, -3)) == 2  # 2^2 / 2!
    assert res_plus_1d(ExpSum1.term(5, F(1, 3), -1)) == 5
    assert res_plus_1d(ExpSum1.term(1, -2, -3)) == 0
    assert res_plus_1d(ExpSum1.term(1, 0, 2)) == 0
    with pytest.raises(NonGenericError):
        res_plus_1d(ExpSum1.term(1, 0, -1))


def sympy_iterated(l1, l2, a, b, c):
    """Positive iterated residue computed by sympy, pole by pole."""
    f = sp.exp(l1 * X + l2 * Y) / (X**a * Y**b * (X + Y) ** c)
    if l2 <= 0:
        return sp.Integer(0)
    total = sp.Integer(0)
    # inner poles y = 0 (outer slope l1) and y = -x (outer slope l1 - l2)
    for pole, outer in ((0, l1), (-X, l1 - l2)):
        inner = sp.residue(f, Y, pole)
        if inner != 0 and outer > 0:
            total += sp.residue(sp.simplify(inner), X, 0)
    return sp.nsimplify(sp.simplify(total))


@pytest.mark.parametrize(
    "l1, l2",
    [(F(5, 7), F(2, 7)), (F(2, 7), F(5, 7)), (F(-1, 3), F(1, 2)), (F(3, 4), F(-1, 5))],
)
def test_iterated_residue_against_sympy(l1, l2):
    for a, b, c in product(range(-1, 3), repeat=3):
        ours = iterated_res_plus(l1, l2, a, b, c)
        ref = sympy_iterated(sp.Rational(l1.numerator, l1.denominator),
                             sp.Rational(l2.numerator, l2.denominator), a, b, c)
        assert ours == F(int(sp.fraction(ref)[0]), int(sp.fraction(ref)[1])), (a, b, c)


def test_inner_residue_drops_negative_slope():
    assert len(inner_res_plus_y(ExpSum2.term(1, 1, F(-1, 2), 0, -2, -1))) == 0
    with pytest.raises(NonGenericError):
        inner_res_plus_y(ExpSum2.term(1, 1, 0, 0, -1, 0))


def test_four_points_in_plane_is_a_point():
    # (P^2)^4 // SL(3) with equal weights is a single reduced point
    assert jk_volume_rank2(WeightVector.parse(2, "1/2,1/2,1/2,1/2")) == 1


def test_rank1_two_routes_agree():
    rng = Lcg64(11)
    for _ in range(30):
        w = random_weights(rng, 1, rng.randint(4, 8))
        assert jk_volume_rank1(w) == jk_volume_rank1_from_hf(w)


def test_oracle_rejects_bad_input():
    with pytest.raises(NonGenericError):
        jk_volume_rank1(WeightVector.parse(1, "1/3,1/3,1/3,1/3"))
    with pytest.raises(StabilityClassError):
        jk_volume_rank1(WeightVector.parse(1, "1/2,1/2,1/2,1/2"))
    with pytest.raises(NonGenericError):
        jk_volume_rank2(WeightVector.parse(2, "2/5,2/5,2/5,2/5,2/5,2/5"))


def test_rank2_partial_sums_add_up():
    w = random_weights(Lcg64(3), 2, 5)
    full = jk_volume_rank2(w)
    parts = sum(jk_volume_rank2(w, lo, lo + 50) for lo in range(0, 3**5, 50))
    assert parts == full


def test_build_hf_json():
    w = WeightVector.parse(2, "1/2,1/3,1/4,1/5")
    hf = build_hf(2, 4, (1, 2, 2, 3), w)
    js = hf.to_json()
    assert js["sign"] == 1
    assert len(js["expCoeffs"]) == 2 and all(isinstance(s, str) for s in js["expCoeffs"])
    orders = {(p["i"], p["j"]): p["order"] for p in js["poleOrders"]}
    # counts (1, 2, 1): m_i + m_j - 2
    assert orders == {(1, 2): 1, (1, 3): 0, (2, 3): 1}


def test_dp4_residue_sum_by_hand():
    # m = 5: k = 0, 1, 2 give weights 5, 3, 1
    s = sum(F(wt**2, 2**5 * f) for wt, f in ((5, 120), (3, 24), (1, 12)))
    assert s == F(1, 48)
    assert dp4_residue_sum(5) == F(1, 2) * 4 * s == F(1, 24)

from fractions import Fraction as F
from itertools import product

import pytest

from cmvolume.arrangements import (
    Chamber,
    NonGenericError,
    StabilityClass,
    StabilityClassError,
    WeightError,
    WeightVector,
    classify,
    count_fixed_points,
    enumerate_fixed_points,
    integer_classifier,
    parse_weights,
    require_generic,
    require_log_fano,
    split_tables,
    stats,
    validate_weights,
    wall_check,
)


def test_parse_weights_accepts_mixed_forms():
    assert parse_weights("3/10,0.3, 2/5") == (F(3, 10), F(3, 10), F(2, 5))
    with pytest.raises(WeightError):
        parse_weights("1/2,,1/3")
    with pytest.raises(WeightError):
        parse_weights("1/2,x")


@pytest.mark.parametrize(
    "n, d, expected",
    [
        (1, "1/3,1/3,1/3,1/3", StabilityClass.LOG_FANO),
        (1, "1/2,1/2,1/2,1/2", StabilityClass.CALABI_YAU),
        (1, "3/4,3/4,3/4", StabilityClass.GENERAL_TYPE),
        (2, "1/2,1/2,1/2,1/2", StabilityClass.LOG_FANO),
    ],
)
def test_stability_class(n, d, expected):
    assert validate_weights(WeightVector.parse(n, d)) is expected


def test_weight_range_and_count():
    with pytest.raises(WeightError):
        validate_weights(WeightVector.parse(1, "1,1/2,1/2,1/2"))
    with pytest.raises(WeightError):
        validate_weights(WeightVector.parse(1, "0,1/2,1/2,1/2"))
    with pytest.raises(WeightError):
        validate_weights(WeightVector.parse(2, "1/4,1/4,1/4"))


def test_require_log_fano_raises_with_class():
    with pytest.raises(StabilityClassError) as info:
        require_log_fano(WeightVector.parse(1, "1/2,1/2,1/2,1/2"))
    assert info.value.stability is StabilityClass.CALABI_YAU


def test_enumeration_order_and_ranges():
    pts = list(enumerate_fixed_points(2, 3))
    assert len(pts) == count_fixed_points(2, 3) == 27
    assert pts == sorted(pts)
    assert pts[0] == (1, 1, 1) and pts[-1] == (3, 3, 3)
    assert list(enumerate_fixed_points(2, 3, 5, 9)) == pts[5:9]


def test_stats_rank2_by_hand():
    w = WeightVector.parse(2, "1/2,1/3,1/4,1/5")
    st = stats((1, 2, 2, 3), w)
    assert st.counts == (1, 2, 1)
    assert st.deltas == (F(1, 2), F(7, 12), F(1, 5))
    total = F(1, 2) + F(7, 12) + F(1, 5)
    assert st.xi == (F(1, 2) - total / 3, F(7, 12) - total / 3, F(1, 5) - total / 3)
    # lambda_1 = xi_1, lambda_2 = -xi_3
    assert st.lam == (st.xi[0], -st.xi[2])
    # sign (-1)^{m_2}
    assert st.sign == 1


def test_stats_rank1_by_hand():
    w = WeightVector.parse(1, "3/10,3/10,3/10,2/5")
    st = stats((1, 2, 2, 1), w)
    assert st.deltas == (F(7, 10), F(3, 5))
    assert st.lam == (F(1, 20),)
    assert st.sign == 1  # (-1)^{m_1}, m_1 = 2
    assert classify(st) is Chamber.F_PLUS
    assert stats((1, 2, 2, 2), w).sign == -1


def test_classify_rank2_chambers():
    w = WeightVector.parse(2, "1/2,1/3,1/4,1/5,1/7")
    seen = {classify(stats(f, w)) for f in enumerate_fixed_points(2, 5)}
    assert {Chamber.A, Chamber.B, Chamber.OUTSIDE} <= seen
    assert Chamber.WALL not in seen


def test_integer_classifier_agrees_with_exact():
    w = WeightVector.parse(2, "1/2,1/3,1/4,1/5,2/7")
    prefixes, suffixes = split_tables(w)
    cls = integer_classifier(w)
    merged = []
    for f1, _, s1 in prefixes:
        for f2, _, s2 in suffixes:
            merged.append(f1 + f2)
            assert cls([a + b for a, b in zip(s1, s2)]) is classify(stats(f1 + f2, w))
    assert merged == list(enumerate_fixed_points(2, 5))


def test_wall_check_matches_brute_force():
    for n, d in [(1, "1/3,1/3,1/3,1/3"), (2, "2/5,2/5,2/5,2/5,2/5,2/5"), (1, "3/10,3/10,3/10,2/5")]:
        w = WeightVector.parse(n, d)
        brute = [f for f in product(range(1, n + 2), repeat=w.m) if classify(stats(f, w)) is Chamber.WALL]
        assert wall_check(w) == brute


def test_equal_weights_n1_is_wall():
    w = WeightVector.parse(1, "1/3,1/3,1/3,1/3")
    with pytest.raises(NonGenericError) as info:
        require_generic(w)
    assert (1, 1, 2, 2) in info.value.points


def test_scaled_and_permuted():
    w = WeightVector.parse(1, "1/2,1/3,1/4")
    assert w.scaled(F(1, 2)).d == (F(1, 4), F(1, 6), F(1, 8))
    assert w.permuted([2, 0, 1]).d == (F(1, 4), F(1, 2), F(1, 3))
    assert str(w) == "1/2,1/3,1/4"

from fractions import Fraction as Q

import pytest

from surgkit.services.core import CFError
from surgkit.services.exact import (
    Fraction, cf_eval, cf_eval_recursive, cf_expand, cf_expand_canonical, continuants, format_cf,
    gcd_ext, parse_cf,
)


@pytest.mark.parametrize("cf, expected", [
    ([1, -4], "5/4"),
    ([2, 2, 8], "22/15"),
    ([2, 2, 7, -1], "22/15"),
    ([6, 2, -2, -3, -3], "191/34"),
    ([], "inf"),
])
def test_cf_eval(cf, expected):
    assert str(cf_eval(cf)) == expected


def test_cf_eval_passes_through_zero_denominator():
    # 中间一层为 0，逐层求值会除零，矩阵形式照常给出结果
    assert cf_eval([1, 1, 1, 1]) == Fraction.of(1, 1)
    assert cf_eval([1, 1, 1]).is_infinite()
    with pytest.raises(ZeroDivisionError):
        cf_eval_recursive([1, 1, 1, 1])


def test_recursive_matches_matrix():
    assert cf_eval_recursive([2, 2, 7, -1]) == Q(22, 15)


def test_expand_canonical():
    assert cf_expand_canonical(Fraction.of(22, 15)) == [2, 2, 8]
    assert cf_expand_canonical(Fraction.of(5, 4)) == [2, 2, 2, 2]


def test_expand_any_rational():
    assert cf_expand(Fraction.of(-5, 3)) == [-1, 2, 2]
    assert cf_expand(Fraction.of(3, 1)) == [3]
    assert cf_expand(Fraction.infinity()) == []


@pytest.mark.parametrize("x", [Fraction.of(1, 1), Fraction.of(2, 3), Fraction.infinity()])
def test_expand_canonical_rejects(x):
    with pytest.raises(CFError):
        cf_expand_canonical(x)


def _assert_round_trip(limit):
    for p in range(2, limit):
        for q in range(1, p):
            if gcd_ext(p, q)[0] != 1:
                continue
            cf = cf_expand_canonical(Fraction.of(p, q))
            assert all(a >= 2 for a in cf)
            assert cf_eval(cf) == Fraction.of(p, q)


def test_round_trip_small_fractions():
    _assert_round_trip(120)


@pytest.mark.slow
def test_round_trip_up_to_1000():
    _assert_round_trip(1001)


def test_continuants():
    assert continuants([2, 2, 8]) == [22, 15, 8, 1]
    assert continuants([2, 2, 7, -1]) == [-22, -15, -8, -1, 1]


def test_gcd_ext():
    g, x, y = gcd_ext(240, -46)
    assert g == 2
    assert 240 * x + (-46) * y == 2
    assert gcd_ext(0, 0)[0] == 0


def test_fraction_parse():
    assert Fraction.parse("6/4") == Fraction(3, 2)
    assert Fraction.parse("3/-6") == Fraction(-1, 2)
    assert Fraction.parse("inf").is_infinite()
    with pytest.raises(CFError):
        Fraction.parse("a/b")
    with pytest.raises(CFError):
        Fraction.of(0, 0)


def test_parse_and_format_cf():
    assert parse_cf("[2, 2,7 ,-1]") == [2, 2, 7, -1]
    assert parse_cf("[]") == []
    assert format_cf([2, -1]) == "[2,-1]"
    for bad in ("[1,,2]", "1,2", "[a]"):
        with pytest.raises(CFError):
            parse_cf(bad)

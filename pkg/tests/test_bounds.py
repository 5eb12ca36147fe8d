import math
from fractions import Fraction

import pytest

from nquasi import UsageError
from nquasi.bounds import (bounds_report, c_k, certify_log2_ge, certify_log2_le, chain_bound,
                           chain_bound_interval, lower_bound_log2, q4_asymptotic_ratio,
                           q4_asymptotic_ratio_exact, trade_bounds, upper_bound_log2)


def test_c5():
    assert c_k(5) == pytest.approx(math.log2(120) / 3 + 5, abs=1e-12)
    assert c_k(5) == pytest.approx(7.3023, abs=5e-5)


def test_upper_bound():
    assert upper_bound_log2(2, 5) == pytest.approx(65.72, abs=5e-3)
    assert math.log2(161280) <= upper_bound_log2(2, 5)
    with pytest.raises(UsageError):
        upper_bound_log2(2, 4)


def test_lower_bound():
    assert lower_bound_log2(2, 7) == 9
    assert lower_bound_log2(4, 7) == 54
    assert lower_bound_log2(2, 5) == 4
    assert 2 ** 4 <= 161280
    with pytest.raises(UsageError):
        lower_bound_log2(2, 6)


def test_trade_bounds():
    assert (trade_bounds(2, 4).lower, trade_bounds(2, 4).upper) == (4, 4)
    assert (trade_bounds(3, 6).lower, trade_bounds(3, 6).upper) == (27, 27)
    assert (trade_bounds(2, 7).lower, trade_bounds(2, 7).upper) == (9, 12)
    assert not trade_bounds(2, 5).published


def test_chain_bound_examples():
    assert 2 ** chain_bound(2, 3, 4, 576)[0] == pytest.approx(5308416)
    assert chain_bound(2, 3, 5, 161280)[0] == pytest.approx(3 * math.log2(161280) + 2.5 ** 2)
    assert chain_bound(2, 3, 5, 161280)[0] == pytest.approx(58.15, abs=5e-3)
    k3 = chain_bound(2, 3, 3, 12)[0]
    assert 2 ** k3 == pytest.approx(12 * 2 ** 2.25)
    assert 2 ** k3 >= 24


def test_chain_interval_agrees_with_float():
    for lo_hi, x in zip(chain_bound_interval(1, 5, 4, 24), chain_bound(1, 5, 4, 24)):
        assert lo_hi.a <= lo_hi.b
        assert float(lo_hi.mid) == pytest.approx(x, rel=1e-12)


def test_certify():
    assert certify_log2_le(4, 161280)
    assert not certify_log2_le(18, 161280)
    assert certify_log2_ge(17.31, 161280)
    assert not certify_log2_ge(17.29, 161280)
    # exact powers of two sit on the boundary and must not be certified strictly wrong
    assert certify_log2_le(10, 1024)
    assert not certify_log2_le(11, 1024)
    assert certify_log2_ge(10, 1024)


def test_asymptotic_ratio():
    assert q4_asymptotic_ratio_exact(3) == Fraction(55296, 81 * 512) == Fraction(4, 3)
    assert q4_asymptotic_ratio_exact(1) == Fraction(24, 9 * 2 ** 3)
    assert abs(q4_asymptotic_ratio(8) - 1) <= 0.01


def test_report():
    r = bounds_report(2, 7)
    assert r.lower_log2_exponent <= r.upper_log2
    assert r.trd_lower <= r.trd_upper
    obj = r.to_obj()
    assert obj["trd_upper"] == "12" and obj["precision_bits"] == 64

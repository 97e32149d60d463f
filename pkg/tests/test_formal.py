from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torimod.arith.cyclotomic import CycElem, cyc_make
from torimod.arith.formal import FormalSeries, bernoulli
from torimod.errors import LogOfNonUnit, NotAUnit

ORDER = 8
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_exp_log_round_trip_on_one_plus_w():
    f = FormalSeries([1, 1], ORDER, Fraction(0), Fraction(1))
    assert f.log().exp().coeffs == [1, 1] + [0] * (ORDER - 1)


def test_log_of_one_plus_w_coefficients():
    f = FormalSeries([1, 1], ORDER, Fraction(0), Fraction(1)).log()
    assert f.coeffs[1:] == [Fraction((-1) ** (n + 1), n) for n in range(1, ORDER + 1)]


def test_domain_errors():
    with pytest.raises(NotAUnit):
        FormalSeries([1, 1], 4, Fraction(0), Fraction(1)).exp()
    with pytest.raises(LogOfNonUnit):
        FormalSeries([2, 1], 4, Fraction(0), Fraction(1)).log()


def test_bernoulli_numbers():
    assert [bernoulli(n) for n in range(9)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0,
                                                 Fraction(1, 42), 0, Fraction(-1, 30)]
    assert bernoulli(12) == Fraction(-691, 2730)


@given(st.lists(fractions, min_size=ORDER, max_size=ORDER))
def test_exp_and_log_are_inverse(tail):
    zero, one = Fraction(0), Fraction(1)
    f = FormalSeries([zero] + tail, ORDER, zero, one)
    assert f.exp().log().coeffs == f.coeffs
    g = FormalSeries([one] + tail, ORDER, zero, one)
    assert g.log().exp().coeffs == g.coeffs


@given(st.lists(st.lists(st.integers(-3, 3), max_size=4), min_size=ORDER, max_size=ORDER))
def test_exp_log_over_cyclotomic_coefficients(rows):
    zero, one = CycElem.zero(5), CycElem.one(5)
    f = FormalSeries([zero] + [cyc_make(5, r) for r in rows], ORDER, zero, one)
    assert f.exp().log().coeffs == f.coeffs


@given(st.lists(fractions, min_size=ORDER + 1, max_size=ORDER + 1),
       st.lists(fractions, min_size=ORDER + 1, max_size=ORDER + 1))
def test_product_rule_for_derivative(a, b):
    zero, one = Fraction(0), Fraction(1)
    f, g = FormalSeries(a, ORDER, zero, one), FormalSeries(b, ORDER, zero, one)
    lhs = (f * g).derivative()
    rhs = f.derivative() * g + f * g.derivative()
    assert lhs.coeffs[: ORDER] == rhs.coeffs[: ORDER]


@given(st.lists(fractions, min_size=ORDER, max_size=ORDER), st.fractions(min_value=1, max_value=4))
def test_inverse(tail, c0):
    zero, one = Fraction(0), Fraction(1)
    f = FormalSeries([c0] + tail, ORDER, zero, one)
    assert (f * f.inverse()).coeffs == [1] + [0] * ORDER

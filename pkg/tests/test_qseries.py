import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torimod.arith.cyclotomic import CycElem, cyc_make
from torimod.arith.qseries import QSeries, Verdict
from torimod.errors import IncompatibleLevels, InsufficientPrecision, NotAUnit
from torimod.hecke import u_p, v_p


@st.composite
def series(draw, L=5, min_prec=0, max_prec=12, val_min=0):
    prec = draw(st.integers(min_prec, max_prec))
    val = draw(st.integers(val_min, min(prec, 3)))
    n = prec - val + 1
    coeffs = [cyc_make(L, draw(st.lists(st.integers(-4, 4), min_size=0, max_size=4))) for _ in range(n)]
    return QSeries(L, val, coeffs, prec)


def naive_product(a: QSeries, b: QSeries) -> dict:
    out: dict[int, CycElem] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, CycElem.zero(a.L)) + x * y
    return out


def test_geometric_inverse():
    f = QSeries.from_dict(1, {0: 1, 1: -1}, 10).invert()
    assert all(f[n] == CycElem.one(1) for n in range(11))
    assert f.prec == 10


def test_invert_needs_unit_leading_term():
    with pytest.raises(NotAUnit):
        QSeries.zero(5, 4).invert()


def test_invert_laurent():
    f = QSeries.from_dict(5, {-1: 2, 0: 1, 3: CycElem.root_of_unity(5, 2)}, 8)
    g = f.invert()
    assert (f * g).compare(QSeries.constant(5, 1, 6)) is Verdict.EQUAL


def test_substitute_and_extract():
    f = QSeries.from_dict(1, {n: n + 1 for n in range(11)}, 10)
    g = f.substitute(2)
    assert g.prec == 20 and g[6] == CycElem.rational(1, 4) and g[7].is_zero()
    h = f.extract(3)
    assert h.prec == 3 and [h[n].rational_value() for n in range(4)] == [1, 4, 7, 10]


def test_u_and_v_examples():
    ones = QSeries.from_dict(1, {n: 1 for n in range(21)}, 20)
    assert u_p(ones, 2).compare(QSeries.from_dict(1, {n: 1 for n in range(11)}, 10)) is Verdict.EQUAL
    assert u_p(QSeries.from_dict(1, {1: 1}, 20), 2).is_zero()
    assert v_p(QSeries.constant(1, 1, 5), 7).compare(QSeries.constant(1, 1, 35)) is Verdict.EQUAL
    q3 = v_p(QSeries.from_dict(1, {1: 1}, 5), 3)
    assert q3[3] == CycElem.one(1) and q3.valuation() == 3


@given(series(), st.integers(2, 5))
def test_u_is_a_section_of_v(f, p):
    assert u_p(v_p(f, p), p).identical(f)


def test_precision_tracking():
    a = QSeries.from_dict(5, {0: 1, 1: 1}, 10)
    b = QSeries.from_dict(5, {2: 1}, 4)
    assert (a + b).prec == 4
    assert (a * b).prec == min(10 + 2, 4 + 0)
    with pytest.raises(InsufficientPrecision):
        b.coefficient(5)


def test_three_valued_comparison():
    a = QSeries.from_dict(5, {0: 1, 3: 2}, 10)
    b = QSeries.from_dict(5, {0: 1, 3: 2}, 3)
    assert a.compare(b) is Verdict.EQUAL
    assert a.compare(b, upto=5) is Verdict.INSUFFICIENT
    assert a.compare(QSeries.from_dict(5, {0: 1}, 10)) is Verdict.UNEQUAL
    assert a.first_difference(QSeries.from_dict(5, {0: 1}, 10)) == 3


def test_levels_must_match():
    with pytest.raises(IncompatibleLevels):
        QSeries.constant(5, 1, 3) + QSeries.constant(7, 1, 3)
    assert (QSeries.constant(5, 1, 3).embed(10) + QSeries.constant(10, 1, 3))[0] == CycElem.rational(10, 2)


def test_pretty_rendering():
    f = QSeries.from_dict(5, {0: Fraction(1, 2), 3: cyc_make(5, [1, -1, 2]), 4: -1}, 5)
    assert f.pretty() == "1/2 + (1 − ζ5 + 2ζ5²)·q³ − q⁴ + O(q⁶)"


@given(series(min_prec=0, val_min=-2))
def test_json_round_trip(f):
    assert QSeries.from_json(json.loads(json.dumps(f.to_json()))).identical(f)


@given(series(), series())
def test_multiplication_matches_schoolbook(a, b):
    prod = a * b
    ref = naive_product(a, b)
    for n in range(prod.valuation() if not prod.is_zero() else 0, prod.prec + 1):
        assert prod.coefficient(n) == ref.get(n, CycElem.zero(5))


@given(series(), series(), series())
def test_multiplication_commutative_associative(a, b, c):
    assert (a * b).compare(b * a) is Verdict.EQUAL
    assert ((a * b) * c).compare(a * (b * c)) is Verdict.EQUAL
    assert (a * (b + c)).compare(a * b + a * c) is Verdict.EQUAL


@given(series(L=7, min_prec=1))
def test_inverse_round_trip(f):
    if f.is_zero():
        return
    g = f.invert()
    assert (f * g).compare(QSeries.constant(7, 1, g.prec + f.valuation())) is Verdict.EQUAL

import cmath
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torimod import cache
from torimod.arith.cyclotomic import CycElem, divisors
from torimod.arith.qseries import Verdict
from torimod.errors import BadResidue, BadResidues, OddOrder, ReductionNotFound
from torimod.generators import (GeneratorPoly, clear_memory_cache, r_series, r_symbol, reduce_to_s1,
                                relation_coefficient, s_series, s_symbol)
from torimod.theta_oracle import evaluate, r2_numeric, s1_numeric, theta_derivative

TAU = 1j


def taylor(fn, k, radius=0.05, points=64):
    """k-th Taylor coefficient at 0 by the trapezoid rule on a circle."""
    total = 0j
    for j in range(points):
        w = cmath.exp(2j * math.pi * j / points)
        total += fn(radius * w) * w ** (-k)
    return total / points / radius ** k


def s_numeric(alpha, k, tau=TAU):
    th = lambda z: theta_derivative(z, tau, 0)
    d0 = theta_derivative(0, tau, 1)
    g = lambda z: cmath.log(z * th(z + alpha) * d0 / (th(z) * th(alpha)))
    return math.factorial(k) * taylor(g, k) / (2j * math.pi) ** k


def r_numeric(k, tau=TAU):
    d0 = theta_derivative(0, tau, 1)
    g = lambda z: cmath.log(theta_derivative(z, tau, 0) / (z * d0))
    return math.factorial(k) * taylor(g, k) / (2j * math.pi) ** k


def sigma(k, n):
    return sum(d ** k for d in divisors(n))


# numeric theta oracle -----------------------------------------------------------------

@pytest.mark.parametrize("a", [1, 2, 3, 4])
def test_s1_constant_and_value_against_theta(a):
    f = s_series(a, 5, 1, 30)
    z = CycElem.root_of_unity(5, a)
    assert f[0] == Fraction(1, 2) + (z - 1).inverse()
    assert abs(evaluate(f, TAU) - s1_numeric(a / 5, TAU)) < 1e-12


@pytest.mark.parametrize("l,a,k", [(5, 1, 2), (5, 2, 3), (7, 3, 4), (7, 1, 2), (5, 4, 3)])
def test_higher_s_against_theta(l, a, k):
    assert abs(evaluate(s_series(a, l, k, 30), TAU) - s_numeric(a / l, k)) < 1e-7


@pytest.mark.parametrize("k", [2, 4, 6])
def test_r_against_theta(k):
    assert abs(evaluate(r_series(k, 30), TAU) - r_numeric(k)) < 1e-6


def test_r2_constant_against_theta_at_2i():
    f = r_series(2, 30)
    assert f[0] == Fraction(1, 12)
    assert abs(evaluate(f, 2j) - r2_numeric(2j)) < 1e-12


# exact structure -----------------------------------------------------------------------

def test_s1_first_coefficient():
    z = CycElem.root_of_unity(5, 1)
    assert s_series(1, 5, 1, 3)[1] == -(z - z.inverse())


@pytest.mark.parametrize("l", [5, 7])
def test_s1_divisor_sums(l):
    for a in range(1, l):
        f = s_series(a, l, 1, 100)
        for d in range(1, 101):
            ref = CycElem.zero(l)
            for j in divisors(d):
                ref = ref - CycElem.root_of_unity(l, a * j) + CycElem.root_of_unity(l, -a * j)
            assert f[d] == ref


@pytest.mark.parametrize("l", [5, 7])
def test_symmetry(l):
    for k in range(1, 5):
        for a in range(1, l):
            lhs = s_series(l - a, l, k, 100)
            assert lhs.compare(s_series(a, l, k, 100) * (-1) ** k) is Verdict.EQUAL


def test_r_coefficients_rational_and_eisenstein():
    for k in (2, 4, 6):
        f = r_series(k, 100)
        assert all(f[n].is_rational() for n in range(101))
        assert all(f[d].rational_value() == -2 * sigma(k - 1, d) for d in range(1, 101))
    f = r_series(4, 5)
    assert f[2].rational_value() / f[1].rational_value() == 9


def test_bad_symbols():
    with pytest.raises(OddOrder):
        r_series(3, 10)
    with pytest.raises(OddOrder):
        r_symbol(5)
    with pytest.raises(BadResidue):
        s_series(5, 5, 1, 10)
    with pytest.raises(BadResidue):
        s_symbol(0, 7, 2)


def test_small_level_generators_exist():
    for a, l, k in [(1, 4, 2), (1, 3, 3), (1, 2, 2), (1, 2, 4)]:
        assert s_series(a, l, k, 20).prec == 20


# relation lemma and reductions ---------------------------------------------------------

def test_relation_examples():
    assert relation_coefficient(5, (1, 4), 100).is_zero()
    assert relation_coefficient(5, (1, 2, 2), 100).is_zero()
    assert relation_coefficient(7, (1, 2, 4), 100).is_zero()
    with pytest.raises(BadResidues):
        relation_coefficient(5, (1, 2), 10)


def test_reduce_weight_one_is_identity():
    assert reduce_to_s1(s_symbol(3, 7, 1), 7) == GeneratorPoly.s(3, 7)


def test_reduce_s2_at_level_5_to_q200():
    poly = reduce_to_s1(s_symbol(1, 5, 2), 5)
    assert poly.is_homogeneous() and poly.weight == 2
    assert all(g.k == 1 for g in poly.symbols())
    assert poly.to_series(200).compare(s_series(1, 5, 2, 200)) is Verdict.EQUAL


def test_reduce_r4_at_level_5():
    poly = reduce_to_s1(r_symbol(4), 5)
    assert poly.weight == 4
    assert poly.to_series(120).compare(r_series(4, 120).embed(5)) is Verdict.EQUAL


def test_r2_is_not_modular():
    with pytest.raises(ReductionNotFound):
        reduce_to_s1(r_symbol(2), 5)


# GeneratorPoly ---------------------------------------------------------------------------

polys = st.lists(st.tuples(st.integers(1, 4), st.integers(1, 2), st.integers(-3, 3)), min_size=1, max_size=4)


def build(terms):
    out = GeneratorPoly(5)
    for a, k, c in terms:
        out = out + GeneratorPoly.s(a, 5, k) * c
    return out


@given(polys, polys)
def test_series_map_is_a_ring_homomorphism(t1, t2):
    f, g = build(t1), build(t2)
    prec = 12
    assert (f * g).to_series(prec).compare(f.to_series(prec) * g.to_series(prec)) is Verdict.EQUAL
    assert (f + g).to_series(prec).compare(f.to_series(prec) + g.to_series(prec)) is Verdict.EQUAL


@given(polys)
def test_poly_json_round_trip(t):
    f = build(t) * GeneratorPoly.s(2, 5) + CycElem.root_of_unity(5, 3)
    assert GeneratorPoly.from_json(json.loads(json.dumps(f.to_json()))) == f


def test_cache_transparency(tmp_path):
    clear_memory_cache()
    plain = json.dumps(s_series(2, 7, 3, 40).to_json())
    cache.set_cache_dir(tmp_path)
    clear_memory_cache()
    cold = json.dumps(s_series(2, 7, 3, 40).to_json())
    assert list(tmp_path.iterdir())
    clear_memory_cache()
    warm = json.dumps(s_series(2, 7, 3, 40).to_json())
    assert plain == cold == warm
    clear_memory_cache()

import cmath
import json
from math import gcd
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torimod.arith.cyclotomic import (CycElem, cyc_embed, cyc_inv, cyc_make, cyclotomic_poly, euler_phi,
                                      group_ring_to_power_basis)
from torimod.errors import DivisionByZero, IncompatibleLevels

LEVELS = [1, 2, 3, 4, 5, 7, 9, 12]

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def elems(draw, L=None):
    L = draw(st.sampled_from(LEVELS)) if L is None else L
    n = draw(st.integers(0, L + 2))
    return cyc_make(L, draw(st.lists(fractions, min_size=n, max_size=n)))


@st.composite
def triples(draw):
    L = draw(st.sampled_from(LEVELS))
    return draw(elems(L)), draw(elems(L)), draw(elems(L))


def close(x: CycElem, z: complex) -> bool:
    return abs(x.to_complex() - z) < 1e-8 * (1 + abs(z))


# examples ------------------------------------------------------------------------

def test_make_root():
    assert cyc_make(5, [0, 1]).coeffs() == [0, 1, 0, 0]


def test_make_reduces_by_cyclotomic_polynomial():
    assert cyc_make(5, [0, 0, 0, 0, 1]).coeffs() == [-1, -1, -1, -1]


def test_make_level_one():
    x = cyc_make(1, [3])
    assert x.is_rational() and x.rational_value() == 3


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_poly(9) == (1, 0, 0, 1, 0, 0, 1)
    for L in range(1, 40):
        assert len(cyclotomic_poly(L)) - 1 == euler_phi(L)


def test_inverse_examples():
    assert cyc_inv(CycElem.one(5)) == CycElem.one(5)
    assert cyc_inv(CycElem.root_of_unity(5, 1)) == CycElem.root_of_unity(5, 4)
    x = cyc_make(5, [1, 1])
    assert x * cyc_inv(x) == CycElem.one(5)


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        cyc_inv(CycElem.zero(7))
    with pytest.raises(ZeroDivisionError):
        CycElem.one(7) / CycElem.zero(7)


def test_embed_examples():
    assert cyc_embed(CycElem.root_of_unity(5, 1), 10) == CycElem.root_of_unity(10, 2)
    assert cyc_embed(CycElem.rational(1, Fraction(1, 2)), 7) == CycElem.rational(7, Fraction(1, 2))
    x = cyc_make(5, [1, 1])
    assert cyc_embed(x, 15) * cyc_embed(cyc_inv(x), 15) == CycElem.one(15)
    with pytest.raises(IncompatibleLevels):
        cyc_embed(x, 7)


def test_mixed_levels_refused():
    with pytest.raises(IncompatibleLevels):
        CycElem.one(5) + CycElem.one(7)


def test_group_ring_matrix_sends_basis_to_powers():
    for L in (5, 12, 9):
        R = group_ring_to_power_basis(L)
        for j in range(L):
            assert CycElem(L, [int(v) for v in R[j]]) == CycElem.root_of_unity(L, j)


def test_json_and_pretty():
    x = cyc_make(5, [Fraction(1, 2), -1, 0, 3])
    obj = json.loads(json.dumps(x.to_json()))
    assert obj["L"] == 5 and obj["coeffs"][0] == [1, 2]
    assert CycElem.from_json(obj) == x
    assert cyc_make(5, [1, -1, 2]).pretty() == "1 − ζ5 + 2ζ5²"


# properties -----------------------------------------------------------------------

@given(triples())
def test_ring_axioms(t):
    a, b, c = t
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == CycElem.zero(a.L)


@given(elems())
def test_complex_embedding_is_a_homomorphism(a):
    b = CycElem.root_of_unity(a.L, 1) + 2
    z = cmath.exp(2j * cmath.pi / a.L)
    assert close(a * b, a.to_complex() * (z + 2))
    assert close(a.conjugate(), a.to_complex().conjugate())


@pytest.mark.parametrize("L", [5, 7, 12])
def test_inverse_on_200_random_elements(L):
    import random

    rng = random.Random(L)
    done = 0
    while done < 200:
        x = cyc_make(L, [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(euler_phi(L))])
        if x.is_zero():
            continue
        y = cyc_inv(x)
        assert x * y == CycElem.one(L) and y * x == CycElem.one(L)
        done += 1


@given(st.sampled_from([(1, 5), (5, 10), (5, 15), (3, 12), (4, 12), (7, 14)]), st.data())
def test_embedding_injective_and_multiplicative(levels, data):
    L, M = levels
    a, b = data.draw(elems(L)), data.draw(elems(L))
    assert cyc_embed(a * b, M) == cyc_embed(a, M) * cyc_embed(b, M)
    assert cyc_embed(a + b, M) == cyc_embed(a, M) + cyc_embed(b, M)
    assert (cyc_embed(a, M) == cyc_embed(b, M)) == (a == b)
    assert close(cyc_embed(a, M), a.to_complex())


@given(elems())
def test_galois_action_respects_products(a):
    b = a + 1
    for k in range(1, a.L + 1):
        if gcd(k, a.L) == 1:
            assert (a * b).galois(k) == a.galois(k) * b.galois(k)

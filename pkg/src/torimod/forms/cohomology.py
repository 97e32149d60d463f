"""Toric forms of smooth complete fans from divisor intersection numbers.

f = int_X prod_i exp(sum_{k=1}^r (-1)^k/k! D_i^k s_{alpha_i}^(k)): expand each
factor as a polynomial in D_i, multiply in the ring of divisor polynomials cut
off above degree r, and integrate the degree-r part.  The result is a
polynomial in the generators, which is then turned into a q-series.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from torimod.arith.formal import FormalSeries
from torimod.errors import IntegralDegreeError, NotSmooth
from torimod.generators import GeneratorPoly
from torimod.geometry.fan import DegreeFunction, Fan
from torimod.geometry.intersection import IntersectionRing


def _ray_factor(l: int, a: int, r: int) -> list[GeneratorPoly]:
    """Coefficients of D^0..D^r in exp(sum_k (-1)^k/k! D^k s_{a/l}^(k))."""
    zero = GeneratorPoly(l)
    one = GeneratorPoly.constant(l, 1)
    terms = [zero] + [GeneratorPoly.s(a, l, k) * Fraction((-1) ** k, factorial(k)) for k in range(1, r + 1)]
    return FormalSeries(terms, r, zero, one).exp().coeffs


def toric_form_generator_poly(fan: Fan, deg: DegreeFunction) -> GeneratorPoly:
    """f_{N,deg} as a weight-r polynomial in the s_{a/l}^(k)."""
    if not fan.is_smooth():
        raise NotSmooth("the cohomological formula needs a smooth fan")
    for d, a in zip(fan.rays, deg.values):
        if a % deg.l == 0:
            raise IntegralDegreeError(f"deg({list(d)}) is an integer")
    ring = IntersectionRing(fan)
    l, r, n = deg.l, fan.rank, len(fan.rays)
    # divisor polynomials: exponent tuple -> GeneratorPoly, truncated above degree r
    poly: dict[tuple[int, ...], GeneratorPoly] = {(0,) * n: GeneratorPoly.constant(l, 1)}
    for i in range(n):
        factor = _ray_factor(l, deg.values[i] % l, r)
        new: dict[tuple[int, ...], GeneratorPoly] = {}
        for e, c in poly.items():
            room = r - sum(e)
            for j in range(room + 1):
                if factor[j].is_zero():
                    continue
                e2 = e[:i] + (e[i] + j,) + e[i + 1:]
                v = c * factor[j]
                new[e2] = new[e2] + v if e2 in new else v
        poly = new
    total = GeneratorPoly(l)
    for e, c in sorted(poly.items()):
        if sum(e) != r:
            continue
        w = ring.integrate(e)
        if w:
            total = total + c * w
    return total


def toric_form_cohomological(fan: Fan, deg: DegreeFunction, prec: int):
    return toric_form_generator_poly(fan, deg).to_series(prec)

"""Hecke, diamond, Fricke and level-raising operators.

U_p and V_p act on q-expansions; the diamond and Fricke operators act on
generator coordinates, where they are relabelings and a finite Fourier
transform respectively.  T_p evaluates a generator polynomial to a series and
combines the two.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, gcd

from torimod.arith.cyclotomic import CycElem, cyc_embed
from torimod.arith.qseries import QSeries
from torimod.errors import BadResidue, NotCoprime, SmallLevel, WrongWeight
from torimod.forms.lattice_sum import toric_form_lattice_sum
from torimod.forms.membership import express_in_generators, sturm_bound
from torimod.generators import Gen, GeneratorPoly, s_symbol
from torimod.geometry.fan import DegreeFunction, Fan
from torimod.geometry.lattice import primitive, superlattices


def u_p(f: QSeries, p: int) -> QSeries:
    """sum_{p | n} a_n q^{n/p}."""
    return f.extract(p)


def v_p(f: QSeries, p: int) -> QSeries:
    """sum_n a_n q^{np}."""
    return f.substitute(p)


def _require_coprime(p: int, l: int) -> None:
    if gcd(p, l) != 1:
        raise NotCoprime(f"{p} and the level {l} are not coprime")


def diamond(g: GeneratorPoly, p: int) -> GeneratorPoly:
    """Relabel s_{a/l}^(k) -> s_{pa/l}^(k); r̂^(k) is fixed."""
    _require_coprime(p, g.l)

    def image(sym: Gen) -> GeneratorPoly:
        if sym.kind == "r":
            return GeneratorPoly.symbol(g.l, sym)
        return GeneratorPoly.symbol(g.l, s_symbol(p * sym.a, g.l, sym.k))

    return g.map_symbols(image)


def _weight_of(g: GeneratorPoly, weight: int) -> None:
    if weight < 1:
        raise WrongWeight("Hecke operators here act in weight equal to a rank >= 1")
    if not g.is_zero() and (not g.is_homogeneous() or g.weight != weight):
        raise WrongWeight(f"polynomial has weights {sorted(g.weights())}, expected {weight}")


def t_p(g: GeneratorPoly, p: int, weight: int, prec: int) -> QSeries:
    """T_p = U_p + p^(r-1) diamond_p V_p, for p prime to the level."""
    _require_coprime(p, g.l)
    _weight_of(g, weight)
    head = u_p(g.to_series(p * prec), p)
    tail = v_p(diamond(g, p).to_series(prec), p).truncate(prec)
    return head + tail * p ** (weight - 1)


def hecke(g: GeneratorPoly, p: int, weight: int, prec: int) -> QSeries:
    """T_p when p is prime to the level, U_p alone when p divides it."""
    if g.l % p == 0:
        _weight_of(g, weight)
        return u_p(g.to_series(p * prec), p)
    return t_p(g, p, weight, prec)


# the sublattice side of the Hecke identity ---------------------------------------

def fan_in_superlattice(fan: Fan, deg: DegreeFunction, S) -> tuple[Fan, DegreeFunction]:
    """The same fan written in a basis of S, carrying p * deg.

    A ray d becomes the primitive S-vector on its ray, y/g with y the
    S-coordinates of d and g in {1, p}; since that vector is the point d/g,
    p * deg takes the value p a / (g l) there.
    """
    p = S.p
    rays, vals = [], []
    for d, a in zip(fan.rays, deg.values):
        y = [int(x) for x in S.to_coordinates(d)]
        g = gcd(*y)
        rays.append(primitive(y))
        vals.append(p * a // g)
    fanS = Fan(rays, fan.max_cones)
    return fanS, DegreeFunction(fanS, deg.l, vals)


def correction_coefficient(p: int, r: int) -> Fraction:
    """(p - p^(r-1)) / (p - 1)."""
    return Fraction(p - p ** (r - 1), p - 1)


def sublattice_side(fan: Fan, deg: DegreeFunction, p: int, prec: int) -> QSeries:
    """sum_S f_{S, p deg} + (p - p^(r-1))/(p - 1) f_{N, deg}."""
    _require_coprime(p, deg.l)
    total = QSeries.zero(deg.l, prec)
    for S in superlattices(fan.rank, p):
        fanS, degS = fan_in_superlattice(fan, deg, S)
        total = total + toric_form_lattice_sum(fanS, degS, prec)
    c = correction_coefficient(p, fan.rank)
    if c:
        total = total + toric_form_lattice_sum(fan, deg, prec) * c
    return total


# Fricke ---------------------------------------------------------------------------

def fricke_s1(a: int, l: int) -> GeneratorPoly:
    """(1/l) sum_{j=1}^{l-1} zeta^{-ja} s_{j/l}^(1), the weight-one Fricke image of s_{a/l}^(1)."""
    if l <= 4:
        raise SmallLevel("the Fricke action is implemented for l >= 5")
    if a % l == 0:
        raise BadResidue(f"residue {a} is divisible by the level {l}")
    out = GeneratorPoly(l)
    for j in range(1, l):
        out = out + GeneratorPoly.s(j, l) * (CycElem.root_of_unity(l, -j * a) * Fraction(1, l))
    return out


def fricke(g: GeneratorPoly) -> GeneratorPoly:
    """Extend fricke_s1 linearly on weight-one polynomials in the s^(1)."""
    def image(sym: Gen) -> GeneratorPoly:
        if sym.kind != "s" or sym.k != 1:
            raise WrongWeight("the Fricke map is defined here on the s^(1) only")
        return fricke_s1(sym.a, g.l)

    return g.map_symbols(image)


def fricke_direct_series(a: int, l: int, prec: int) -> QSeries:
    """C - sum_{n>=1} q^{a+nl}/(1-q^{a+nl}) + sum_{n>=0} q^{-a+nl}/(1-q^{-a+nl}) with C = a/l + 1/2.

    Here 1 <= a <= l-1; the n = 0 term of the second sum is -1/(1 - q^a), which
    brings the constant term down to a/l - 1/2.
    """
    a %= l
    terms: dict[int, int] = {0: 0}
    for n in range(1, prec // l + 2):
        e = a + n * l
        for j in range(1, prec // e + 1):
            terms[e * j] = terms.get(e * j, 0) - 1
    for n in range(0, prec // l + 2):
        e = n * l - a
        if e > 0:
            for j in range(1, prec // e + 1):
                terms[e * j] = terms.get(e * j, 0) + 1
    # n = 0: q^{-a}/(1 - q^{-a}) = -sum_{j >= 0} q^{aj}
    for j in range(0, prec // a + 1):
        terms[a * j] = terms.get(a * j, 0) - 1
    const = Fraction(a, l) + Fraction(1, 2)
    series = QSeries.from_dict(l, {n: Fraction(c) for n, c in terms.items()}, prec)
    return series + const


# level raising -----------------------------------------------------------------------

def _is_linear_s1(g: GeneratorPoly) -> bool:
    return all(len(m) == 1 and m[0][1] == 1 and m[0][0].kind == "s" and m[0][0].k == 1 for m in g.terms)


def level_raise(g: GeneratorPoly, p: int) -> GeneratorPoly:
    """g(p tau) written in generators of level p l."""
    l, L = g.l, p * g.l
    if not g.terms:
        return GeneratorPoly(L)
    if set(g.terms) == {()}:
        return GeneratorPoly.constant(L, cyc_embed(g.terms[()], L))
    if _is_linear_s1(g):
        out = GeneratorPoly(L)
        for m, c in g.terms.items():
            a = m[0][0].a
            image = GeneratorPoly(L)
            for k in range(p):
                image = image + GeneratorPoly.s(a + k * l, L)
            out = out + image * (cyc_embed(c, L) * Fraction(1, p))
        return out
    w = g.weight
    if w is None:
        raise WrongWeight("level raising needs a homogeneous polynomial")
    need = sturm_bound(w, L)
    prec = ceil(need / p) + 2
    series = v_p(g.to_series(prec), p)
    return express_in_generators(series, w, L)

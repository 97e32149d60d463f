"""The generator series s_{a/l}^(k) and r̂^(k) and polynomials in them.

Both families come from the Jacobi product for theta.  Writing x = e^{2 pi i z}
and D = x d/dx,

    D log theta = 1/2 + 1/(x - 1) - sum_n q^n x/(1 - q^n x) + sum_n q^n x^{-1}/(1 - q^n x^{-1}),

so s^(k) is D^{k-1} of this at x = zeta^a, minus r̂^(k), and r̂^(k) is the same
construction at z = 0 with the pole of the trigonometric part removed.  The
q^d coefficients are divisor sums; the constants come from a formal series
in t with x = zeta^a e^t.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import NamedTuple

import numpy as np

from torimod import cache
from torimod.arith.cyclotomic import CycElem
from torimod.arith.formal import FormalSeries, bernoulli
from torimod.arith.qseries import QSeries
from torimod.errors import (BadResidue, BadResidues, IncompatibleLevels, NotInRing, OddOrder,
                            ReductionNotFound)


class Gen(NamedTuple):
    """A generator symbol: ("s", a, k) for s_{a/l}^(k) or ("r", 0, k) for r̂^(k)."""

    kind: str
    a: int
    k: int

    @property
    def weight(self) -> int:
        return self.k

    def label(self, l: int) -> str:
        if self.kind == "r":
            return f"r^({self.k})"
        return f"s_{{{self.a}/{l}}}^({self.k})"


def s_symbol(a: int, l: int, k: int = 1) -> Gen:
    if a % l == 0:
        raise BadResidue(f"residue {a} is divisible by the level {l}")
    if k < 1:
        raise ValueError("order k must be at least 1")
    return Gen("s", a % l, k)


def r_symbol(k: int) -> Gen:
    if k < 2 or k % 2:
        raise OddOrder(f"r^({k}) vanishes identically; only even k >= 2 are represented")
    return Gen("r", 0, k)


# series ---------------------------------------------------------------------

_memory: dict[tuple, QSeries] = {}


def _cached(key: tuple, prec: int, compute) -> QSeries:
    have = _memory.get(key)
    if have is not None and have.prec >= prec:
        return have.truncate(prec)
    disk_key = "_".join(str(x) for x in key) + f"_p{prec}"
    series = cache.load(disk_key)
    if series is None:
        series = compute()
        cache.store(disk_key, series)
    if have is None or series.prec > have.prec:
        _memory[key] = series
    return series


def clear_memory_cache() -> None:
    _memory.clear()


def s_constant(a: int, l: int, k: int) -> CycElem:
    """Constant term of s_{a/l}^(k)."""
    z = CycElem.root_of_unity(l, a)
    if k == 1:
        return Fraction(1, 2) + (z - 1).inverse()
    # 1/(zeta^a e^t - 1) as a series in t
    den = [z * Fraction(1, factorial(n)) for n in range(k)]
    den[0] = den[0] - 1
    inv = FormalSeries(den, k - 1, CycElem.zero(l), CycElem.one(l)).inverse()
    c = inv[k - 1] * factorial(k - 1)
    if k % 2 == 0:
        c = c - bernoulli(k) / k
    return c


def s_series(a: int, l: int, k: int, prec: int) -> QSeries:
    """q-expansion of s_{a/l}^(k) over Q(zeta_l) through q^prec."""
    sym = s_symbol(a, l, k)
    a = sym.a

    def compute():
        rows = np.zeros((prec + 1, l), dtype=object)
        rows[:, :] = 0
        sign = 1 if k % 2 == 0 else -1
        for j in range(1, prec + 1):
            w = j ** (k - 1)
            rows[j::j, (a * j) % l] -= w
            rows[j::j, (-a * j) % l] -= sign * w
            if k % 2 == 0:
                rows[j::j, 0] += 2 * w
        series = QSeries.from_group_ring(l, rows)
        const = s_constant(a, l, k)
        return QSeries(l, 0, (const,) + series.coeffs[1:], prec)

    return _cached(("s", l, a, k), prec, compute)


def r_constant(k: int) -> Fraction:
    if k < 2 or k % 2:
        raise OddOrder(f"r^({k}) vanishes identically; only even k >= 2 are represented")
    return bernoulli(k) / k


def r_series(k: int, prec: int) -> QSeries:
    """q-expansion of r̂^(k) = (2 pi i)^{-k} r^(k); rational coefficients (level 1)."""
    const = r_constant(k)

    def compute():
        coeffs = [0] * (prec + 1)
        for j in range(1, prec + 1):
            w = j ** (k - 1)
            for d in range(j, prec + 1, j):
                coeffs[d] -= 2 * w
        coeffs[0] = const
        return QSeries(1, 0, coeffs, prec)

    return _cached(("r", k), prec, compute)


def symbol_series(sym: Gen, l: int, prec: int) -> QSeries:
    if sym.kind == "r":
        return r_series(sym.k, prec).embed(l)
    return s_series(sym.a, l, sym.k, prec)


def relation_coefficient(l: int, residues, prec: int) -> QSeries:
    """Coefficient of t^N in exp(sum_{k>=1} t^k/k! sum_j s_{a_j/l}^(k)), N = len(residues) - 1."""
    residues = list(residues)
    for a in residues:
        if a % l == 0:
            raise BadResidue(f"residue {a} is divisible by the level {l}")
    if sum(residues) % l:
        raise BadResidues(f"residues {residues} do not sum to 0 mod {l}")
    N = len(residues) - 1
    zero = QSeries.zero(l, prec)
    terms = [zero]
    for k in range(1, N + 1):
        total = zero
        for a in residues:
            total = total + s_series(a, l, k, prec)
        terms.append(total * Fraction(1, factorial(k)))
    ex = FormalSeries(terms, N, zero, QSeries.constant(l, 1, prec)).exp()
    return ex[N]


# polynomials in the generators ---------------------------------------------------

Monomial = tuple  # sorted tuple of (Gen, exponent)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    exps: dict[Gen, int] = dict(m1)
    for g, e in m2:
        exps[g] = exps.get(g, 0) + e
    return tuple(sorted(exps.items()))


def mono_weight(m: Monomial) -> int:
    return sum(g.k * e for g, e in m)


class GeneratorPoly:
    """Polynomial in generator symbols with coefficients in Q(zeta_l)."""

    __slots__ = ("l", "terms")

    def __init__(self, l: int, terms: dict | None = None):
        self.l = l
        clean = {}
        for m, c in (terms or {}).items():
            c = _as_coeff(l, c)
            if not c.is_zero():
                clean[m] = c
        self.terms = clean

    @classmethod
    def constant(cls, l: int, c) -> "GeneratorPoly":
        return cls(l, {(): c})

    @classmethod
    def symbol(cls, l: int, sym: Gen) -> "GeneratorPoly":
        return cls(l, {((sym, 1),): 1})

    @classmethod
    def s(cls, a: int, l: int, k: int = 1) -> "GeneratorPoly":
        return cls.symbol(l, s_symbol(a, l, k))

    @classmethod
    def r(cls, l: int, k: int) -> "GeneratorPoly":
        return cls.symbol(l, r_symbol(k))

    # ring structure ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, GeneratorPoly):
            return self.l == other.l and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.l, frozenset(self.terms.items())))

    def _coerce(self, other) -> "GeneratorPoly | None":
        if isinstance(other, GeneratorPoly):
            if other.l != self.l:
                raise IncompatibleLevels(f"generator polynomials at levels {self.l} and {other.l}")
            return other
        if isinstance(other, (int, Fraction, CycElem)):
            return GeneratorPoly.constant(self.l, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return GeneratorPoly(self.l, out)

    __radd__ = __add__

    def __neg__(self):
        return GeneratorPoly(self.l, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycElem)):
            c = _as_coeff(self.l, other)
            return GeneratorPoly(self.l, {m: v * c for m, v in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return GeneratorPoly(self.l, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = GeneratorPoly.constant(self.l, 1)
        for _ in range(n):
            out = out * self
        return out

    # structure --------------------------------------------------------
    def weights(self) -> set[int]:
        return {mono_weight(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    @property
    def weight(self) -> int | None:
        """Common weight of all monomials; None for the zero polynomial or mixed weights."""
        w = self.weights()
        return next(iter(w)) if len(w) == 1 else None

    def symbols(self) -> set[Gen]:
        return {g for m in self.terms for g, _ in m}

    def map_symbols(self, fn) -> "GeneratorPoly":
        """Substitute each symbol g by the polynomial fn(g)."""
        out = GeneratorPoly(self.l)
        images: dict[Gen, GeneratorPoly] = {}
        for m, c in self.terms.items():
            term = GeneratorPoly.constant(self.l, c)
            for g, e in m:
                if g not in images:
                    images[g] = fn(g)
                term = term * images[g] ** e
            out = out + term
        return out

    def to_series(self, prec: int) -> QSeries:
        total = QSeries.zero(self.l, prec)
        powers: dict[tuple[Gen, int], QSeries] = {}

        def power(g, e):
            if (g, e) not in powers:
                base = symbol_series(g, self.l, prec)
                powers[(g, e)] = base if e == 1 else power(g, e - 1) * base
            return powers[(g, e)]

        for m, c in sorted(self.terms.items(), key=lambda t: t[0]):
            s = QSeries.constant(self.l, c, prec)
            for g, e in m:
                s = s * power(g, e)
            total = total + s
        return total

    # output -----------------------------------------------------------
    def table(self) -> list[dict]:
        rows = []
        for m, c in sorted(self.terms.items(), key=lambda t: t[0]):
            rows.append({"monomial": [[g.label(self.l), e] for g, e in m],
                         "symbols": [[g.kind, g.a, g.k, e] for g, e in m],
                         "coeff": c.to_json()})
        return rows

    def to_json(self) -> dict:
        return {"level": self.l, "weight": self.weight, "terms": self.table()}

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorPoly":
        terms = {}
        for row in obj["terms"]:
            m = tuple(sorted((Gen(kind, a, k), e) for kind, a, k, e in row["symbols"]))
            terms[m] = CycElem.from_json(row["coeff"])
        return cls(obj["level"], terms)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: t[0]):
            mono = "·".join(g.label(self.l) + (f"^{e}" if e > 1 else "") for g, e in m)
            coef = c.pretty()
            if not mono:
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            elif coef == "−1":
                parts.append("−" + mono)
            elif c.is_rational():
                parts.append(f"{coef}·{mono}")
            else:
                parts.append(f"({coef})·{mono}")
        out = parts[0]
        for part in parts[1:]:
            out += f" − {part[1:]}" if part.startswith("−") else f" + {part}"
        return out

    def __repr__(self):
        return f"GeneratorPoly(l={self.l}, {self.pretty()})"


def _as_coeff(l: int, c) -> CycElem:
    if isinstance(c, CycElem):
        if c.L == l:
            return c
        if c.L == 1:
            return CycElem.rational(l, c.rational_value())
        raise IncompatibleLevels(f"coefficient in Q(zeta_{c.L}) for a level-{l} polynomial")
    return CycElem.rational(l, c)


def reduce_to_s1(sym: Gen, l: int, check_prec: int | None = None) -> GeneratorPoly:
    """Write a generator of weight k as a weight-k polynomial in the s_{b/l}^(1)."""
    from torimod.forms.membership import express_in_generators, sturm_bound

    if l < 5:
        raise ValueError("reduction to weight-one generators needs l >= 5")
    if sym.kind == "s" and sym.k == 1:
        return GeneratorPoly.symbol(l, sym)
    prec = check_prec or 2 * sturm_bound(sym.k, l) + 10
    series = symbol_series(sym, l, prec)
    try:
        return express_in_generators(series, sym.k, l)
    except NotInRing as exc:
        raise ReductionNotFound(f"{sym.label(l)} has no weight-one expression: {exc}") from exc

"""Exact arithmetic in the cyclotomic field Q(zeta_L).

An element is stored as an integer coefficient vector of length phi(L) over
the power basis 1, zeta, ..., zeta^(phi-1) together with one positive common
denominator.  Products are reduced modulo the L-th cyclotomic polynomial, so
the representation is canonical and every nonzero element is invertible.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

import numpy as np

from torimod.errors import DivisionByZero, IncompatibleLevels

_SUPER = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic; division is exact by construction
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("inexact cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(L: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the L-th cyclotomic polynomial."""
    if L < 1:
        raise ValueError("cyclotomic level must be positive")
    poly = [-1] + [0] * (L - 1) + [1]
    for d in divisors(L)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


class _Reducer:
    """Cached residues x^j mod Phi_L."""

    _cache: dict[int, "_Reducer"] = {}

    def __init__(self, L: int):
        self.L = L
        self.phi = euler_phi(L)
        self.poly = cyclotomic_poly(L)
        self.powers: list[tuple[int, ...]] = []
        self._extend(max(L, 2 * self.phi))

    @classmethod
    def get(cls, L: int) -> "_Reducer":
        red = cls._cache.get(L)
        if red is None:
            red = cls._cache[L] = cls(L)
        return red

    def _extend(self, n: int) -> None:
        phi, poly = self.phi, self.poly
        if not self.powers:
            for j in range(phi):
                self.powers.append(tuple(1 if i == j else 0 for i in range(phi)))
        while len(self.powers) < n:
            prev = self.powers[-1]
            top = prev[-1]
            shifted = [0] + list(prev[:-1])
            if top:
                shifted = [s - top * c for s, c in zip(shifted, poly[:phi])]
            self.powers.append(tuple(shifted))

    def power(self, j: int) -> tuple[int, ...]:
        j %= self.L
        return self.powers[j]

    def reduce(self, coeffs: list[int]) -> list[int]:
        """Reduce an integer polynomial of arbitrary degree modulo Phi_L."""
        phi = self.phi
        if len(coeffs) <= phi:
            return list(coeffs) + [0] * (phi - len(coeffs))
        if len(coeffs) > len(self.powers):
            self._extend(len(coeffs))
        out = list(coeffs[:phi])
        powers = self.powers
        for i in range(phi, len(coeffs)):
            c = coeffs[i]
            if c:
                for k, v in enumerate(powers[i]):
                    if v:
                        out[k] += c * v
        return out

    @property
    def group_ring_matrix(self) -> np.ndarray:
        """Integer L x phi matrix mapping sum_j c_j zeta^j to the power basis."""
        mat = getattr(self, "_grm", None)
        if mat is None:
            mat = np.array([self.power(j) for j in range(self.L)], dtype=np.int64)
            self._grm = mat
        return mat


def _content(nums, den: int) -> int:
    g = den
    for v in nums:
        if v:
            g = gcd(g, v)
            if g == 1:
                return 1
    return g


class CycElem:
    """Element of Q(zeta_L); immutable."""

    __slots__ = ("L", "num", "den")

    def __init__(self, L: int, num, den: int = 1, *, normalized: bool = False):
        self.L = L
        if normalized:
            self.num = num
            self.den = den
            return
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num = [-v for v in num]
            den = -den
        g = _content(num, den)
        if g != 1:
            num = [v // g for v in num]
            den //= g
        if not any(num):
            den = 1
        self.num = tuple(num)
        self.den = den

    # construction -----------------------------------------------------
    @classmethod
    def from_int_poly(cls, L: int, coeffs, den: int = 1) -> "CycElem":
        return cls(L, _Reducer.get(L).reduce(list(coeffs)), den)

    @classmethod
    def rational(cls, L: int, value) -> "CycElem":
        value = Fraction(value)
        phi = euler_phi(L)
        return cls(L, [value.numerator] + [0] * (phi - 1), value.denominator)

    @classmethod
    def zero(cls, L: int) -> "CycElem":
        return cls(L, (0,) * euler_phi(L), 1, normalized=True)

    @classmethod
    def one(cls, L: int) -> "CycElem":
        return cls.rational(L, 1)

    @classmethod
    def root_of_unity(cls, L: int, j: int) -> "CycElem":
        return cls(L, _Reducer.get(L).power(j), 1, normalized=True)

    @property
    def phi(self) -> int:
        return len(self.num)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def coeffs(self) -> list[Fraction]:
        return [Fraction(v, self.den) for v in self.num]

    # coercion ---------------------------------------------------------
    def _coerce(self, other) -> "CycElem | None":
        if isinstance(other, CycElem):
            if other.L == self.L:
                return other
            if other.L == 1:
                return CycElem.rational(self.L, Fraction(other.num[0], other.den))
            if self.L == 1:
                return None
            raise IncompatibleLevels(f"cannot combine Q(zeta_{self.L}) with Q(zeta_{other.L})")
        if isinstance(other, (int, Rational)):
            return CycElem.rational(self.L, other)
        return None

    def _lift_self(self, other: "CycElem") -> "CycElem":
        # self lives in Q; move it to other's field
        return CycElem.rational(other.L, Fraction(self.num[0], self.den))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, CycElem) and self.L == 1 and other.L != 1:
            return self._lift_self(other) + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return CycElem(self.L, [a + b for a, b in zip(self.num, o.num)], self.den)
        d1, d2 = self.den, o.den
        return CycElem(self.L, [a * d2 + b * d1 for a, b in zip(self.num, o.num)], d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.L, tuple(-v for v in self.num), self.den, normalized=True)

    def __sub__(self, other):
        if isinstance(other, CycElem) and self.L == 1 and other.L != 1:
            return self._lift_self(other) - other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CycElem) and self.L == 1 and other.L != 1:
            return other * self
        if isinstance(other, int):
            return CycElem(self.L, [v * other for v in self.num], self.den)
        if isinstance(other, Fraction):
            return CycElem(self.L, [v * other.numerator for v in self.num], self.den * other.denominator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.num, o.num
        if not any(a) or not any(b):
            return CycElem.zero(self.L)
        phi = len(a)
        if phi == 1:
            return CycElem(self.L, [a[0] * b[0]], self.den * o.den)
        prod = [0] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return CycElem(self.L, _Reducer.get(self.L).reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycElem":
        """Multiplicative inverse via extended Euclid against Phi_L."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_%d)" % self.L)
        if self.phi == 1:
            return CycElem(self.L, [self.den], self.num[0])
        a = _trim([Fraction(v) for v in self.num])
        m = _trim([Fraction(v) for v in cyclotomic_poly(self.L)])
        # invariant: s1 * a == r1 (mod m)
        r0, r1 = m, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_polysub(s0, _polymul(q, s1)))
        # r1 is a nonzero constant (Phi_L irreducible)
        c = r1[0]
        inv = [v / c for v in s1]
        den = 1
        for v in inv:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) * self.den for v in inv]
        return CycElem.from_int_poly(self.L, ints, den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, CycElem) and self.L == 1 and other.L != 1:
            return self._lift_self(other) * other.inverse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycElem.one(self.L)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycElem) and other.L != self.L:
            if self.L == 1 or other.L == 1:
                return self.is_rational() and other.is_rational() and (
                    Fraction(self.num[0], self.den) == Fraction(other.num[0], other.den))
            return False
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.den == o.den and self.num == o.num

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.L, self.num, self.den))

    # field maps -------------------------------------------------------
    def galois(self, k: int) -> "CycElem":
        """Apply zeta -> zeta^k (k coprime to L)."""
        if gcd(k, self.L) != 1:
            raise ValueError("Galois exponent must be coprime to the level")
        red = _Reducer.get(self.L)
        out = [0] * self.phi
        for j, c in enumerate(self.num):
            if c:
                for i, v in enumerate(red.power(j * k)):
                    out[i] += c * v
        return CycElem(self.L, out, self.den)

    def conjugate(self) -> "CycElem":
        return self.galois(-1)

    def to_complex(self) -> complex:
        z = np.exp(2j * np.pi / self.L)
        return complex(sum(c * z**i for i, c in enumerate(self.num)) / self.den)

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"L": self.L, "coeffs": [[f.numerator, f.denominator] for f in self.coeffs()]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycElem":
        return cyc_make(obj["L"], [Fraction(n, d) for n, d in obj["coeffs"]])

    def pretty(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs()):
            if c == 0:
                continue
            if i == 0:
                mono = ""
            elif i == 1:
                mono = f"ζ{self.L}"
            else:
                mono = f"ζ{self.L}" + str(i).translate(_SUPER)
            mag = abs(c)
            coef = "" if (mag == 1 and mono) else str(mag)
            terms.append(("-" if c < 0 else "+", coef + mono))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {'−' if sign == '-' else '+'} {body}"
        return out.replace("-", "−")

    def __repr__(self):
        return f"CycElem({self.L}, {self.pretty()})"


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p or [Fraction(0)]


def _polymul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _polysub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _polydivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


# public operations ------------------------------------------------------

def cyc_make(L: int, poly) -> CycElem:
    """Reduce a rational polynomial in zeta_L modulo Phi_L."""
    if L < 1:
        raise ValueError("level must be >= 1")
    fr = [Fraction(c) for c in poly] or [Fraction(0)]
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    return CycElem.from_int_poly(L, [int(c * den) for c in fr], den)


def cyc_inv(x: CycElem) -> CycElem:
    return x.inverse()


def cyc_embed(x: CycElem, L2: int) -> CycElem:
    """Image of x under Q(zeta_L) -> Q(zeta_L2), zeta_L -> zeta_L2^(L2/L)."""
    if L2 % x.L:
        raise IncompatibleLevels(f"{x.L} does not divide {L2}")
    step = L2 // x.L
    coeffs = [0] * (step * (x.phi - 1) + 1)
    for j, c in enumerate(x.num):
        coeffs[j * step] = c
    return CycElem.from_int_poly(L2, coeffs, x.den)


def group_ring_to_power_basis(L: int) -> np.ndarray:
    return _Reducer.get(L).group_ring_matrix


def reduce_int_poly(L: int, coeffs: list[int]) -> list[int]:
    return _Reducer.get(L).reduce(coeffs)

"""Truncated Laurent series in q with coefficients in Q(zeta_L).

A :class:`QSeries` knows the coefficient of q^n exactly for every
``n <= prec`` and nothing beyond.  All operations carry precision
pessimistically, and comparison is three-valued (see :class:`Verdict`).
"""
from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd
from numbers import Rational

import numpy as np

from torimod.arith.cyclotomic import (_SUPER, CycElem, cyc_embed, euler_phi, group_ring_to_power_basis,
                                     reduce_int_poly)
from torimod.errors import IncompatibleLevels, InsufficientPrecision, NotAUnit


class Verdict(enum.Enum):
    EQUAL = "equal-to-precision"
    UNEQUAL = "unequal"
    INSUFFICIENT = "insufficient-precision"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _int_rows(coeffs: list[CycElem]) -> tuple[list[list[int]], int]:
    den = 1
    for c in coeffs:
        if c.den != 1:
            den = _lcm(den, c.den)
    if den == 1:
        return [list(c.num) for c in coeffs], 1
    return [[v * (den // c.den) for v in c.num] for c in coeffs], den


def _kron_mul(rows_a, rows_b, phi: int, out_len: int) -> list[list[int]]:
    """Product of two dense q-series with integer polynomial coefficients.

    Each coefficient row (degree < phi in zeta) is packed into a fixed-width
    byte slot of one big integer; the product of the two integers then holds
    every (q, zeta) coefficient of the product, unreduced, in its own slot.
    """
    width = 2 * phi - 1
    max_a = max((abs(v) for r in rows_a for v in r), default=0)
    max_b = max((abs(v) for r in rows_b for v in r), default=0)
    if max_a == 0 or max_b == 0:
        return [[0] * width for _ in range(out_len)]
    bound = max_a * max_b * min(len(rows_a), len(rows_b)) * phi
    nbytes = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)

    def pack(rows):
        buf = bytearray()
        pad = (half).to_bytes(nbytes, "little") * (width - phi)
        for r in rows:
            for v in r:
                buf += (v + half).to_bytes(nbytes, "little")
            buf += pad
        n_slots = len(rows) * width
        offset = int.from_bytes((half).to_bytes(nbytes, "little") * n_slots, "little")
        return int.from_bytes(bytes(buf), "little") - offset

    prod = pack(rows_a) * pack(rows_b)
    n_slots = out_len * width
    offset = int.from_bytes((half).to_bytes(nbytes, "little") * n_slots, "little")
    mask_total = 8 * nbytes * n_slots
    value = (prod + offset) & ((1 << mask_total) - 1)
    raw = value.to_bytes(nbytes * n_slots, "little")
    out = []
    pos = 0
    for _ in range(out_len):
        row = []
        for _ in range(width):
            row.append(int.from_bytes(raw[pos:pos + nbytes], "little") - half)
            pos += nbytes
        out.append(row)
    return out


class QSeries:
    """Immutable truncated q-series over Q(zeta_L).

    ``coeffs[i]`` is the coefficient of ``q**(val + i)``; the list always runs
    through ``q**prec`` (it is empty when ``prec < val``).
    """

    __slots__ = ("L", "val", "coeffs", "prec")

    def __init__(self, L: int, val: int, coeffs, prec: int):
        coeffs = list(coeffs)
        need = prec - val + 1
        if need < 0:
            need = 0
        if len(coeffs) > need:
            coeffs = coeffs[:need]
        elif len(coeffs) < need:
            coeffs = coeffs + [CycElem.zero(L)] * (need - len(coeffs))
        self.L = L
        self.val = val
        self.coeffs = tuple(_as_cyc(L, c) for c in coeffs)
        self.prec = prec

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, L: int, prec: int) -> "QSeries":
        return cls(L, 0, [], prec)

    @classmethod
    def constant(cls, L: int, c, prec: int) -> "QSeries":
        return cls(L, 0, [c], prec)

    @classmethod
    def from_dict(cls, L: int, terms: dict[int, object], prec: int) -> "QSeries":
        keys = [n for n in terms if n <= prec]
        val = min(keys, default=0)
        val = min(val, 0)
        coeffs = [CycElem.zero(L)] * (prec - val + 1)
        for n in keys:
            coeffs[n - val] = coeffs[n - val] + _as_cyc(L, terms[n])
        return cls(L, val, coeffs, prec)

    @classmethod
    def from_group_ring(cls, L: int, rows, val: int = 0, den: int = 1) -> "QSeries":
        """Series whose q^(val+i) coefficient is sum_j rows[i][j] zeta^j / den.

        Precision is the last row's exponent.
        """
        R = group_ring_to_power_basis(L)
        arr = np.asarray(rows)
        if arr.dtype != object and np.abs(arr).max(initial=0) < (1 << 62) // (arr.shape[1] * 4 + 1):
            power = arr.astype(np.int64) @ R
        else:
            power = arr.astype(object) @ R.astype(object)
        coeffs = [CycElem(L, [int(v) for v in row], den) for row in power]
        return cls(L, val, coeffs, val + len(coeffs) - 1)

    @classmethod
    def geometric(cls, L: int, ratio, step: int, prec: int) -> "QSeries":
        """sum_{k>=0} ratio^k q^(step k), for step >= 1."""
        ratio = _as_cyc(L, ratio)
        terms, power = {}, CycElem.one(L)
        for k in range(prec // step + 1):
            terms[k * step] = power
            power = power * ratio
        return cls.from_dict(L, terms, prec)

    # access -----------------------------------------------------------
    def __getitem__(self, n: int) -> CycElem:
        return self.coefficient(n)

    def coefficient(self, n: int) -> CycElem:
        if n > self.prec:
            raise InsufficientPrecision(f"q^{n} requested but series known only through q^{self.prec}")
        if n < self.val:
            return CycElem.zero(self.L)
        return self.coeffs[n - self.val]

    def valuation(self) -> int:
        """Exponent of the first nonzero known coefficient (prec + 1 if none)."""
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return self.val + i
        return self.prec + 1

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes (zero to precision)."""
        return all(c.is_zero() for c in self.coeffs)

    def items(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield self.val + i, c

    def _normalized(self) -> "QSeries":
        v = self.valuation()
        if v == self.val or v > self.prec:
            return self
        return QSeries(self.L, v, self.coeffs[v - self.val:], self.prec)

    # coercion ---------------------------------------------------------
    def _coerce(self, other) -> "QSeries | None":
        if isinstance(other, QSeries):
            if other.L == self.L:
                return other
            if other.L == 1:
                return other.embed(self.L)
            if self.L == 1:
                return None
            raise IncompatibleLevels(f"series over Q(zeta_{self.L}) and Q(zeta_{other.L})")
        if isinstance(other, (int, Rational, CycElem)):
            return QSeries.constant(self.L, other, self.prec)
        return None

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, QSeries) and self.L == 1 and other.L != 1:
            return self.embed(other.L) + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = min(self.prec, o.prec)
        val = min(self.val, o.val)
        zero = CycElem.zero(self.L)
        out = [zero] * max(prec - val + 1, 0)
        for s in (self, o):
            for i, c in enumerate(s.coeffs):
                n = s.val + i
                if n > prec:
                    break
                if not c.is_zero():
                    out[n - val] = out[n - val] + c
        return QSeries(self.L, val, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.L, self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = _as_cyc(self.L, c) if not isinstance(c, (int, Fraction)) else c
        return QSeries(self.L, self.val, [x * c for x in self.coeffs], self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Rational, CycElem)):
            if isinstance(other, CycElem) and other.L != self.L and other.L != 1:
                if self.L == 1:
                    return self.embed(other.L).scale(other)
                raise IncompatibleLevels("scalar from a different cyclotomic field")
            return self.scale(other)
        if isinstance(other, QSeries) and self.L == 1 and other.L != 1:
            return self.embed(other.L) * other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._normalized(), o._normalized()
        va, vb = a.valuation(), b.valuation()
        prec = min(a.prec + vb, b.prec + va)
        if va > a.prec or vb > b.prec:
            return QSeries.zero(self.L, prec)
        val = va + vb
        na = min(len(a.coeffs), prec - val + 1)
        nb = min(len(b.coeffs), prec - val + 1)
        if na <= 0 or nb <= 0:
            return QSeries.zero(self.L, prec)
        out_len = prec - val + 1
        phi = euler_phi(self.L)
        rows_a, den_a = _int_rows(list(a.coeffs[:na]))
        rows_b, den_b = _int_rows(list(b.coeffs[:nb]))
        raw = _kron_mul(rows_a, rows_b, phi, na + nb - 1)
        den = den_a * den_b
        out = []
        for k in range(out_len):
            if k < len(raw):
                out.append(CycElem(self.L, reduce_int_poly(self.L, raw[k]), den))
            else:
                out.append(CycElem.zero(self.L))
        return QSeries(self.L, val, out, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        result = QSeries.constant(self.L, 1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def invert(self) -> "QSeries":
        """Inverse of a series with nonzero leading coefficient."""
        a = self._normalized()
        v = a.valuation()
        if v > a.prec:
            raise NotAUnit("series is zero to its precision")
        rel = a.prec - v
        c0inv = a.coeffs[0].inverse()
        # Newton iteration on the unit part, doubling relative precision
        unit = QSeries(self.L, 0, a.coeffs, rel)
        inv = QSeries.constant(self.L, c0inv, 0)
        known = 0
        while known < rel:
            known = min(2 * known + 1, rel)
            u = unit.truncate(known)
            inv = QSeries(self.L, 0, inv.coeffs, known)
            inv = inv * (2 - u * inv)
            inv = inv.truncate(known)
        return QSeries(self.L, -v, inv.coeffs, rel - v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, CycElem):
            return self.scale(other.inverse())
        return self * other.invert()

    # operators on exponents -------------------------------------------
    def truncate(self, prec: int) -> "QSeries":
        if prec >= self.prec:
            return self
        return QSeries(self.L, self.val, self.coeffs, prec)

    def substitute(self, p: int) -> "QSeries":
        """q -> q^p; precision multiplies by p."""
        if p < 1:
            raise ValueError("substitution exponent must be positive")
        terms = {p * n: c for n, c in self.items()}
        return QSeries.from_dict(self.L, terms, p * self.prec)

    def extract(self, p: int) -> "QSeries":
        """sum_{p | n} a_n q^(n/p); precision floor(prec / p)."""
        if p < 1:
            raise ValueError("extraction step must be positive")
        prec = self.prec // p
        terms = {n // p: c for n, c in self.items() if n % p == 0 and n // p <= prec}
        return QSeries.from_dict(self.L, terms, prec)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k."""
        return QSeries(self.L, self.val + k, self.coeffs, self.prec + k)

    def embed(self, L2: int) -> "QSeries":
        if L2 == self.L:
            return self
        return QSeries(L2, self.val, [cyc_embed(c, L2) for c in self.coeffs], self.prec)

    def map_coefficients(self, fn) -> "QSeries":
        return QSeries(self.L, self.val, [fn(c) for c in self.coeffs], self.prec)

    # comparison -------------------------------------------------------
    def compare(self, other, upto: int | None = None) -> Verdict:
        """Three-valued comparison.

        UNEQUAL if some coefficient known on both sides differs;
        INSUFFICIENT if ``upto`` exceeds the common precision and no
        difference was seen; EQUAL otherwise.
        """
        o = self._coerce(other) if not (isinstance(other, QSeries) and self.L == 1) else other
        if isinstance(o, QSeries) and o.L != self.L:
            return o.compare(self, upto)
        prec = min(self.prec, o.prec)
        hi = prec if upto is None else min(prec, upto)
        lo = min(self.val, o.val)
        for n in range(lo, hi + 1):
            if self.coefficient(n) != o.coefficient(n):
                return Verdict.UNEQUAL
        if upto is not None and upto > prec:
            return Verdict.INSUFFICIENT
        return Verdict.EQUAL

    def first_difference(self, other) -> int | None:
        prec = min(self.prec, other.prec)
        for n in range(min(self.val, other.val), prec + 1):
            if self.coefficient(n) != other.coefficient(n):
                return n
        return None

    def identical(self, other) -> bool:
        """Same field, same precision, same known coefficients."""
        if not isinstance(other, QSeries) or other.L != self.L or other.prec != self.prec:
            return False
        return self.compare(other) is Verdict.EQUAL

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        s = self._normalized()
        if s.valuation() > s.prec:
            s = QSeries(self.L, min(0, self.prec), [], self.prec)
        return {"L": s.L, "valuation": s.val, "prec": s.prec, "coeffs": [c.to_json() for c in s.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "QSeries":
        return cls(obj["L"], obj["valuation"], [CycElem.from_json(c) for c in obj["coeffs"]], obj["prec"])

    def pretty(self, max_terms: int | None = None) -> str:
        """Render as e.g. 1/2 + (1 − ζ5 + 2ζ5²)·q³ − q⁴ + O(q⁶)."""
        parts: list[tuple[str, str]] = []
        for n, c in self.items():
            qn = "" if n == 0 else "q" + ("" if n == 1 else str(n).translate(_SUPER))
            if c.is_rational():
                v = c.rational_value()
                mag = "" if abs(v) == 1 and qn else str(abs(v))
                parts.append(("−" if v < 0 else "+", mag + ("·" if mag and qn else "") + qn))
            else:
                parts.append(("+", f"({c.pretty()})" + ("·" + qn if qn else "")))
            if max_terms is not None and len(parts) >= max_terms:
                break
        tail = "O(q" + str(self.prec + 1).translate(_SUPER) + ")"
        if not parts:
            return tail
        out = ("−" if parts[0][0] == "−" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return f"{out} + {tail}"

    def __repr__(self):
        return f"QSeries(L={self.L}, {self.pretty(max_terms=6)})"


def _as_cyc(L: int, c) -> CycElem:
    if isinstance(c, CycElem):
        if c.L == L:
            return c
        if c.L == 1:
            return CycElem.rational(L, c.rational_value())
        if L % c.L == 0:
            return cyc_embed(c, L)
        raise IncompatibleLevels(f"coefficient over Q(zeta_{c.L}) in a series over Q(zeta_{L})")
    return CycElem.rational(L, c)

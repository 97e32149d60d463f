"""Truncated power series in an auxiliary variable t over an arbitrary ring.

Coefficients may be anything supporting ``+``, ``-``, ``*`` and scaling by a
:class:`fractions.Fraction` (rationals, cyclotomic elements, q-series,
generator polynomials).  Only exp/log/inverse need the ring to contain Q.
"""
from __future__ import annotations

from fractions import Fraction

from torimod.errors import LogOfNonUnit, NotAUnit


class FormalSeries:
    """sum_{n=0}^{order} c_n t^n; everything above ``order`` is unknown."""

    __slots__ = ("coeffs", "order", "zero", "one")

    def __init__(self, coeffs, order: int, zero=0, one=1):
        coeffs = list(coeffs)[: order + 1]
        coeffs += [zero] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.order = order
        self.zero = zero
        self.one = one

    def _like(self, coeffs, order=None):
        return FormalSeries(coeffs, self.order if order is None else order, self.zero, self.one)

    def __getitem__(self, n: int):
        return self.coeffs[n] if 0 <= n <= self.order else self.zero

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return self._like(c)
        order = min(self.order, other.order)
        return self._like([self.coeffs[i] + other.coeffs[i] for i in range(order + 1)], order)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return self._like([c * s for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return self.scale(other)
        order = min(self.order, other.order)
        out = []
        for n in range(order + 1):
            acc = self.zero
            for k in range(n + 1):
                acc = acc + self.coeffs[k] * other.coeffs[n - k]
            out.append(acc)
        return self._like(out, order)

    def derivative(self):
        return self._like([self.coeffs[n] * n for n in range(1, self.order + 1)], self.order - 1)

    def exp(self):
        """exp of a series with zero constant term, via n e_n = sum k a_k e_{n-k}."""
        if not _is_zero(self.coeffs[0]):
            raise NotAUnit("exp needs a series with zero constant term")
        e = [self.one]
        for n in range(1, self.order + 1):
            acc = self.zero
            for k in range(1, n + 1):
                if not _is_zero(self.coeffs[k]):
                    acc = acc + self.coeffs[k] * e[n - k] * k
            e.append(acc * Fraction(1, n))
        return self._like(e)

    def log(self):
        """log of a series with constant term 1, via n l_n = n a_n - sum_{k<n} k l_k a_{n-k}."""
        c0 = self.coeffs[0]
        if not _is_one(c0):
            raise LogOfNonUnit("log needs a series with constant term 1")
        lg = [self.zero]
        for n in range(1, self.order + 1):
            acc = self.coeffs[n] * n
            for k in range(1, n):
                acc = acc - lg[k] * self.coeffs[n - k] * k
            lg.append(acc * Fraction(1, n))
        return self._like(lg)

    def inverse(self, inv0=None):
        """Multiplicative inverse; ``inv0`` is the inverse of the constant term."""
        c0 = self.coeffs[0]
        if inv0 is None:
            if _is_zero(c0):
                raise NotAUnit("constant term is zero")
            inv0 = Fraction(1) / c0 if isinstance(c0, (int, Fraction)) else c0.inverse()
        b = [inv0]
        for n in range(1, self.order + 1):
            acc = self.zero
            for k in range(1, n + 1):
                acc = acc + self.coeffs[k] * b[n - k]
            b.append(-(acc * inv0))
        return self._like(b)

    def __repr__(self):
        return f"FormalSeries({self.coeffs!r}, order={self.order})"


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


def _is_one(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 1
    return (x - 1).is_zero()


def exp_series(order: int) -> list[Fraction]:
    """Coefficients of e^t through t^order."""
    out, f = [], Fraction(1)
    for n in range(order + 1):
        out.append(f)
        f /= n + 1
    return out


def bernoulli(n: int) -> Fraction:
    """Bernoulli number with B_1 = -1/2."""
    return _bernoulli_table(n)[n]


_BERN: list[Fraction] = [Fraction(1)]


def _bernoulli_table(n: int) -> list[Fraction]:
    from math import comb

    while len(_BERN) <= n:
        m = len(_BERN)
        _BERN.append(-sum(comb(m + 1, k) * _BERN[k] for k in range(m)) / (m + 1))
    return _BERN

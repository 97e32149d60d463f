"""Floating-point theta-series oracle.

Only the verification suites and tests use this.  It sums
theta(z, tau) = (1/i) sum_n (-1)^n e^{pi i tau (n+1/2)^2} e^{2 pi i (n+1/2) z}
directly and never touches the exact pipeline, so agreement with the exact
q-expansions is an independent check of their constants and normalizations.
"""
from __future__ import annotations

import cmath
import math

from torimod.arith.qseries import QSeries


def theta_derivative(z: complex, tau: complex, k: int = 0, terms: int = 40) -> complex:
    """k-th z-derivative of theta(z, tau)."""
    total = 0j
    for n in range(-terms, terms + 1):
        h = n + 0.5
        total += (-1) ** n * cmath.exp(1j * math.pi * tau * h * h + 2j * math.pi * h * z) * (2j * math.pi * h) ** k
    return total / 1j


def s1_numeric(alpha: float, tau: complex) -> complex:
    """s_alpha^(1)(tau) = theta'(alpha) / (2 pi i theta(alpha))."""
    return theta_derivative(alpha, tau, 1) / (2j * math.pi * theta_derivative(alpha, tau, 0))


def r2_numeric(tau: complex) -> complex:
    """(2 pi i)^-2 d^2/dz^2 log(theta(z) / (z theta'(0))) at z = 0, i.e. theta'''(0) / (3 theta'(0) (2 pi i)^2)."""
    d1 = theta_derivative(0, tau, 1)
    d3 = theta_derivative(0, tau, 3)
    return d3 / (3 * d1 * (2j * math.pi) ** 2)


def evaluate(series: QSeries, tau: complex) -> complex:
    """Sum the known coefficients of a q-series at q = e^{2 pi i tau}."""
    q = cmath.exp(2j * math.pi * tau)
    return sum(c.to_complex() * q ** n for n, c in series.items())

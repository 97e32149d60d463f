"""Deciding whether a q-series lies in the ring generated by the s-series.

A weight-r candidate is matched against all weight-r monomials in the level's
generators by an exact linear solve over Q(zeta_l) on the coefficients of
q^0..q^B, B a Sturm-type bound; the solution is then checked against every
coefficient the input actually carries.
"""
from __future__ import annotations

import logging
from math import ceil

from torimod.arith.cyclotomic import CycElem
from torimod.arith.qseries import QSeries, Verdict
from torimod.errors import IncompatibleLevels, InsufficientPrecision, NotInRing
from torimod.generators import Gen, GeneratorPoly, s_symbol, symbol_series

log = logging.getLogger(__name__)


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def gamma1_index(l: int) -> int:
    """[SL_2(Z) : Gamma_1(l)] = l^2 prod_{p | l} (1 - 1/p^2)."""
    idx = l * l
    for p in prime_factors(l):
        idx = idx // (p * p) * (p * p - 1)
    return idx


def sturm_bound(weight: int, l: int) -> int:
    """Number of leading coefficients (minus one) that decide equality: ceil(r [SL2:G1(l)] / 12) + 1."""
    return ceil(weight * gamma1_index(l) / 12) + 1


def generator_set(l: int) -> list[Gen]:
    if l >= 5:
        return [s_symbol(b, l, 1) for b in range(1, l)]
    if l == 4:
        return [s_symbol(1, 4, 1), s_symbol(1, 4, 2)]
    if l == 3:
        return [s_symbol(1, 3, 1), s_symbol(1, 3, 3)]
    if l == 2:
        return [s_symbol(1, 2, 2), s_symbol(1, 2, 4)]
    raise IncompatibleLevels("there are no toric forms of level 1")


def monomials(gens: list[Gen], weight: int) -> list[tuple]:
    """Monomials of exact weight, lexicographic in the generator order."""
    out = []

    def rec(start, left, acc):
        if left == 0:
            exps: dict[Gen, int] = {}
            for g in acc:
                exps[g] = exps.get(g, 0) + 1
            out.append(tuple(sorted(exps.items())))
            return
        for j in range(start, len(gens)):
            if gens[j].k <= left:
                rec(j, left - gens[j].k, acc + [gens[j]])

    rec(0, weight, [])
    return out


def monomial_series(l: int, mono, prec: int) -> QSeries:
    s = QSeries.constant(l, 1, prec)
    for g, e in mono:
        s = s * symbol_series(g, l, prec) ** e
    return s


def solve_linear(rows: list[list], rhs: list, zero, one=None):
    """Solve rows . x = rhs over a field; free variables are 0.  None if inconsistent.

    Entries need only +, -, *, / and an ``is_zero`` method or comparison with 0.
    """
    def isz(x):
        return x.is_zero() if hasattr(x, "is_zero") else x == 0

    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    nrows = len(A)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not isz(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c] if not hasattr(A[r][c], "inverse") else A[r][c].inverse()
        A[r] = [x * inv if not isz(x) else x for x in A[r]]
        for i in range(nrows):
            if i != r and not isz(A[i][c]):
                f = A[i][c]
                A[i] = [x - f * y if not isz(y) else x for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not isz(A[i][ncols]):
            return None
    x = [zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = A[i][ncols]
    return x


def matrix_rank(rows: list[list]) -> int:
    if not rows:
        return 0
    zero = rows[0][0] * 0
    sol_rows = [list(r) for r in rows]
    # reuse the solver's elimination with a zero right-hand side
    A = [r + [zero] for r in sol_rows]

    def isz(x):
        return x.is_zero() if hasattr(x, "is_zero") else x == 0

    rank, ncols = 0, len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if not isz(A[i][c])), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = A[rank][c].inverse() if hasattr(A[rank][c], "inverse") else 1 / A[rank][c]
        A[rank] = [x * inv for x in A[rank]]
        for i in range(rank + 1, len(A)):
            if not isz(A[i][c]):
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
        if rank == len(A):
            break
    return rank


def express_in_generators(f: QSeries, weight: int, l: int, bound: int | None = None) -> GeneratorPoly:
    """Exact weight-r polynomial in the level-l generators whose series is f."""
    if f.L != l:
        if l % f.L:
            raise IncompatibleLevels(f"series over Q(zeta_{f.L}) cannot be expressed at level {l}")
        f = f.embed(l)
    B = sturm_bound(weight, l) if bound is None else bound
    if f.prec < B:
        raise InsufficientPrecision(f"series known through q^{f.prec}, need q^{B}")
    if f.valuation() < 0:
        raise NotInRing("series has negative powers of q")
    if weight == 0:
        c = f.coefficient(0)
        if QSeries.constant(l, c, f.prec).compare(f) is not Verdict.EQUAL:
            raise NotInRing("weight-0 input is not constant")
        return GeneratorPoly.constant(l, c)
    monos = monomials(generator_set(l), weight)
    cols = [monomial_series(l, m, B) for m in monos]
    rows = [[col.coefficient(n) for col in cols] for n in range(B + 1)]
    rhs = [f.coefficient(n) for n in range(B + 1)]
    log.debug("membership solve: level %d weight %d, %d x %d system", l, weight, B + 1, len(monos))
    x = solve_linear(rows, rhs, CycElem.zero(l))
    if x is None:
        raise NotInRing(f"no weight-{weight} combination of level-{l} generators matches q^0..q^{B}")
    poly = GeneratorPoly(l, {m: c for m, c in zip(monos, x)})
    if f.prec > B:
        check = poly.to_series(f.prec)
        if check.compare(f) is not Verdict.EQUAL:
            n = check.first_difference(f)
            raise NotInRing(f"solution from q^0..q^{B} disagrees with the input at q^{n}")
    return poly


def monomial_rank(l: int, weight: int, prec: int | None = None) -> int:
    """Rank over Q(zeta_l) of the coefficient matrix of all weight-r generator monomials."""
    B = sturm_bound(weight, l) if prec is None else prec
    monos = monomials(generator_set(l), weight)
    cols = [monomial_series(l, m, B) for m in monos]
    rows = [[col.coefficient(n) for col in cols] for n in range(B + 1)]
    return matrix_rank(rows)


def cusp_count_gamma1(N: int) -> int:
    from torimod.arith.cyclotomic import divisors, euler_phi

    if N <= 4:
        return {1: 1, 2: 2, 3: 2, 4: 3}[N]
    return sum(euler_phi(d) * euler_phi(N // d) for d in divisors(N)) // 2


def dim_modular_forms_gamma1(k: int, N: int) -> int:
    """dim M_k(Gamma_1(N)) for N >= 5 and even k >= 2 from the genus/cusp formula."""
    if N < 5 or k < 2 or k % 2:
        raise ValueError("formula implemented for N >= 5 and even k >= 2")
    mu = gamma1_index(N) // 2          # index of the image in PSL_2(Z)
    c = cusp_count_gamma1(N)
    g2 = 12 + mu - 6 * c               # 12 g, from g = 1 + mu/12 - c/2 (no elliptic points)
    assert g2 % 12 == 0
    g = g2 // 12
    return (k - 1) * (g - 1) + (k // 2) * c

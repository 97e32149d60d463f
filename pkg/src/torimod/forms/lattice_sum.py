"""Toric forms as alternating sums of continued lattice-point series.

For a complete simplicial fan and a dual vector m,

    r(q, m) = sum_C (-1)^codim(C) f_C(q, m),
    f_C(q, m) = sum_{p in Par(C)} zeta^{l deg p} q^{m.p} / prod_{i in C} (1 - zeta^{a_i} q^{m.d_i}),

and the toric form is the sum of r(q, m) over m.  Only finitely many m reach
below q^(prec+1): ord r(q, m) >= L(m) where

    L(m) = min_{n in S} m.n + sum_i max(0, -m.d_i),

with S the interior lattice points of the hull of subset sums of the rays.
L is concave and homogeneous on each cell of the hyperplane arrangement
{m.d_i = 0}, so on a cell it is bounded below by kappa * |m|_inf where kappa
is its minimum over the cell's extreme rays (scaled to sup-norm 1).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np
from scipy.spatial import ConvexHull

from torimod.arith.cyclotomic import CycElem, group_ring_to_power_basis
from torimod.arith.qseries import QSeries
from torimod.errors import InvalidFan, NegativeValuation, PoleOnContinuation
from torimod.geometry.fan import DegreeFunction, Fan
from torimod.geometry.lattice import dot, nullspace, parallelepiped, primitive, rank


# closed forms for single cones ---------------------------------------------------

@dataclass(frozen=True)
class ConeRational:
    """sum_p c_p q^{e_p} / prod_i (1 - u_i q^{w_i}) for one cone and one m."""

    level: int
    numerator: tuple[tuple[CycElem, int], ...]
    factors: tuple[tuple[CycElem, int], ...]

    def expand(self, prec: int) -> QSeries:
        """Laurent expansion through q^prec.

        A factor with w < 0 is rewritten as -u^{-1} q^{|w|} / (1 - u^{-1} q^{|w|})
        so every geometric series is in nonnegative powers.
        """
        L = self.level
        scalar = CycElem.one(L)
        shift = 0
        geometric = []
        for u, w in self.factors:
            if w == 0:
                if (1 - u).is_zero():
                    raise PoleOnContinuation("denominator factor vanishes identically")
                scalar = scalar * (1 - u).inverse()
            elif w > 0:
                geometric.append((u, w))
            else:
                uinv = u.inverse()
                scalar = scalar * (-uinv)
                shift += -w
                geometric.append((uinv, -w))
        terms: dict[int, CycElem] = {}
        for c, e in self.numerator:
            terms[e + shift] = terms.get(e + shift, CycElem.zero(L)) + c * scalar
        num = QSeries.from_dict(L, terms, prec)
        # a negative leading exponent needs extra relative precision in the factors
        gprec = prec - min(min(terms), 0)
        out = num
        for u, w in geometric:
            out = out * QSeries.geometric(L, u, w, gprec)
        return out.truncate(prec)


class ConeData:
    """Per-cone data shared by every m: rays, parallelepiped points and their degrees."""

    def __init__(self, fan: Fan, cone, deg: DegreeFunction):
        self.key = frozenset(cone)
        self.idx = tuple(sorted(cone))
        self.sign = -1 if fan.codim(cone) % 2 else 1
        P = parallelepiped([fan.rays[i] for i in self.idx], fan.rank)
        self.points = np.array(P.points, dtype=np.int64).reshape(len(P.points), fan.rank)
        ldeg = []
        for co in P.coords:
            x = sum((lam * deg.values[i] for lam, i in zip(co, self.idx)), Fraction(0))
            if x.denominator != 1:
                raise InvalidFan("degree function is not of level l on a parallelepiped point")
            ldeg.append(int(x) % deg.l)
        self.ldeg = np.array(ldeg, dtype=np.int64)


def cone_rational(fan: Fan, deg: DegreeFunction, cone, m) -> ConeRational:
    l = deg.l
    data = ConeData(fan, cone, deg)
    num = tuple((CycElem.root_of_unity(l, int(k)), int(dot(m, p))) for p, k in zip(data.points, data.ldeg))
    factors = tuple((CycElem.root_of_unity(l, deg.values[i]), dot(m, fan.rays[i])) for i in data.idx)
    return ConeRational(l, num, factors)


def r_of_m(fan: Fan, deg: DegreeFunction, m, prec: int) -> QSeries:
    """sum over cones of (-1)^codim times the expanded closed form, exactly."""
    tri = fan.triangulate()
    deg = deg.on_fan(tri) if tri is not fan else deg
    total = QSeries.zero(deg.l, prec)
    for cone in sorted(tri.cones, key=lambda c: (len(c), sorted(c))):
        f = cone_rational(tri, deg, cone, m).expand(prec)
        total = total + (f if tri.codim(cone) % 2 == 0 else -f)
    if total.valuation() < 0:
        raise NegativeValuation(f"r(q, m) has a negative power of q at m = {list(m)}")
    return total


# truncation bound -----------------------------------------------------------------

class TruncationBound:
    """The lower bound L(m) on ord r(q, m) and its cell-wise linear minorants."""

    def __init__(self, fan: Fan):
        self.rank = fan.rank
        self.rays = np.array(fan.rays, dtype=np.int64)
        self.interior = interior_subset_sum_points(fan.rays)
        if not any(all(x == 0 for x in n) for n in self.interior):
            raise InvalidFan("origin is not interior to the subset-sum hull; is the fan complete?")
        self._S = np.array(self.interior, dtype=np.int64).reshape(len(self.interior), self.rank)
        self.cells = self._cells()

    def value(self, m) -> int:
        m = np.asarray(m, dtype=np.int64)
        return int((self._S @ m).min() + np.maximum(0, -(self.rays @ m)).sum())

    def values(self, ms: np.ndarray) -> np.ndarray:
        """L on the rows of an integer array."""
        return (ms @ self._S.T).min(axis=1) + np.maximum(0, -(ms @ self.rays.T)).sum(axis=1)

    def _hyperplanes(self):
        seen, planes = set(), []
        for d in map(tuple, self.rays.tolist()):
            key = primitive(d)
            if key not in seen and tuple(-x for x in key) not in seen:
                seen.add(key)
                planes.append(key)
        return planes

    def _cells(self):
        r = self.rank
        planes = self._hyperplanes()
        cands = set()
        for sub in combinations(planes, r - 1):
            if r > 1 and rank(list(sub)) != r - 1:
                continue
            ker = nullspace(list(sub), r) if sub else nullspace([], r)
            if len(ker) != 1:
                continue
            g = ker[0]
            cands.add(g)
            cands.add(tuple(-x for x in g))
        cands = sorted(cands)

        def closed_rays(sig):
            return [g for g in cands if all(s * dot(g, h) >= 0 for s, h in zip(sig, planes))]

        def realized(sig):
            rays = closed_rays(sig)
            if not rays:
                return None
            tot = [sum(g[i] for g in rays) for i in range(r)]
            if all(s * dot(tot, h) > 0 for s, h in zip(sig, planes)):
                return rays
            return None

        K = 2 * max(1, int(np.abs(self.rays).max())) + 1
        m0 = [K ** i for i in range(r)]
        start = tuple(1 if dot(m0, h) > 0 else -1 for h in planes)
        cells = {}
        todo = deque([start])
        while todo:
            sig = todo.popleft()
            if sig in cells:
                continue
            rays = realized(sig)
            if rays is None:
                continue
            cells[sig] = rays
            for j in range(len(planes)):
                flip = sig[:j] + (-sig[j],) + sig[j + 1:]
                if flip not in cells:
                    todo.append(flip)
        out = []
        for sig, rays in sorted(cells.items()):
            Ls = [self.value(g) for g in rays]
            ratios = [Fraction(v, max(abs(x) for x in g)) for v, g in zip(Ls, rays)]
            out.append({"signs": list(sig), "rays": [list(g) for g in rays], "L": Ls, "kappa": min(ratios)})
        return out

    def radius(self, prec: int) -> int:
        rho = 0
        for cell in self.cells:
            if cell["kappa"] <= 0:
                raise InvalidFan("the truncation bound is not positive on a cell; is the fan complete?")
            rho = max(rho, int(prec / cell["kappa"]))
        return rho

    def enumerate(self, prec: int) -> np.ndarray:
        """All m with L(m) <= prec, as rows of an integer array (deterministic order)."""
        rho = self.radius(prec)
        axis = np.arange(-rho, rho + 1, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([axis] * self.rank), indexing="ij"), axis=-1).reshape(-1, self.rank)
        keep = self.values(grid) <= prec
        return grid[keep]

    def certificate(self, prec: int) -> dict:
        cells = []
        for cell in self.cells:
            rho = int(prec / cell["kappa"])
            cells.append({"signs": cell["signs"], "rays": cell["rays"], "L": cell["L"],
                          "kappa": str(cell["kappa"]), "radius": rho})
        return {"prec": prec, "interior_points": [list(n) for n in self.interior],
                "cells": cells, "radius": self.radius(prec),
                "enumerated": int(len(self.enumerate(prec)))}


def subset_sums(rays) -> list[tuple[int, ...]]:
    r = len(rays[0])
    pts = {tuple([0] * r)}
    for d in rays:
        pts |= {tuple(a + b for a, b in zip(p, d)) for p in pts}
    return sorted(pts)


def interior_subset_sum_points(rays) -> list[tuple[int, ...]]:
    """Lattice points strictly inside the convex hull of all subset sums of the rays.

    Facets come from scipy's hull; each facet normal is then recomputed exactly
    from its integer vertices and checked against every point.
    """
    pts = subset_sums(rays)
    r = len(pts[0])
    arr = np.array(pts, dtype=np.int64)
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    if r == 1:
        return [(x,) for x in range(int(lo[0]) + 1, int(hi[0]))]
    hull = ConvexHull(arr.astype(float))
    ineqs = set()
    for simplex in hull.simplices:
        verts = [pts[i] for i in simplex]
        diffs = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
        ker = nullspace(diffs, r)
        if len(ker) != 1:
            continue
        nvec = ker[0]
        c = dot(nvec, verts[0])
        vals = [dot(nvec, p) - c for p in pts]
        if all(v <= 0 for v in vals):
            ineqs.add((nvec, c))
        elif all(v >= 0 for v in vals):
            ineqs.add((tuple(-x for x in nvec), -c))
    ineqs = sorted(ineqs)
    out = []
    for n in product(*(range(int(a), int(b) + 1) for a, b in zip(lo, hi))):
        if all(dot(nv, n) < c for nv, c in ineqs):
            out.append(tuple(n))
    return out


# the sum over m -------------------------------------------------------------------

_PERMS: dict[int, np.ndarray] = {}


def _rotation(l: int, a: int) -> np.ndarray:
    """Column permutation realizing multiplication by zeta^a in the group ring."""
    if l not in _PERMS:
        base = np.arange(l)
        _PERMS[l] = np.stack([(base - k) % l for k in range(l)])
    return _PERMS[l][a % l]


def _geometric_inplace(S: np.ndarray, a: int, step: int) -> None:
    """S <- S / (1 - zeta^a q^step) in the group ring, truncated to S's length."""
    n, l = S.shape
    perm = _rotation(l, a)
    for start in range(step, n, step):
        end = min(start + step, n)
        S[start:end] += S[start - step:start - step + (end - start)][:, perm]


class LatticeSum:
    """Evaluator for one (fan, deg); reusable across precisions."""

    def __init__(self, fan: Fan, deg: DegreeFunction):
        fan.require_complete()
        tri = fan.triangulate()
        self.fan = tri
        self.deg = deg.on_fan(tri) if tri is not fan else deg
        self.l = self.deg.l
        self.bound = TruncationBound(tri)
        self.rays = np.array(tri.rays, dtype=np.int64)
        self.values = [a % self.l for a in self.deg.values]
        for a in self.values:
            if a == 0:
                raise PoleOnContinuation("a ray has integral degree")
        self.cones = [ConeData(tri, c, self.deg) for c in sorted(tri.cones, key=lambda c: (len(c), sorted(c)))]

    def r_group_ring(self, m: np.ndarray, prec: int):
        """r(q, m) as (bucket key, integer group-ring rows); the true value is rows / prod_{key}(1 - zeta^a)."""
        l = self.l
        e = self.rays @ m
        zero = [i for i in range(len(e)) if e[i] == 0]
        acc = np.zeros((prec + 1, l), dtype=np.int64)
        for cone in self.cones:
            shift = int(sum(-e[i] for i in cone.idx if e[i] < 0))
            exps = cone.points @ m + shift
            if (exps < 0).any():
                raise NegativeValuation(f"cone term below q^0 at m = {m.tolist()}")
            mask = exps <= prec
            if not mask.any():
                continue
            S = np.zeros((prec + 1, l), dtype=np.int64)
            np.add.at(S, (exps[mask], cone.ldeg[mask]), 1)
            for i in cone.idx:
                a, w = self.values[i], int(e[i])
                if w > 0:
                    _geometric_inplace(S, a, w)
                elif w < 0:
                    S = -S[:, _rotation(l, -a)]
                    _geometric_inplace(S, -a, -w)
            for i in zero:
                if i not in cone.idx:
                    S = S - S[:, _rotation(l, self.values[i])]
            if cone.sign > 0:
                acc += S
            else:
                acc -= S
        key = tuple(sorted(self.values[i] for i in zero))
        return key, acc

    def series(self, prec: int, check_bound: bool = True) -> QSeries:
        l = self.l
        R = group_ring_to_power_basis(l)
        buckets: dict[tuple, np.ndarray] = {}
        for m in self.bound.enumerate(prec):
            key, acc = self.r_group_ring(m, prec)
            if check_bound:
                low = self.bound.value(m)
                if low > 0 and (acc[:low] @ R).any():
                    raise NegativeValuation(f"r(q, m) has a term below its bound L(m) = {low} at m = {m.tolist()}")
            if key in buckets:
                buckets[key] += acc
            else:
                buckets[key] = acc
        total = QSeries.zero(l, prec)
        for key in sorted(buckets):
            c = CycElem.one(l)
            for a in key:
                c = c * (1 - CycElem.root_of_unity(l, a)).inverse()
            total = total + QSeries.from_group_ring(l, buckets[key]) * c
        return total

    def exact_series(self, prec: int) -> QSeries:
        """Same sum through the exact closed forms; slow, for cross-checks."""
        total = QSeries.zero(self.l, prec)
        for m in self.bound.enumerate(prec):
            total = total + r_of_m(self.fan, self.deg, tuple(int(x) for x in m), prec)
        return total


def toric_form_lattice_sum(fan: Fan, deg: DegreeFunction, prec: int, certify: bool = False,
                           method: str = "fast"):
    """f_{N,deg} through q^prec; with ``certify`` also returns the termination certificate."""
    ls = LatticeSum(fan, deg)
    series = ls.series(prec) if method == "fast" else ls.exact_series(prec)
    if certify:
        return series, ls.bound.certificate(prec)
    return series


def check_certificate(fan: Fan, cert: dict) -> bool:
    """Independent validation of a termination certificate.

    Recomputes the interior points and L on every cell ray from the fan alone,
    then checks that L exceeds prec just beyond each cell's radius and that
    every enumerated m lies within the radius.
    """
    tri = fan.triangulate()
    interior = interior_subset_sum_points(tri.rays)
    if sorted(map(tuple, cert["interior_points"])) != sorted(interior):
        return False
    prec = cert["prec"]
    S = interior

    def L(m):
        return min(dot(m, n) for n in S) + sum(max(0, -dot(m, d)) for d in tri.rays)

    planes = [d for d in tri.rays]
    for cell in cert["cells"]:
        rho = cell["radius"]
        for g, claimed in zip(cell["rays"], cell["L"]):
            if L(g) != claimed or L(g) <= 0:
                return False
            if not all(s * dot(g, primitive(h)) >= 0 for s, h in zip(cell["signs"], _distinct(planes))):
                return False
            if Fraction(rho + 1) * Fraction(L(g), max(abs(x) for x in g)) <= prec:
                return False
        kappa = min(Fraction(L(g), max(abs(x) for x in g)) for g in cell["rays"])
        if str(kappa) != cell["kappa"]:
            return False
    return cert["radius"] == max(c["radius"] for c in cert["cells"])


def _distinct(rays):
    seen, out = set(), []
    for d in rays:
        key = primitive(d)
        if key not in seen and tuple(-x for x in key) not in seen:
            seen.add(key)
            out.append(key)
    return out

"""Rational polyhedral fans and piecewise-linear degree functions on them.

A fan is given by its rays and maximal cones (as ray-index sets); every face
is generated at construction and the whole structure is validated.  Cones are
identified by the frozenset of their ray indices throughout the package.
"""
from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np
from scipy.optimize import linprog

from torimod.errors import IncompatibleLevels, InvalidDegree, InvalidFan, NotComplete, NotPure
from torimod.geometry.lattice import (det, dot, is_primitive, nullspace, parallelepiped,
                                      rank, solve, transpose)

ConeKey = frozenset


def _lp_feasible(A_ub, b_ub, A_eq, b_eq, dim: int) -> bool:
    res = linprog(np.zeros(dim),
                  A_ub=np.array(A_ub, dtype=float) if A_ub else None,
                  b_ub=np.array(b_ub, dtype=float) if b_ub else None,
                  A_eq=np.array(A_eq, dtype=float) if A_eq else None,
                  b_eq=np.array(b_eq, dtype=float) if b_eq else None,
                  bounds=[(None, None)] * dim, method="highs")
    return res.status == 0


class Fan:
    """A validated fan in N = Z^rank."""

    def __init__(self, rays, max_cones, validate: bool = True):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise InvalidFan("a fan needs at least one ray")
        self.rank = len(rays[0])
        if any(len(r) != self.rank for r in rays):
            raise InvalidFan("rays have inconsistent lengths")
        self.rays = rays
        cones = []
        for c in max_cones:
            key = frozenset(int(i) for i in c)
            if not key or any(i < 0 or i >= len(rays) for i in key):
                raise InvalidFan(f"maximal cone {sorted(c)} refers to unknown rays")
            cones.append(key)
        self._face_cache: dict[ConeKey, frozenset] = {}
        if validate:
            self._validate_rays()
            for c in cones:
                self._validate_cone(c)
        # drop cones that are faces of others
        keep = []
        for c in cones:
            if c in keep:
                continue
            if any(c < d and c in self.faces(d) for d in cones):
                continue
            keep.append(c)
        self.max_cones = tuple(sorted(keep, key=lambda k: sorted(k)))
        cone_dims: dict[ConeKey, int] = {}
        for c in self.max_cones:
            for f in self.faces(c):
                if f not in cone_dims:
                    cone_dims[f] = self.dim(f)
        self.cones = cone_dims
        used = set().union(*self.max_cones)
        if validate:
            if used != set(range(len(rays))):
                raise InvalidFan("every ray must lie in some maximal cone")
            self._validate_intersections()

    # construction helpers ---------------------------------------------
    @classmethod
    def from_json(cls, obj) -> "Fan":
        if isinstance(obj, str):
            obj = json.loads(obj)
        for key in ("rank", "rays", "max_cones"):
            if key not in obj:
                raise InvalidFan(f"fan JSON is missing '{key}'")
        fan = cls(obj["rays"], obj["max_cones"])
        if fan.rank != obj["rank"]:
            raise InvalidFan(f"declared rank {obj['rank']} but rays have length {fan.rank}")
        return fan

    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "max_cones": [sorted(c) for c in self.max_cones]}

    def canonical_key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __eq__(self, other):
        return isinstance(other, Fan) and self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    # validation -------------------------------------------------------
    def _validate_rays(self):
        if len(set(self.rays)) != len(self.rays):
            raise InvalidFan("rays must be pairwise distinct")
        for r in self.rays:
            if not any(r):
                raise InvalidFan("zero vector given as a ray")
            if not is_primitive(r):
                raise InvalidFan(f"ray {list(r)} is not primitive")

    def _validate_cone(self, c: ConeKey):
        vecs = self.vectors(c)
        if not _lp_feasible([[-x for x in v] for v in vecs], [-1.0] * len(vecs), None, None, self.rank):
            raise InvalidFan(f"cone {sorted(c)} is not pointed")
        faces = self.faces(c)
        for i in c:
            if frozenset([i]) not in faces:
                raise InvalidFan(f"ray {list(self.rays[i])} is not an extreme ray of cone {sorted(c)}")

    def _validate_intersections(self):
        for c1, c2 in combinations(self.max_cones, 2):
            common = c1 & c2
            if common not in self.faces(c1) or common not in self.faces(c2):
                raise InvalidFan(f"cones {sorted(c1)} and {sorted(c2)} share rays that do not form a common face")
            A_ub, b_ub = [], []
            for i in c1 - common:
                A_ub.append([-x for x in self.rays[i]])
                b_ub.append(-1.0)
            for i in c2 - common:
                A_ub.append(list(self.rays[i]))
                b_ub.append(-1.0)
            A_eq = [list(self.rays[i]) for i in common]
            if not _lp_feasible(A_ub, b_ub, A_eq, [0.0] * len(A_eq), self.rank):
                raise InvalidFan(f"cones {sorted(c1)} and {sorted(c2)} overlap beyond a common face")

    # cone geometry ----------------------------------------------------
    def vectors(self, c) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in sorted(c)]

    def dim(self, c) -> int:
        return rank(self.vectors(c)) if c else 0

    def codim(self, c) -> int:
        return self.rank - self.dim(c)

    def is_simplicial_cone(self, c) -> bool:
        return len(c) == self.dim(c)

    def facets(self, c) -> list[ConeKey]:
        """Facets of a cone, as ray-index sets."""
        c = frozenset(c)
        idx = sorted(c)
        k = self.dim(c)
        if k == 0:
            return []
        if len(idx) == k:
            return [c - {i} for i in idx]
        vecs = [self.rays[i] for i in idx]
        # basis of the span, then functionals on the span represented inside it
        basis = []
        for v in vecs:
            if rank(basis + [v]) > len(basis):
                basis.append(v)
        out = set()
        for sub in combinations(range(len(idx)), k - 1):
            T = [vecs[j] for j in sub]
            if rank(T) != k - 1:
                continue
            gram = [[dot(t, w) for w in basis] for t in T]
            ker = nullspace(gram, len(basis))
            if len(ker) != 1:
                continue
            m = [sum(ker[0][j] * basis[j][i] for j in range(len(basis))) for i in range(self.rank)]
            vals = [dot(m, v) for v in vecs]
            if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
                face = frozenset(idx[j] for j, x in enumerate(vals) if x == 0)
                if self.dim(face) == k - 1:
                    out.add(face)
        return sorted(out, key=sorted)

    def faces(self, c) -> frozenset:
        """All faces of a cone including itself and the zero cone."""
        c = frozenset(c)
        if c in self._face_cache:
            return self._face_cache[c]
        if self.is_simplicial_cone(c):
            idx = sorted(c)
            res = frozenset(frozenset(s) for n in range(len(idx) + 1) for s in combinations(idx, n))
        else:
            res = {c}
            for f in self.facets(c):
                res |= self.faces(f)
            res.add(frozenset())
            res = frozenset(res)
        self._face_cache[c] = res
        return res

    # global properties ------------------------------------------------
    def is_pure(self) -> bool:
        return all(self.dim(c) == self.rank for c in self.max_cones)

    def is_complete(self) -> bool:
        """Facet pairing plus connectivity of the maximal cones."""
        if not self.is_pure():
            raise NotPure("maximal cones have unequal dimension")
        containing: dict[ConeKey, list[int]] = {}
        for j, c in enumerate(self.max_cones):
            for f in self.facets(c):
                containing.setdefault(f, []).append(j)
        if any(len(v) != 2 for v in containing.values()):
            return False
        adj = {j: set() for j in range(len(self.max_cones))}
        for a, b in containing.values():
            adj[a].add(b)
            adj[b].add(a)
        seen, todo = {0}, deque([0])
        while todo:
            j = todo.popleft()
            for k in adj[j] - seen:
                seen.add(k)
                todo.append(k)
        return len(seen) == len(self.max_cones)

    def require_complete(self):
        if not self.is_complete():
            raise NotComplete("fan is not complete")

    def is_simplicial(self) -> bool:
        return all(self.is_simplicial_cone(c) for c in self.max_cones)

    def is_smooth(self) -> bool:
        for c in self.max_cones:
            if not self.is_simplicial_cone(c):
                return False
            vecs = self.vectors(c)
            if len(vecs) == self.rank:
                if abs(det(vecs)) != 1:
                    return False
            elif parallelepiped(vecs).index != 1:
                return False
        return True

    def cones_by_codim(self) -> dict[int, list[ConeKey]]:
        out: dict[int, list[ConeKey]] = {}
        for c, d in self.cones.items():
            out.setdefault(self.rank - d, []).append(c)
        for v in out.values():
            v.sort(key=sorted)
        return out

    # refinements ------------------------------------------------------
    def triangulate(self) -> "Fan":
        """Pulling triangulation with respect to the ray order; no new rays."""
        if getattr(self, "_triangulation", None) is not None:
            return self._triangulation
        if self.is_simplicial():
            return self
        memo: dict[ConeKey, list[ConeKey]] = {}

        def tri(c: ConeKey) -> list[ConeKey]:
            if c in memo:
                return memo[c]
            if self.is_simplicial_cone(c):
                res = [c]
            else:
                v = min(c)
                res = []
                for f in self.facets(c):
                    if v in f:
                        continue
                    res.extend(g | {v} for g in tri(f))
            memo[c] = res
            return res

        cells = []
        for c in self.max_cones:
            cells.extend(tri(c))
        self._triangulation = Fan(self.rays, cells, validate=False)
        return self._triangulation

    def stellar_subdivide(self, v) -> "Fan":
        """Star subdivision of a simplicial fan at the primitive vector v."""
        v = tuple(int(x) for x in v)
        if not is_primitive(v):
            raise InvalidFan("new ray must be primitive")
        if v in self.rays:
            return self
        rays = self.rays + (v,)
        new = len(self.rays)
        cells = []
        for c in self.max_cones:
            lam = self.cone_coordinates(c, v)
            if lam is None or any(x < 0 for x in lam.values()):
                cells.append(c)
                continue
            for i, x in lam.items():
                if x > 0:
                    cells.append((c - {i}) | {new})
        return Fan(rays, cells)

    def cone_coordinates(self, c, n) -> dict[int, Fraction] | None:
        """Coefficients of n in the rays of a simplicial cone (None if outside the span)."""
        idx = sorted(c)
        if not idx:
            return {} if not any(n) else None
        A = transpose([list(self.rays[i]) for i in idx])
        x = solve(A, list(n))
        if x is None:
            return None
        return dict(zip(idx, x))

    def containing_cone(self, n) -> ConeKey:
        """Smallest cone of the triangulation whose relative interior contains n."""
        tri = self.triangulate()
        for c in tri.max_cones:
            lam = tri.cone_coordinates(c, n)
            if lam is not None and all(x >= 0 for x in lam.values()):
                return frozenset(i for i, x in lam.items() if x > 0)
        raise NotComplete(f"no cone contains {list(n)}")

    def product(self, other: "Fan") -> "Fan":
        r1, r2 = self.rank, other.rank
        rays = [tuple(d) + (0,) * r2 for d in self.rays] + [(0,) * r1 + tuple(d) for d in other.rays]
        off = len(self.rays)
        cells = [c1 | frozenset(off + j for j in c2) for c1 in self.max_cones for c2 in other.max_cones]
        return Fan(rays, cells)


class DegreeFunction:
    """deg(d) = values[d] / l on rays, extended linearly on every cone."""

    def __init__(self, fan: Fan, l: int, values, validate: bool = True):
        values = tuple(int(v) for v in values)
        if l < 1:
            raise InvalidDegree("denominator l must be positive")
        if len(values) != len(fan.rays):
            raise InvalidDegree(f"expected {len(fan.rays)} ray values, got {len(values)}")
        self.fan = fan
        self.l = l
        self.values = values
        if validate:
            self._validate()

    @classmethod
    def from_json(cls, fan: Fan, obj) -> "DegreeFunction":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if "l" not in obj or "values" not in obj:
            raise InvalidDegree("degree JSON needs 'l' and 'values'")
        return cls(fan, obj["l"], obj["values"])

    def to_json(self) -> dict:
        return {"l": self.l, "values": list(self.values)}

    def __repr__(self):
        return f"DegreeFunction(l={self.l}, values={list(self.values)})"

    def _validate(self):
        for d, a in zip(self.fan.rays, self.values):
            if a % self.l == 0:
                raise InvalidDegree(f"deg({list(d)}) = {a}/{self.l} is an integer")
        for c in self.fan.max_cones:
            if self.functional(c) is None:
                raise InvalidDegree(f"ray values do not extend linearly on cone {sorted(c)}")
        tri = self.fan.triangulate()
        for c in tri.max_cones:
            for x in self.parallelepiped_degrees(c, tri):
                if x.denominator != 1:
                    raise InvalidDegree(f"deg takes a value outside (1/{self.l})Z on cone {sorted(c)}")

    def functional(self, c):
        """A rational vector u with u.d = values[d] for the rays of c (l * deg), or None."""
        idx = sorted(c)
        if not idx:
            return (Fraction(0),) * self.fan.rank
        A = [list(self.fan.rays[i]) for i in idx]
        u = solve(A, [self.values[i] for i in idx])
        return None if u is None else tuple(u)

    def parallelepiped_degrees(self, c, fan: Fan | None = None):
        """l * deg(p) for the parallelepiped points p of a simplicial cone."""
        fan = fan or self.fan
        idx = sorted(c)
        P = parallelepiped([fan.rays[i] for i in idx], fan.rank)
        return [sum((lam * self.values[i] for lam, i in zip(co, idx)), Fraction(0)) for co in P.coords]

    def __call__(self, n) -> Fraction:
        return self.evaluate(n)

    def evaluate(self, n) -> Fraction:
        tri = self.fan.triangulate()
        for c in tri.max_cones:
            lam = tri.cone_coordinates(c, n)
            if lam is not None and all(x >= 0 for x in lam.values()):
                return sum((x * self.values[i] for i, x in lam.items()), Fraction(0)) / self.l
        raise NotComplete(f"no cone contains {list(n)}")

    def scaled(self, p: int) -> "DegreeFunction":
        """p * deg, at the same denominator."""
        return DegreeFunction(self.fan, self.l, [p * a for a in self.values])

    def on_fan(self, fan: Fan) -> "DegreeFunction":
        """Transport to a refinement by evaluating on the new rays."""
        vals = []
        for d in fan.rays:
            x = self.evaluate(d) * self.l
            if x.denominator != 1:
                raise InvalidDegree(f"deg({list(d)}) has denominator not dividing {self.l}")
            vals.append(int(x))
        return DegreeFunction(fan, self.l, vals)

    def at_level(self, L: int) -> "DegreeFunction":
        if L % self.l:
            raise IncompatibleLevels(f"level {self.l} does not divide {L}")
        return DegreeFunction(self.fan, L, [a * (L // self.l) for a in self.values])

    def reduced(self) -> "DegreeFunction":
        """Same function with the smallest possible denominator."""
        g = self.l
        for a in self.values:
            g = gcd(g, a)
        if g == 1:
            return self
        return DegreeFunction(self.fan, self.l // g, [a // g for a in self.values])

    def product(self, other: "DegreeFunction") -> "DegreeFunction":
        L = self.l * other.l // gcd(self.l, other.l)
        vals = [a * (L // self.l) for a in self.values] + [a * (L // other.l) for a in other.values]
        return DegreeFunction(self.fan.product(other.fan), L, vals)

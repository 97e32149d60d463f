"""Top intersection numbers of toric divisors on a smooth complete toric variety."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from torimod.errors import NotSmooth, WrongDegree
from torimod.geometry.fan import Fan
from torimod.geometry.lattice import dot, inverse, transpose


class IntersectionRing:
    """Integration of monomials in the divisor classes D_i of a smooth complete fan.

    ``cone_choice`` picks which maximal cone (first or last containing the
    support) supplies the linear relation used to remove a repeated factor;
    the answer does not depend on it, which the tests exploit.
    """

    def __init__(self, fan: Fan, cone_choice: str = "first"):
        if not fan.is_smooth():
            raise NotSmooth("intersection numbers need a smooth fan")
        fan.require_complete()
        self.fan = fan
        self.n = len(fan.rays)
        self.r = fan.rank
        self.cone_choice = cone_choice
        # dual basis of each maximal cone: row j pairs to 1 with ray j and 0 with the others
        self._dual: dict[frozenset, dict[int, tuple[int, ...]]] = {}
        for c in fan.max_cones:
            idx = sorted(c)
            B = transpose([list(fan.rays[i]) for i in idx])
            Binv = inverse(B)
            self._dual[c] = {i: tuple(int(x) for x in Binv[k]) for k, i in enumerate(idx)}
        self._memo: dict[tuple[int, ...], Fraction] = {}

    def _containing(self, support: frozenset):
        cands = [c for c in self.fan.max_cones if support <= c]
        if not cands:
            return None
        return cands[0] if self.cone_choice == "first" else cands[-1]

    def integrate(self, exponents) -> Fraction:
        """Integral over X of prod_i D_i^{e_i}; ``exponents`` is a tuple or a {ray: e} map."""
        if isinstance(exponents, dict):
            e = [0] * self.n
            for i, k in exponents.items():
                e[i] = k
            exponents = e
        exponents = tuple(exponents)
        if len(exponents) != self.n or any(k < 0 for k in exponents):
            raise WrongDegree("exponent vector must have one nonnegative entry per ray")
        if sum(exponents) != self.r:
            raise WrongDegree(f"monomial has degree {sum(exponents)}, expected {self.r}")
        return self._integrate(exponents)

    def _integrate(self, e: tuple[int, ...]) -> Fraction:
        if e in self._memo:
            return self._memo[e]
        support = frozenset(i for i, k in enumerate(e) if k)
        cone = self._containing(support)
        if cone is None:
            res = Fraction(0)
        elif all(k <= 1 for k in e):
            res = Fraction(1)
        else:
            repeated = [i for i in sorted(support) if e[i] > 1]
            j = repeated[0] if self.cone_choice == "first" else repeated[-1]
            m = self._dual[cone][j]
            # D_j = -sum_{i not in cone} (m . d_i) D_i
            res = Fraction(0)
            for i in range(self.n):
                if i in cone:
                    continue
                w = dot(m, self.fan.rays[i])
                if w == 0:
                    continue
                f = list(e)
                f[j] -= 1
                f[i] += 1
                res -= w * self._integrate(tuple(f))
        self._memo[e] = res
        return res

    def monomials(self, degree: int | None = None):
        """All exponent vectors of the given total degree (default: rank)."""
        degree = self.r if degree is None else degree
        for combo in combinations_with_replacement(range(self.n), degree):
            e = [0] * self.n
            for i in combo:
                e[i] += 1
            yield tuple(e)


def integrate_monomial(ring: IntersectionRing, exponents) -> Fraction:
    return ring.integrate(exponents)

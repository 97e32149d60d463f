from itertools import combinations

import pytest

from torimod.errors import NotSmooth, WrongDegree
from torimod.geometry.fan import Fan
from torimod.geometry.intersection import IntersectionRing, integrate_monomial
from torimod.io import bundled_fan

SMOOTH = ["p1", "p2", "p1xp1", "f1", "p3"]


def test_examples():
    p2 = IntersectionRing(bundled_fan("p2"))
    assert integrate_monomial(p2, {0: 1, 1: 1}) == 1
    assert integrate_monomial(p2, {0: 2}) == 1
    q = IntersectionRing(bundled_fan("p1xp1"))
    assert integrate_monomial(q, {0: 2}) == 0
    assert integrate_monomial(q, {0: 1, 2: 1}) == 0
    assert integrate_monomial(q, {0: 1, 1: 1}) == 1
    f1 = IntersectionRing(bundled_fan("f1"))
    # neighbours of (0,1) sum to (0,1), so D^2 = -1; for (0,-1) they sum to -(0,-1)
    assert integrate_monomial(f1, {1: 2}) == -1
    assert integrate_monomial(f1, {3: 2}) == 1
    p3 = IntersectionRing(bundled_fan("p3"))
    assert integrate_monomial(p3, {0: 3}) == 1


def test_wrong_degree_and_singular_fans():
    with pytest.raises(WrongDegree):
        IntersectionRing(bundled_fan("p2")).integrate({0: 1})
    singular = Fan([(1, 0), (1, 2), (-1, -1)], [[0, 1], [1, 2], [2, 0]])
    with pytest.raises(NotSmooth):
        IntersectionRing(singular)


@pytest.mark.parametrize("name", SMOOTH)
def test_independent_of_relation_choice(name):
    fan = bundled_fan(name)
    a, b = IntersectionRing(fan, "first"), IntersectionRing(fan, "last")
    for e in a.monomials():
        assert a.integrate(e) == b.integrate(e)


@pytest.mark.parametrize("name", SMOOTH)
def test_linear_relations_integrate_to_zero(name):
    fan = bundled_fan(name)
    ring = IntersectionRing(fan)
    r = fan.rank
    for m in [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]:
        for e in ring.monomials(r - 1):
            total = 0
            for i, d in enumerate(fan.rays):
                w = sum(x * y for x, y in zip(m, d))
                if w:
                    e2 = list(e)
                    e2[i] += 1
                    total += w * ring.integrate(tuple(e2))
            assert total == 0


@pytest.mark.parametrize("name", SMOOTH)
def test_square_free_monomials(name):
    fan = bundled_fan(name)
    ring = IntersectionRing(fan)
    n, r = len(fan.rays), fan.rank
    for idx in combinations(range(n), r):
        e = tuple(1 if i in idx else 0 for i in range(n))
        assert ring.integrate(e) == (1 if frozenset(idx) in fan.max_cones else 0)

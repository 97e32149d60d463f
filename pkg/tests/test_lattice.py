from fractions import Fraction
from itertools import product

from hypothesis import assume, given, strategies as st

from torimod.geometry.lattice import (det, matmul, nullspace, parallelepiped, primitive, smith_normal_form,
                                      superlattices)

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def brute_parallelepiped(rays):
    """Lattice points with coordinates in [0,1) found by scanning the bounding box."""
    r = len(rays[0])
    lo = [sum(min(0, d[i]) for d in rays) for i in range(r)]
    hi = [sum(max(0, d[i]) for d in rays) for i in range(r)]
    B = [[Fraction(rays[j][i]) for j in range(len(rays))] for i in range(r)]
    from torimod.geometry.lattice import inverse

    Binv = inverse(B)
    pts = set()
    for n in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        lam = [sum(Binv[i][k] * n[k] for k in range(r)) for i in range(r)]
        if all(0 <= x < 1 for x in lam):
            pts.add(n)
    return pts


def test_parallelepiped_examples():
    assert parallelepiped([(1, 0), (0, 1)]).points == ((0, 0),)
    data = parallelepiped([(1, 0), (1, 2)])
    assert set(data.points) == {(0, 0), (1, 1)} and data.index == 2
    assert parallelepiped([(1,)]).points == ((0,),)
    assert parallelepiped([], dim=3).points == ((0, 0, 0),)


@given(square(3))
def test_smith_normal_form(A):
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(3)]
    assert all(D[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@given(st.integers(2, 3).flatmap(square))
def test_parallelepiped_count_is_determinant(A):
    assume(det(A) != 0)
    rays = [tuple(row) for row in A]
    data = parallelepiped(rays)
    assert len(data.points) == data.index == abs(det(A))
    assert len(set(data.points)) == data.index
    assert all(0 <= x < 1 for c in data.coords for x in c)
    assert tuple(0 for _ in rays[0]) in data.points


@given(square(2))
def test_parallelepiped_matches_scan(A):
    assume(det(A) != 0)
    rays = [tuple(row) for row in A]
    assert set(parallelepiped(rays).points) == brute_parallelepiped(rays)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=2))
def test_nullspace(rows):
    for v in nullspace(rows, 3):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
        assert primitive(v) == tuple(v)


def test_superlattice_counts():
    assert [len(superlattices(r, p)) for r, p in [(1, 2), (1, 5), (2, 2), (2, 3), (3, 2), (3, 3)]] == [1, 1, 3, 4, 7, 13]


def test_rank_one_superlattice_is_n():
    (S,) = superlattices(1, 3)
    assert S.basis() == ((Fraction(1),),)


def _hnf_key(S):
    """p S / p N as a subgroup of (Z/p)^r, which determines S."""
    r = len(S.kernel)
    vecs = {tuple(x % S.p for x in c) for c in S.kernel}
    span = set()
    for coeffs in product(range(S.p), repeat=len(vecs)):
        span.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vecs)) % S.p for i in range(r)))
    return frozenset(span)


def test_superlattices_distinct_with_right_index():
    for r, p in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        lats = superlattices(r, p)
        keys = {_hnf_key(S) for S in lats}
        assert len(keys) == len(lats)
        for S in lats:
            K = [list(c) for c in S.kernel]
            # [S : N] = p^r / |det K| and N is contained in S
            assert Fraction(p ** r, abs(det(K))) == p ** (r - 1)
            _, D, _ = smith_normal_form([list(x) for x in zip(*K)])
            assert sorted(D[i][i] for i in range(r)) == [1] * (r - 1) + [p]
            for e in range(r):
                unit = [1 if i == e else 0 for i in range(r)]
                assert all(x.denominator == 1 for x in S.to_coordinates(unit))

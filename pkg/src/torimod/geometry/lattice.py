"""Integer and rational linear algebra on small lattices.

Matrices are lists of rows of Python ints (or Fractions).  Everything here is
exact; sizes are tiny (rank <= 4), so clarity beats speed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from torimod.errors import NotSimplicial

Vector = tuple[int, ...]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B):
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def primitive(v) -> Vector:
    """Scale an integer (or rational) vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def is_primitive(v) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def row_reduce(A):
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    M = [[Fraction(x) for x in row] for row in A]
    rows = len(M)
    cols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M[:r], pivots


def rank(vectors) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    return len(row_reduce(vectors)[1])


def nullspace(A, ncols: int | None = None) -> list[Vector]:
    """Integer basis (primitive vectors) of {x : A x = 0}."""
    if ncols is None:
        ncols = len(A[0])
    if not A:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    R, pivots = row_reduce(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        basis.append(primitive(x))
    return basis


def solve(A, b):
    """A unique rational solution of A x = b, or None if inconsistent.

    Free variables are set to zero.
    """
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x


def det(A):
    """Exact determinant by Gaussian elimination over Q (integer result for integer input)."""
    M = [[Fraction(x) for x in row] for row in A]
    n = len(M)
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            result = -result
        result *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    return int(result) if result.denominator == 1 else result


def inverse(A) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in R]


# Smith normal form -----------------------------------------------------------

def smith_normal_form(A):
    """Return (U, D, V) with U A V = D, U and V unimodular, D diagonal.

    The diagonal entries are nonnegative and each divides the next.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(row) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for row in D:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if D[i][j] % D[t][t]), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            nz = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
            nz += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


# fundamental parallelepiped ---------------------------------------------------

@dataclass(frozen=True)
class ParallelepipedData:
    rays: tuple[Vector, ...]
    points: tuple[Vector, ...]
    coords: tuple[tuple[Fraction, ...], ...]   # ray-basis coordinates of each point
    index: int


def parallelepiped(rays, dim: int | None = None) -> ParallelepipedData:
    """Lattice points of the half-open parallelepiped spanned by linearly independent rays.

    With rays as the columns of B and U B V = D in Smith form, B lambda is
    integral exactly when V^{-1} lambda lies in prod_j (1/d_j) Z, which
    enumerates the points as V (t_j / d_j) reduced mod 1.
    """
    rays = tuple(tuple(r) for r in rays)
    k = len(rays)
    if k == 0:
        return ParallelepipedData((), ((0,) * (dim or 0),), ((),), 1)
    dim = len(rays[0])
    if rank(rays) != k:
        raise NotSimplicial("rays are linearly dependent")
    B = transpose([list(r) for r in rays])  # dim x k
    U, D, V = smith_normal_form(B)
    divs = [D[j][j] for j in range(k)]
    points, coords = [], []
    for t in product(*(range(d) for d in divs)):
        mu = [Fraction(tj, dj) for tj, dj in zip(t, divs)]
        lam = [sum(V[i][j] * mu[j] for j in range(k)) for i in range(k)]
        lam = [x - (x.numerator // x.denominator) for x in lam]
        pt = tuple(int(sum(lam[j] * rays[j][i] for j in range(k))) for i in range(dim))
        points.append(pt)
        coords.append(tuple(lam))
    idx = 1
    for d in divs:
        idx *= d
    order = sorted(range(len(points)), key=lambda i: (sum(coords[i]), coords[i]))
    return ParallelepipedData(rays, tuple(points[i] for i in order), tuple(coords[i] for i in order), idx)


# superlattices ------------------------------------------------------------------

@dataclass(frozen=True)
class Superlattice:
    """A lattice S with N in S in (1/p) N of index p^(r-1), given by S = (1/p) K.

    ``kernel`` holds the columns of K (a basis of {x : phi . x = 0 mod p}).
    """

    p: int
    functional: Vector
    kernel: tuple[Vector, ...]

    def to_coordinates(self, n) -> tuple[Fraction, ...]:
        """Coordinates of a point of N (x) Q in the basis of S."""
        K = transpose([list(c) for c in self.kernel])
        Kinv = inverse(K)
        return tuple(self.p * sum(Kinv[i][j] * n[j] for j in range(len(n))) for i in range(len(n)))

    def basis(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(x, self.p) for x in c) for c in self.kernel)


def superlattices(r: int, p: int) -> list[Superlattice]:
    """All S with N in S in (1/p)N and [S:N] = p^(r-1); there are (p^r - 1)/(p - 1)."""
    out = []
    for phi in product(range(p), repeat=r):
        nz = [i for i, x in enumerate(phi) if x]
        if not nz or phi[nz[0]] != 1:
            continue
        i = nz[0]
        cols = []
        for j in range(r):
            if j == i:
                cols.append(tuple(p if t == i else 0 for t in range(r)))
            else:
                cols.append(tuple((1 if t == j else 0) - (phi[j] if t == i else 0) for t in range(r)))
        out.append(Superlattice(p, tuple(phi), tuple(cols)))
    return out

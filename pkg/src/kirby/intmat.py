"""Exact integer matrix utilities shared by the homology and form modules.

All matrices are lists (or tuples) of rows of Python ints, so every
computation here is exact.  Sizes stay tiny (a handful of handles), which
lets us use textbook algorithms without worrying about coefficient blowup.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Matrix = list[list[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy(a) -> Matrix:
    return [list(row) for row in a]


def dims(a) -> tuple[int, int]:
    return len(a), len(a[0]) if a else 0


def transpose(a) -> Matrix:
    m, n = dims(a)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def matmul(a, b) -> Matrix:
    m, k = dims(a)
    k2, n = dims(b)
    if k != k2:
        raise ValueError(f"dimension mismatch {k} != {k2}")
    out = zeros(m, n)
    for i in range(m):
        for j in range(n):
            out[i][j] = sum(a[i][t] * b[t][j] for t in range(k))
    return out


def matvec(a, v) -> list[int]:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v, strict=True))


def pairing(q, u, v) -> int:
    """u^T q v for a symmetric matrix q."""
    return dot(u, matvec(q, v))


def is_symmetric(a) -> bool:
    m, n = dims(a)
    return m == n and all(a[i][j] == a[j][i] for i in range(n) for j in range(i))


def equal(a, b) -> bool:
    return [list(r) for r in a] == [list(r) for r in b]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithForm:
    d: Matrix  # u @ a @ v == d, diagonal
    u: Matrix  # unimodular row transform
    v: Matrix  # unimodular column transform

    @property
    def divisors(self) -> list[int]:
        """Nonzero diagonal entries d_1 | d_2 | ..."""
        m, n = dims(self.d)
        out = []
        for i in range(min(m, n)):
            if self.d[i][i] != 0:
                out.append(abs(self.d[i][i]))
        return out


def smith_normal_form(a) -> SmithForm:
    """Diagonalize an integer matrix by unimodular row/column operations."""
    d = copy(a)
    m, n = dims(d)
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):  # row i += c * row j
        d[i] = [x + c * y for x, y in zip(d[i], d[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, c):  # col i += c * col j
        for row in d:
            row[i] += c * row[j]
        for row in v:
            row[i] += c * row[j]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        # find a pivot
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0:
                    if pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]]):
                        pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        # clear row and column t
        while True:
            progressed = False
            for i in range(t + 1, m):
                if d[i][t]:
                    c = d[i][t] // d[t][t]
                    add_row(i, t, -c)
                    if d[i][t]:
                        swap_rows(i, t)
                    progressed = True
            for j in range(t + 1, n):
                if d[t][j]:
                    c = d[t][j] // d[t][t]
                    add_col(j, t, -c)
                    if d[t][j]:
                        swap_cols(j, t)
                    progressed = True
            if not progressed:
                break
        # enforce divisibility d_t | d_{t+1..}
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % d[t][t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(t, bad, 1)
            continue
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return SmithForm(d, u, v)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus invariant factors > 1."""

    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


def cokernel(a, ambient_rank: int | None = None) -> AbelianGroup:
    """Z^m / column-span of the m x n matrix ``a``.

    ``ambient_rank`` defaults to the row count; pass it explicitly for an
    empty matrix viewed as a map into Z^m.
    """
    m, n = dims(a)
    if ambient_rank is None:
        ambient_rank = m
    if n == 0 or m == 0:
        return AbelianGroup(rank=ambient_rank)
    divisors = smith_normal_form(a).divisors
    torsion = tuple(d for d in divisors if d > 1)
    return AbelianGroup(rank=ambient_rank - len(divisors), torsion=torsion)


def kernel_basis(a) -> list[list[int]]:
    """Integer basis of the null space of ``a`` (vectors as columns of v)."""
    m, n = dims(a)
    if n == 0:
        return []
    if m == 0:
        return [row[:] for row in identity(n)]
    sf = smith_normal_form(a)
    r = len(sf.divisors)
    cols = transpose(sf.v)
    return [cols[j] for j in range(r, n)]


def rank(a) -> int:
    m, n = dims(a)
    if m == 0 or n == 0:
        return 0
    return len(smith_normal_form(a).divisors)


def det(a) -> int:
    m, n = dims(a)
    if m != n:
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return 1
    # Bareiss fraction-free elimination
    b = copy(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if b[k][k] == 0:
            for i in range(k + 1, n):
                if b[i][k] != 0:
                    b[i], b[k] = b[k], b[i]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                b[i][j] = (b[i][j] * b[k][k] - b[i][k] * b[k][j]) // prev
        prev = b[k][k]
    return sign * b[n - 1][n - 1]


def solve(a, b) -> list[int] | None:
    """An integer solution x of a x = b, or None if none exists."""
    m, n = dims(a)
    if len(b) != m:
        raise ValueError("dimension mismatch")
    if n == 0:
        return [] if all(x == 0 for x in b) else None
    sf = smith_normal_form(a)
    bp = matvec(sf.u, list(b))
    y = [0] * n
    for i in range(m):
        d = sf.d[i][i] if i < n else 0
        if d == 0:
            if bp[i] != 0:
                return None
        else:
            if bp[i] % d != 0:
                return None
            y[i] = bp[i] // d
    return matvec(sf.v, y)


def is_unimodular(a) -> bool:
    m, n = dims(a)
    return m == n and abs(det(a)) == 1


# ---------------------------------------------------------------------------
# Signature of a symmetric matrix, by exact congruence diagonalization


def inertia(q) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric integer matrix."""
    if not is_symmetric(q):
        raise ValueError("matrix is not symmetric")
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    pos = neg = zero = 0
    start = 0
    while start < n:
        # choose a nonzero diagonal pivot, creating one if necessary
        p = None
        for i in range(start, n):
            if a[i][i] != 0:
                p = i
                break
        if p is None:
            offdiag = None
            for i in range(start, n):
                for j in range(i + 1, n):
                    if a[i][j] != 0:
                        offdiag = (i, j)
                        break
                if offdiag:
                    break
            if offdiag is None:
                zero += n - start
                break
            i, j = offdiag
            # row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        if p != start:
            a[p], a[start] = a[start], a[p]
            for row in a:
                row[p], row[start] = row[start], row[p]
        piv = a[start][start]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        for i in range(start + 1, n):
            if a[i][start] != 0:
                c = a[i][start] / piv
                for k in range(n):
                    a[i][k] -= c * a[start][k]
        for i in range(start + 1, n):
            if a[start][i] != 0:
                c = a[start][i] / piv
                for k in range(n):
                    a[k][i] -= c * a[k][start]
        start += 1
    return pos, neg, zero


def signature(q) -> int:
    pos, neg, _ = inertia(q)
    return pos - neg

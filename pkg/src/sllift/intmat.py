"""Exact integer and mod-q matrix algebra.

Determinants, adjugates, maximal minors, the mod-q row-combination solver,
and rational size reduction against a fixed basis.  All arithmetic is exact;
the only float in this module is the informational operator-norm estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadShape, DependentRows, NotInvertible, NotSquare


class IntMatrix:
    """Immutable dense matrix with arbitrary-precision integer entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if not rows or not rows[0]:
            raise BadShape("matrix must have positive dimensions")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise BadShape("ragged rows")
        object.__setattr__(self, "rows", rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        )

    def row(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.rows))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise BadShape(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        cols = other.transpose().rows
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows)
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.mul(other)

    def reduce_mod(self, q: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(x % q for x in r) for r in self.rows))

    def with_row(self, v) -> "IntMatrix":
        """New matrix with v appended as the last row."""
        return IntMatrix(self.rows + (tuple(int(x) for x in v),))

    def max_norm(self) -> int:
        return max(abs(x) for r in self.rows for x in r)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"IntMatrix({list(map(list, self.rows))})"


@dataclass(frozen=True)
class NormReport:
    """Max absolute entry plus a float spectral-norm estimate (tables only)."""

    max_norm: int
    op_norm_estimate: float


def _det_cofactor(rows) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    first = rows[0]
    rest = rows[1:]
    for j, a in enumerate(first):
        if a == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rest]
        term = a * _det_cofactor(minor)
        total += term if j % 2 == 0 else -term
    return total


def _det_bareiss(rows) -> int:
    """Fraction-free Gaussian elimination; exact for any size."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(m: IntMatrix) -> int:
    """Exact determinant; cofactor expansion for n <= 4, Bareiss above."""
    if m.nrows != m.ncols:
        raise NotSquare(f"{m.nrows}x{m.ncols} matrix")
    if m.nrows <= 4:
        return _det_cofactor(m.rows)
    return _det_bareiss(m.rows)


def adjugate(m: IntMatrix) -> IntMatrix:
    """Exact adjugate: adj(M)[i][j] = (-1)^(i+j) det(M without row j, col i)."""
    if m.nrows != m.ncols:
        raise NotSquare(f"{m.nrows}x{m.ncols} matrix")
    n = m.nrows
    if n == 1:
        return IntMatrix(((1,),))
    rows = m.rows
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        without_i = rows[:i] + rows[i + 1 :]
        for j in range(n):
            minor = [r[:j] + r[j + 1 :] for r in without_i]
            c = _det_cofactor(minor) if n - 1 <= 4 else _det_bareiss(minor)
            out[j][i] = c if (i + j) % 2 == 0 else -c
    return IntMatrix(out)


def adjugate_mod(m: IntMatrix, q: int) -> IntMatrix:
    """Inverse mod q of a matrix with det = 1 mod q (its adjugate reduced)."""
    d = det(m) % q
    if d != 1 % q:
        raise NotInvertible(f"det is {d} mod {q}, need 1")
    return adjugate(m).reduce_mod(q)


def maximal_minors(b: IntMatrix) -> tuple[int, ...]:
    """Signed maximal minors c of an (n-1) x n matrix.

    Signs are fixed so det(stack(B, v)) = <v, c> for every row vector v,
    i.e. c_i = (-1)^(n+i) det(B with column i deleted), i counted from 1.
    """
    n = b.ncols
    if b.nrows != n - 1:
        raise BadShape(f"need (n-1) x n, got {b.nrows}x{b.ncols}")
    out = []
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in b.rows]
        d = _det_cofactor(minor) if n - 1 <= 4 else _det_bareiss(minor)
        out.append(d if (n + j + 1) % 2 == 0 else -d)
    return tuple(out)


def solve_mod(a: IntMatrix, w, q: int) -> tuple[int, ...]:
    """Coefficients (a_1..a_n) mod q with sum a_i * row_i(A) = w mod q.

    A must have det = 1 mod q; the solve goes through the adjugate, so the
    last coefficient equals the Cramer determinant det(rows 1..n-1, w) mod q
    and in particular vanishes whenever that determinant does.
    """
    n = a.nrows
    w = tuple(int(x) % q for x in w)
    if len(w) != n:
        raise BadShape(f"vector length {len(w)} vs matrix size {n}")
    inv = adjugate_mod(a, q)
    return tuple(
        sum(w[i] * inv.rows[i][j] for i in range(n)) % q for j in range(n)
    )


def _solve_fractions(g, rhs):
    """Exact solve of the square system g * x = rhs over Fraction."""
    k = len(g)
    m = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(g, rhs)]
    for col in range(k):
        piv = next((i for i in range(col, k) if m[i][col] != 0), None)
        if piv is None:
            raise DependentRows("Gram matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for i in range(k):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [m[i][k] for i in range(k)]


def size_reduce(v, b: IntMatrix) -> tuple[int, ...]:
    """Reduce v modulo the row lattice of B by nearest-integer projection.

    Solves the exact rational normal equations G a = B v^T (G = B B^T) and
    returns v - sum round(a_i) row_i(B).  The output is congruent to v mod
    the row lattice; when the component of v orthogonal to the rows has
    length at most 1 (as in unimodular completion), its max norm is at most
    (n/2) max_norm(B) + 1.  Arithmetic is exact rational, never float.
    """
    v = tuple(int(x) for x in v)
    if len(v) != b.ncols:
        raise BadShape(f"vector length {len(v)} vs {b.nrows}x{b.ncols}")
    rows = b.rows
    g = [[sum(x * y for x, y in zip(r1, r2)) for r2 in rows] for r1 in rows]
    rhs = [sum(x * y for x, y in zip(r, v)) for r in rows]
    alpha = _solve_fractions(g, rhs)
    out = list(v)
    for coeff, row in zip(alpha, rows):
        k = (2 * coeff + 1) // 2  # nearest integer, ties toward +inf
        if k:
            for j in range(len(out)):
                out[j] -= k * row[j]
    return tuple(out)


def op_norm_estimate(m: IntMatrix, tol: float = 1e-9, max_iter: int = 10000) -> float:
    """Largest singular value by power iteration on A^T A (informational).

    Started from the basis vector of the column holding the largest entry,
    so the estimate is never below the max norm; it approaches the true
    operator norm from below.
    """
    top = m.max_norm()
    if top == 0:
        return 0.0
    try:
        scale = float(top)
    except OverflowError:
        return math.inf
    a = [[x / scale for x in r] for r in m.rows]
    nr, nc = m.nrows, m.ncols
    j_star = max(
        ((i, j) for i in range(nr) for j in range(nc)),
        key=lambda ij: abs(m.rows[ij[0]][ij[1]]),
    )[1]
    v = [1.0 if j == j_star else 0.0 for j in range(nc)]
    last = 0.0
    for _ in range(max_iter):
        w = [sum(a[i][j] * v[j] for j in range(nc)) for i in range(nr)]
        u = [sum(a[i][j] * w[i] for i in range(nr)) for j in range(nc)]
        nv = math.sqrt(sum(x * x for x in v))
        sigma = math.sqrt(sum(x * x for x in w)) / nv
        if abs(sigma - last) <= tol * max(sigma, 1.0):
            last = max(last, sigma)
            break
        last = max(last, sigma)
        nu = math.sqrt(sum(x * x for x in u))
        if nu == 0.0:
            break
        v = [x / nu for x in u]
    return last * scale


def norm_report(m: IntMatrix) -> NormReport:
    return NormReport(max_norm=m.max_norm(), op_norm_estimate=op_norm_estimate(m))

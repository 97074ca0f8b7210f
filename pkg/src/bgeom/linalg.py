"""Exact linear algebra over the rationals.

Matrices are tuples of tuples of :class:`fractions.Fraction`; vectors are
tuples. Everything here is small and dense, sized for Picard lattices of a
few dozen generators.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


class SingularMatrixError(ArithmeticError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing float input {x!r}; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def vector(xs: Iterable) -> Vector:
    return tuple(as_fraction(x) for x in xs)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vector(r) for r in rows)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def scale(c, u: Sequence[Fraction]) -> Vector:
    c = as_fraction(c)
    return tuple(c * a for a in u)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def bilinear(gram: Matrix, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            for j, vj in enumerate(v):
                if vj:
                    total += ui * row[j] * vj
    return total


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    na, nb = len(a), len(b)
    rows = [tuple(r) + zeros(nb) for r in a]
    rows += [zeros(na) + tuple(r) for r in b]
    return tuple(rows)


def ldl_pivots(m: Matrix) -> list[Fraction] | None:
    """Pivots of an unpivoted LDL^T factorization, or None if a zero pivot stops it.

    A symmetric matrix is negative definite exactly when this returns a list
    of strictly negative pivots.
    """
    n = len(m)
    a = [list(r) for r in m]
    pivots = []
    for k in range(n):
        p = a[k][k]
        if p == 0:
            return None
        pivots.append(p)
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return pivots


def is_negative_definite(m: Matrix) -> bool:
    if not m:
        return True
    piv = ldl_pivots(m)
    return piv is not None and all(p < 0 for p in piv)


def inertia(m: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric matrix, by exact congruence.

    Symmetric elimination with diagonal pivoting; when the remaining diagonal
    vanishes but an off-diagonal entry a_ij does not, row/column j is added
    to i, which makes the new diagonal entry 2*a_ij.
    """
    if not is_symmetric(m):
        raise ValueError("inertia needs a symmetric matrix")
    a = [list(r) for r in m]
    pos = neg = 0
    while a:
        n = len(a)
        k = next((i for i in range(n) if a[i][i] != 0), None)
        if k is None:
            hit = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if hit is None:
                return pos, neg, n
            i, j = hit
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            k = i
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in range(n) if i != k]
        a = [[a[i][j] - a[i][k] * a[k][j] / p for j in rest] for i in rest]
    return pos, neg, 0


def solve(m: Matrix, b: Sequence[Fraction]) -> Vector:
    """Solve m x = b for square nonsingular m by Gauss-Jordan elimination."""
    n = len(m)
    if len(b) != n:
        raise ValueError("dimension mismatch")
    aug = [list(m[i]) + [as_fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        row = [x / p for x in aug[col]]
        aug[col] = row
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], row)]
    return tuple(aug[i][n] for i in range(n))


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    cols = [solve(m, unit(n, j)) for j in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    a = [list(r) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def transpose(m: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matvec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, v) for row in m)

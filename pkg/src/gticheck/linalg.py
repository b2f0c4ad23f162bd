"""Small dense linear algebra over scalars (exact when the entries are rational).

Matrices are tuples of row tuples.  Dimensions here never exceed 8, so plain
Gaussian elimination is the right tool; numpy would lose exactness.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from typing import Sequence

from .scalar import EPS_GEOM, Scalar, is_exact, to_scalar

Matrix = tuple  # tuple[tuple[Scalar, ...], ...]
Vector = tuple


class SingularMatrixError(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    out = tuple(tuple(to_scalar(v) for v in row) for row in rows)
    if not out or any(len(r) != len(out[0]) for r in out):
        raise ValueError("matrix rows must be non-empty and of equal length")
    return out


def as_vector(values: Sequence) -> Vector:
    return tuple(to_scalar(v) for v in values)


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), len(a[0])


def identity(d: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def diag(values: Sequence) -> Matrix:
    vals = as_vector(values)
    d = len(vals)
    return tuple(tuple(vals[i] if i == j else Fraction(0) for j in range(d)) for i in range(d))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def dot(u: Sequence, v: Sequence) -> Scalar:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def scale(a: Matrix, c: Scalar) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def _pivot_ok(x: Scalar, exact: bool) -> bool:
    return x != 0 if exact else abs(x) > EPS_GEOM


def _eliminate(a: Matrix):
    """Row-reduce a copy of ``a``; returns (rows, pivot columns, sign)."""
    exact = is_exact(*a)
    m = [list(r) for r in a]
    nrows, ncols = len(m), len(m[0])
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        if exact:
            piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        else:
            best = max(range(r, nrows), key=lambda i: abs(m[i][c]))
            piv = best if _pivot_ok(m[best][c], False) else None
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        for i in range(r + 1, nrows):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots, sign


def det(a: Matrix) -> Scalar:
    n, k = shape(a)
    if n != k:
        raise ValueError("determinant of a non-square matrix")
    m, pivots, sign = _eliminate(a)
    if len(pivots) < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out = out * m[i][i]
    return out


def rank(a: Matrix) -> int:
    if is_exact(*a):
        return len(_eliminate(a)[1])
    # column scaling keeps the rank and makes the SVD tolerance scale-free
    arr = np.array(to_float(a))
    norms = np.linalg.norm(arr, axis=0)
    if not np.any(norms):
        return 0
    arr = arr[:, norms > 0] / norms[norms > 0]
    return int(np.linalg.matrix_rank(arr))


def inverse(a: Matrix) -> Matrix:
    n, k = shape(a)
    if n != k:
        raise ValueError("inverse of a non-square matrix")
    exact = is_exact(*a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        if exact:
            piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        else:
            piv = max(range(c, n), key=lambda i: abs(aug[i][c]))
            if not _pivot_ok(aug[piv][c], False):
                piv = None
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def solve(a: Matrix, b: Sequence) -> Vector:
    return matvec(inverse(a), b)


def pseudo_inverse(b: Matrix) -> Matrix:
    """Left inverse ``(BᵀB)⁻¹Bᵀ`` of a matrix with independent columns."""
    bt = transpose(b)
    return matmul(inverse(matmul(bt, b)), bt)


def mat_pow(a: Matrix, j: int) -> Matrix:
    n = len(a)
    if j < 0:
        a, j = inverse(a), -j
    out = identity(n)
    base = a
    while j:
        if j & 1:
            out = matmul(out, base)
        base = matmul(base, base)
        j >>= 1
    return out


def is_diagonal(a: Matrix) -> bool:
    return all(a[i][j] == 0 for i in range(len(a)) for j in range(len(a[0])) if i != j)


def columns(a: Matrix) -> list[Vector]:
    return [tuple(col) for col in transpose(a)]


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(tuple(tuple(c) for c in cols))


def to_float(a: Matrix) -> list[list[float]]:
    return [[float(x) for x in row] for row in a]


def lll_reduce(basis: Matrix, delta: Fraction = Fraction(3, 4)) -> tuple[Matrix, Matrix]:
    """LLL-reduce the columns of ``basis``.

    Returns ``(reduced, U)`` with ``reduced = basis @ U`` and ``U`` unimodular.
    Exact for rational input; intended for the tiny dimensions used here.
    """
    cols = [list(c) for c in columns(basis)]
    k = len(cols)
    u = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]  # columns of U

    def gram_schmidt():
        star, mu = [], [[Fraction(0)] * k for _ in range(k)]
        norms = []
        for i in range(k):
            v = list(cols[i])
            for j in range(i):
                mu[i][j] = dot(cols[i], star[j]) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            star.append(v)
            norms.append(dot(v, v))
        return mu, norms

    mu, norms = gram_schmidt()
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                cols[i] = [x - q * y for x, y in zip(cols[i], cols[j])]
                u[i] = [x - q * y for x, y in zip(u[i], u[j])]
                mu, norms = gram_schmidt()
        if norms[i] >= (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            cols[i], cols[i - 1] = cols[i - 1], cols[i]
            u[i], u[i - 1] = u[i - 1], u[i]
            mu, norms = gram_schmidt()
            i = max(i - 1, 1)
    return from_columns(cols), from_columns(u)

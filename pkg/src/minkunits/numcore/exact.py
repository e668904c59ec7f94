"""Exact linear algebra over the integers and rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Poly, degree, normalize

Matrix = list  # list[list[Fraction | int]]


def _copy(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free (Bareiss) elimination on integer or rational input."""
    m = _copy(rows)
    if not m or not m[0]:
        return 0
    # clear denominators row by row so Bareiss stays integral
    for row in m:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        row[:] = [x * den for x in row]
    nrows, ncols = len(m), len(m[0])
    r, prev = 0, Fraction(1)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) / prev
            m[i][c] = Fraction(0)
        prev = m[r][c]
        r += 1
        if r == nrows:
            break
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def det(rows: Sequence[Sequence]) -> Fraction:
    m = _copy(rows)
    n = len(m)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else Fraction(1)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = _copy(rows)
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right kernel {x : rows·x = 0}."""
    m, pivots = rref(rows)
    ncols = len(rows[0]) if rows else 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [m[i][n] for i in range(n)]


def mat_mul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def charpoly(rows: Sequence[Sequence]) -> Poly:
    """Characteristic polynomial det(xI − A), lowest degree first (Faddeev–LeVerrier)."""
    a = _copy(rows)
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = mat_mul(a, m) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            am[i][i] += coeffs[n - k + 1]
        m = am
        tr = sum(mat_mul(a, m)[i][i] for i in range(n))
        coeffs[n - k] = -tr / k
    return tuple(coeffs)


def sylvester(p: Poly, q: Poly) -> list[list[Fraction]]:
    m, n = degree(p), degree(q)
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant(p: Poly, q: Poly) -> Fraction:
    p, q = normalize(p), normalize(q)
    if not p or not q:
        return Fraction(0)
    if degree(p) == 0:
        return p[0] ** degree(q)
    if degree(q) == 0:
        return q[0] ** degree(p)
    return det(sylvester(p, q))

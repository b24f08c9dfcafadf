"""Exact integer and rational matrix helpers.

Matrices are tuples of row tuples holding Python ``int`` or ``Fraction``.
Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Matrix:
    return tuple((0,) * n for _ in range(m))


def transpose(a):
    return tuple(zip(*a)) if a and a[0] else tuple(() for _ in range(len(a[0]) if a else 0))


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def matpow(a, k: int):
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def congruent(gram, basis):
    """Return ``basis^T * gram * basis`` (columns of ``basis`` are vectors)."""
    return matmul(transpose(basis), matmul(gram, basis))


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        k = len(b)
        for row in b:
            rows.append((0,) * offset + tuple(row) + (0,) * (n - offset - k))
        offset += k
    return tuple(rows)


def hstack(*parts):
    return tuple(sum((tuple(p[i]) for p in parts), ()) for i in range(len(parts[0])))


def columns(a) -> list[tuple]:
    return list(transpose(a))


def from_columns(cols: Sequence[Sequence[int]], nrows: int | None = None):
    if not cols:
        return tuple(() for _ in range(nrows or 0))
    return transpose(tuple(tuple(c) for c in cols))


def determinant(a) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(a) -> int:
    """Rank over the rationals (entries may be ints or Fractions)."""
    m = [[Fraction(x) for x in row] for row in a]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, nrows):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def inverse(a) -> tuple[tuple[Fraction, ...], ...]:
    """Exact rational inverse by Gauss-Jordan; raises on singular input."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[pivot] = m[pivot], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def is_integral(a) -> bool:
    return all(Fraction(x).denominator == 1 for row in a for x in row)


def to_int(a) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in a)


def content(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g


# ---------------------------------------------------------------------------
# Polynomials: coefficient lists, lowest degree first.


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_divmod(p, q):
    """Division by a monic integer polynomial ``q``."""
    p = list(p)
    if q[-1] != 1:
        raise ValueError("divisor must be monic")
    dq = len(q) - 1
    if len(p) - 1 < dq:
        return [0], p
    quot = [0] * (len(p) - dq)
    for i in range(len(p) - 1, dq - 1, -1):
        c = p[i]
        quot[i - dq] = c
        if c:
            for j in range(dq + 1):
                p[i - dq + j] -= c * q[j]
    rem = p[:dq] or [0]
    return quot, rem


def poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


_CYCLOTOMIC: dict[int, list[int]] = {}


def cyclotomic(n: int) -> list[int]:
    """Integer coefficients of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    if n not in _CYCLOTOMIC:
        num = [-1] + [0] * (n - 1) + [1]
        for d in range(1, n):
            if n % d == 0:
                num, rem = poly_divmod(num, cyclotomic(d))
                assert not any(rem)
        _CYCLOTOMIC[n] = poly_trim(num)
    return list(_CYCLOTOMIC[n])


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def poly_eval_matrix(p, a):
    """Horner evaluation of an integer polynomial at a square matrix."""
    n = len(a)
    result = zeros(n, n)
    for c in reversed(p):
        result = add(matmul(result, a), scale(identity(n), c))
    return result


def characteristic_polynomial(a) -> list[int]:
    """Characteristic polynomial det(xI - A), lowest degree first.

    Reduces to upper Hessenberg form by exact rational similarity
    transforms, then runs the standard Hessenberg recurrence.
    """
    n = len(a)
    h = [[Fraction(x) for x in row] for row in a]
    for m in range(1, n - 1):
        pivot = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if pivot is None:
            continue
        if pivot != m:
            h[m], h[pivot] = h[pivot], h[m]
            for row in h:
                row[m], row[pivot] = row[pivot], row[m]
        for i in range(m + 1, n):
            if h[i][m - 1] == 0:
                continue
            f = h[i][m - 1] / h[m][m - 1]
            h[i] = [x - f * y for x, y in zip(h[i], h[m])]
            for row in h:
                row[m] += f * row[i]
    # p_k(x) = charpoly of leading k x k block
    polys = [[Fraction(1)]]
    for k in range(1, n + 1):
        pk = poly_mul([-h[k - 1][k - 1], Fraction(1)], polys[k - 1])
        t = Fraction(1)
        for i in range(1, k):
            t *= h[k - i][k - i - 1]
            term = [t * h[k - i - 1][k - 1] * c for c in polys[k - i - 1]]
            for j, c in enumerate(term):
                pk[j] -= c
        polys.append(pk)
    out = polys[n]
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out]

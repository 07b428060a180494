"""Exact ranks of integer matrices.

Matrices are lists of rows of Python ints.  Over the rationals, rank is
computed by fraction-free (Bareiss) elimination: every division is exact,
so the arithmetic stays in arbitrary-precision integers.  Over a prime
field, plain Gaussian elimination with modular inverses is used.
"""

from __future__ import annotations

IntMatrix = list[list[int]]


def zero_matrix(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def is_zero(matrix: IntMatrix) -> bool:
    return all(entry == 0 for row in matrix for entry in row)


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {inner}x{cols}")
    out = zero_matrix(rows, cols)
    for i in range(rows):
        row = a[i]
        for k in range(inner):
            coeff = row[k]
            if coeff:
                target = out[i]
                source = b[k]
                for j in range(cols):
                    target[j] += coeff * source[j]
    return out


def rank_fraction_free(matrix: IntMatrix) -> int:
    """Rank over the rationals via Bareiss elimination (exact divisions)."""
    rows = [list(map(int, row)) for row in matrix]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    rank = 0
    prev = 1
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, m) if rows[i][col]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][col]
        for i in range(r + 1, m):
            for j in range(col + 1, n):
                rows[i][j] = (pivot * rows[i][j] - rows[i][col] * rows[r][j]) // prev
            rows[i][col] = 0
        prev = pivot
        rank += 1
        r += 1
        if r == m:
            break
    return rank


def _check_prime(p: int) -> None:
    if p < 2:
        raise ValueError(f"characteristic must be 0 or a prime, got {p}")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")
        d += 1


def rank_mod_p(matrix: IntMatrix, p: int) -> int:
    """Rank over the field with p elements."""
    _check_prime(p)
    rows = [[entry % p for entry in row] for row in matrix]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    rank = 0
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, m) if rows[i][col]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][col], -1, p)
        for i in range(r + 1, m):
            factor = (rows[i][col] * inv) % p
            if factor:
                for j in range(col, n):
                    rows[i][j] = (rows[i][j] - factor * rows[r][j]) % p
        rank += 1
        r += 1
        if r == m:
            break
    return rank


def rank(matrix: IntMatrix, characteristic: int = 0) -> int:
    if characteristic == 0:
        return rank_fraction_free(matrix)
    return rank_mod_p(matrix, characteristic)

"""Exact matrix algebra over the integers and rationals.

Matrices are tuples of tuples (immutable at API borders, lists inside the
algorithms). No floating point anywhere.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatchError

Matrix = tuple[tuple, ...]


def freeze(rows) -> Matrix:
    return tuple(tuple(row) for row in rows)


def thaw(mat) -> list[list]:
    return [list(row) for row in mat]


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(mat) -> Matrix:
    return tuple(zip(*mat)) if mat else ()


def mat_mul(a, b) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatchError("matrix product shape mismatch")
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(mat, vec) -> tuple:
    if mat and len(mat[0]) != len(vec):
        raise DimensionMismatchError("matrix-vector shape mismatch")
    return tuple(sum(x * y for x, y in zip(row, vec)) for row in mat)


def mat_add(a, b) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a, b) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(a, c) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def is_zero(mat) -> bool:
    return all(x == 0 for row in mat for x in row)


def mat_pow(mat, k: int) -> Matrix:
    n = len(mat)
    out = identity(n)
    base = freeze(mat)
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def det_bareiss(mat) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    a = thaw(mat)
    n = len(a)
    if n == 0:
        return 1
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
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def det_fraction(mat) -> Fraction:
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def invert(mat) -> Matrix:
    """Exact inverse over the rationals (Fractions)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return tuple(tuple(row[n:]) for row in a)


def invert_unimodular(mat) -> Matrix:
    """Integer inverse of a matrix with determinant ±1."""
    inv = invert(mat)
    return tuple(tuple(int(x) for x in row) for row in inv)


def solve(mat, rhs) -> tuple | None:
    """One rational solution x of mat @ x == rhs, or None."""
    m, n = len(mat), len(mat[0]) if mat else 0
    a = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(mat, rhs)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in pivots:
        x[c] = a[i][n]
    return tuple(x)


def rational_rank(mat) -> int:
    a = [[Fraction(x) for x in row] for row in mat]
    m = len(a)
    n = len(a[0]) if a else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][c]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank


# ---------------------------------------------------------------------------
# Integer normal forms


def hermite_rows(mat) -> tuple[Matrix, int]:
    """Canonical row Hermite form of an integer matrix.

    Returns (H, rank): zero rows dropped, pivots positive, entries above a
    pivot reduced into [0, pivot). Row operations only, so the row lattice
    is preserved exactly.
    """
    a = thaw(mat)
    m = len(a)
    n = len(a[0]) if a else 0
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, m):
            if a[i][col] != 0 and (piv is None or abs(a[i][col]) < abs(a[piv][col])):
                piv = i
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        while True:
            done = True
            for i in range(row + 1, m):
                if a[i][col] != 0:
                    q = a[i][col] // a[row][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                    if a[i][col] != 0:
                        a[row], a[i] = a[i], a[row]
                        done = False
            if done:
                break
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
        for i in range(row):
            q = a[i][col] // a[row][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[row])]
        row += 1
        if row == m:
            break
    return freeze(a[:row]), row


def smith_normal_form(mat) -> tuple[Matrix, Matrix, Matrix]:
    """(D, U, V) with U @ mat @ V == D, U, V unimodular, D diagonal with
    d1 | d2 | ... nonnegative invariant factors."""
    a = thaw(mat)
    m = len(a)
    n = len(a[0]) if a else 0
    u = thaw(identity(m))
    v = thaw(identity(n))

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def combine_rows(i, j, x, y, z, w):
        # rows (i, j) <- (x*i + y*j, z*i + w*j); x*w - y*z == ±1
        a[i], a[j] = (
            [x * p + y * q for p, q in zip(a[i], a[j])],
            [z * p + w * q for p, q in zip(a[i], a[j])],
        )
        u[i], u[j] = (
            [x * p + y * q for p, q in zip(u[i], u[j])],
            [z * p + w * q for p, q in zip(u[i], u[j])],
        )

    def combine_cols(i, j, x, y, z, w):
        for row in a:
            row[i], row[j] = x * row[i] + y * row[j], z * row[i] + w * row[j]
        for row in v:
            row[i], row[j] = x * row[i] + y * row[j], z * row[i] + w * row[j]

    from .intmath import xgcd

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            for i in range(t + 1, m):
                if a[i][t] == 0:
                    continue
                if a[i][t] % a[t][t] == 0:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                else:
                    x, y, g = xgcd(a[t][t], a[i][t])
                    combine_rows(t, i, x, y, -(a[i][t] // g), a[t][t] // g)
            if any(a[i][t] for i in range(t + 1, m)):
                continue
            for j in range(t + 1, n):
                if a[t][j] == 0:
                    continue
                if a[t][j] % a[t][t] == 0:
                    c = -(a[t][j] // a[t][t])
                    for row in a:
                        row[j] += c * row[t]
                    for row in v:
                        row[j] += c * row[t]
                else:
                    x, y, g = xgcd(a[t][t], a[t][j])
                    combine_cols(t, j, x, y, -(a[t][j] // g), a[t][t] // g)
            if any(a[i][t] for i in range(t + 1, m)) or any(
                a[t][j] for j in range(t + 1, n)
            ):
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return freeze(a), freeze(u), freeze(v)


def snf_invariant_factors(mat) -> list[int]:
    d, _, _ = smith_normal_form(mat)
    k = min(len(d), len(d[0]) if d else 0)
    return [d[i][i] for i in range(k) if d[i][i] != 0]


def left_kernel(mat) -> Matrix:
    """Basis rows of {x : x @ mat == 0}; saturated in Z^m by construction."""
    d, u, _ = smith_normal_form(mat)
    k = min(len(d), len(d[0]) if d else 0)
    rank = sum(1 for i in range(k) if d[i][i] != 0)
    rows = u[rank:]
    h, _ = hermite_rows(rows)
    return h


def char_poly(mat) -> tuple[int, ...]:
    """Characteristic polynomial det(xI - mat), ascending coefficients.

    Faddeev-LeVerrier; all intermediate divisions are exact.
    """
    n = len(mat)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m_k = identity(n)
    c = 1
    for k in range(1, n + 1):
        am = mat_mul(mat, m_k)
        tr = sum(am[i][i] for i in range(n))
        c = -tr // k
        coeffs[n - k] = c
        m_k = tuple(
            tuple(am[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n)
        )
    return tuple(coeffs)

"""Exact integer and rational linear algebra used by the geometric layers.

Everything operates on plain Python ints / fractions.Fraction; no floating
point is permitted anywhere in the kernel.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
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
                # Bareiss: exact division by the previous pivot
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(rows: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns (R, Rinv, diag) with R @ A @ C = D for some unimodular C, where
    R is unimodular with inverse Rinv and diag lists the diagonal of D.
    Column operations are not tracked; callers only need the row side.
    Pivoting is deterministic (smallest absolute value, then position), so
    the output is platform independent.
    """
    a = [list(r) for r in rows]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    r_mat = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    r_inv = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        r_mat[i], r_mat[j] = r_mat[j], r_mat[i]
        for row in r_inv:
            row[i], row[j] = row[j], row[i]

    def row_add(i, j, k):
        # row_i += k * row_j ; inverse op: column_j -= k * column_i
        a[i] = [x + k * y for x, y in zip(a[i], a[j])]
        r_mat[i] = [x + k * y for x, y in zip(r_mat[i], r_mat[j])]
        for row in r_inv:
            row[j] -= k * row[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        r_mat[i] = [-x for x in r_mat[i]]
        for row in r_inv:
            row[i] = -row[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]

    def col_add(i, j, k):
        for row in a:
            row[i] += k * row[j]

    def col_neg(i):
        for row in a:
            row[i] = -row[i]

    def clear_step(t: int) -> bool:
        # deterministic pivot: smallest |entry| != 0, earliest position
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            return False
        pi, pj = pivot
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        if a[t][t] < 0:
            row_neg(t)
        while True:
            # clear column t below the pivot; a nonzero remainder is a
            # strictly smaller pivot, so this terminates
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_add(i, t, -q)
                    if a[i][t]:
                        row_swap(t, i)
            if any(a[i][t] for i in range(t + 1, nr)):
                continue
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_add(j, t, -q)
                    if a[t][j]:
                        col_swap(t, j)
            if any(a[t][j] for j in range(t + 1, nc)):
                continue
            if any(a[i][t] for i in range(t + 1, nr)):
                continue
            break
        return True

    t = 0
    while t < min(nr, nc) and clear_step(t):
        t += 1
    rank = t
    # enforce the divisibility chain d1 | d2 | ...
    k = 0
    while k < rank - 1:
        if a[k + 1][k + 1] % a[k][k] == 0:
            k += 1
            continue
        col_add(k, k + 1, 1)
        for s in range(k, rank):
            clear_step(s)
        k = max(0, k - 1)
    diag = [a[i][i] for i in range(min(nr, nc))]
    return r_mat, r_inv, diag


def rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        sel = None
        for i in range(r, nr):
            if m[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    _, pivots = rref(rows)
    return len(pivots)


def solve_columns(cols: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[list]:
    """Solve sum_j x_j * cols[j] = target for independent columns.

    Returns the coefficient list, or None when the system is inconsistent.
    Raises ValueError if the columns are linearly dependent (the caller is
    expected to pass an independent spanning subset).
    """
    ncols = len(cols)
    if ncols == 0:
        return [] if all(t == 0 for t in target) else None
    nr = len(target)
    aug = [[Fraction(cols[j][i]) for j in range(ncols)] + [Fraction(target[i])]
           for i in range(nr)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) != ncols:
        raise ValueError("columns are linearly dependent")
    sol = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        sol[c] = row[-1]
    return sol


def in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Exact membership of target in the rational span of the given vectors."""
    base = [list(map(Fraction, v)) for v in vectors]
    return matrix_rank(base) == matrix_rank(base + [list(map(Fraction, target))])

"""Exact linear algebra over Q (dense rows of Fractions) and a small
integer Smith normal form with transforms.

Pivoting is always by a caller-supplied column order, so results are
deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list
Matrix = list


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = [0] * ncols
        for t in range(inner):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(ncols):
                    if brow[j]:
                        new[j] = new[j] + x * brow[j]
        out.append(new)
    return out


def matvec(a: Matrix, v: Sequence) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def rref(rows: Sequence[Sequence], ncols: int,
         col_order: Sequence[int] | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.

    Columns are scanned in ``col_order`` (default left to right); the
    returned pivot list is in that scan order and row ``i`` of the result
    has its leading 1 in column ``pivots[i]``.
    """
    order = list(range(ncols)) if col_order is None else list(col_order)
    work = [[Fraction(x) for x in r] for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for col in order:
        if r == len(work):
            break
        sel = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        prow = work[r]
        inv = 1 / prow[col]
        if inv != 1:
            prow = [x * inv for x in prow]
            work[r] = prow
        nz = [j for j in range(ncols) if prow[j] != 0]
        for i in range(len(work)):
            if i != r:
                f = work[i][col]
                if f != 0:
                    row = work[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int,
              col_order: Sequence[int] | None = None) -> Matrix:
    """Basis of {v : rows·v = 0}, one vector per free column (in scan
    order) with a 1 in that column and zeros in the other free columns."""
    return nullspace_with_free(rows, ncols, col_order)[0]


def nullspace_with_free(rows: Sequence[Sequence], ncols: int,
                        col_order: Sequence[int] | None = None) -> tuple[Matrix, list[int]]:
    red, pivots = rref(rows, ncols, col_order)
    order = list(range(ncols)) if col_order is None else list(col_order)
    pivset = set(pivots)
    basis, frees = [], []
    for free in order:
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[free]
        basis.append(v)
        frees.append(free)
    return basis, frees


def solve(a: Matrix, b: Sequence, ncols: int | None = None) -> Vector | None:
    """One solution x of a·x = b, or None when inconsistent."""
    ncols = (len(a[0]) if a else 0) if ncols is None else ncols
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def in_span(vectors: Sequence[Sequence], v: Sequence, ncols: int) -> bool:
    base = rank(vectors, ncols) if vectors else 0
    return rank(list(vectors) + [list(v)], ncols) == base


def same_span(u: Sequence[Sequence], v: Sequence[Sequence], ncols: int) -> bool:
    ru = rank(u, ncols) if u else 0
    rv = rank(v, ncols) if v else 0
    if ru != rv:
        return False
    if not u:
        return True
    return rank(list(u) + list(v), ncols) == ru


# ---------- integer Smith normal form ----------

def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, S, V) with U·A·V = S diagonal, U and V unimodular and
    the diagonal entries non-negative with d_1 | d_2 | ...
    """
    m = len(a)
    n = len(a[0]) if m else 0
    s = [list(map(int, row)) for row in a]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        s[dst] = [x + k * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in s:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(s[i][j]), i, j) for i in range(t, m) for j in range(t, n) if s[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // s[t][t]))
                    if s[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // s[t][t]))
                    if s[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if s[i][j] % s[t][t]), None)
                if bad is not None:
                    add_row(t, bad[0], 1)
                    done = False
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, s, v

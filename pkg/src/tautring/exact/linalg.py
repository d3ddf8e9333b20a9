"""Exact linear algebra over Q: echelon forms, rank and nullspaces."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .poly import to_rational


def _integer_rows(matrix: Sequence[Sequence[object]]) -> list[list[int]]:
    rows = []
    for row in matrix:
        q = [to_rational(v) for v in row]
        scale = lcm(*(v.denominator for v in q)) if q else 1
        rows.append([int(v * scale) for v in q])
    return rows


def bareiss_echelon(matrix: Sequence[Sequence[object]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Returns the nonzero echelon rows (integers) and their pivot columns.
    Rows are first cleared of denominators, which does not change the
    row space.
    """
    m = _integer_rows(matrix)
    if not m:
        return [], []
    ncols = len(m[0])
    if any(len(r) != ncols for r in m):
        raise ValueError("ragged matrix")
    nrows = len(m)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            for j in range(c + 1, ncols):
                q, rem = divmod(piv * row[j] - f * prow[j], prev)
                assert rem == 0, "Bareiss division must be exact"
                row[j] = q
            row[c] = 0
        # rows above the pivot row are left untouched, so later quotients
        # only involve the pivot chain
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(matrix: Sequence[Sequence[object]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q of the row space (zero rows dropped)."""
    rows, pivots = bareiss_echelon(matrix)
    red = [[Fraction(v) for v in row] for row in rows]
    for k in range(len(red) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / red[k][c]
        red[k] = [v * inv for v in red[k]]
        for i in range(k):
            f = red[i][c]
            if f:
                red[i] = [a - f * b for a, b in zip(red[i], red[k])]
    return red, pivots


def rank(matrix: Sequence[Sequence[object]]) -> int:
    return len(bareiss_echelon(matrix)[1])


def primitive(vector: Sequence[object]) -> tuple[int, ...]:
    """Scale to coprime integers with the first nonzero entry positive."""
    q = [to_rational(v) for v in vector]
    nz = [v for v in q if v]
    if not nz:
        return tuple(0 for _ in q)
    den = lcm(*(v.denominator for v in nz))
    ints = [int(v * den) for v in q]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if nz[0] < 0:
        g = -g
    return tuple(v // g for v in ints)


def kernel_basis(matrix: Sequence[Sequence[object]], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Right nullspace of `matrix` as primitive integer vectors.

    The basis returned is the reduced row echelon basis of the kernel
    itself, each row rescaled by :func:`primitive`.  It depends only on
    the kernel, not on the elimination path.  `ncols` is needed when the
    matrix has no rows.
    """
    if matrix:
        ncols = len(matrix[0])
    elif ncols is None:
        raise ValueError("ncols is required for an empty matrix")
    red, pivots = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    vectors = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        vectors.append(v)
    if not vectors:
        return []
    kred, _ = rref(vectors)
    return [primitive(v) for v in kred]


def mat_vec(matrix: Sequence[Sequence[object]], vector: Sequence[object]) -> list[Fraction]:
    return [sum((to_rational(a) * to_rational(b) for a, b in zip(row, vector)), Fraction(0)) for row in matrix]

"""The two-variable polynomials phi_{a,b}(x, y).

phi_{a,b} is the sum of residues of (p'(z) + 3x)^a p'(z)^b / p(z) for the
cubic p(z) = z^3 - x z - y.  Two independent evaluation routes live here:
the two-term recursion (:func:`phi`) and direct reduction modulo the cubic
(:func:`phi_oracle_residue`).
"""
from __future__ import annotations

import threading
from fractions import Fraction

from .exact import Poly, VarSpace

PHI_SPACE = VarSpace.of(("x", 2), ("y", 3))

_X = Poly.var(PHI_SPACE, "x")
_Y = Poly.var(PHI_SPACE, "y")
_DISC = 27 * _Y**2 - 4 * _X**3


class PhiTable:
    """Memo of phi_{a,b}; safe to share between threads.

    Cells are only ever inserted once under the lock, so a reader sees a
    cell either absent or final.
    """

    def __init__(self):
        self._cells: dict[tuple[int, int], Poly] = {}
        self._lock = threading.Lock()

    def __contains__(self, key):
        return key in self._cells

    def __len__(self):
        return len(self._cells)

    def get(self, a: int, b: int) -> Poly:
        if a < 0 or b < 0:
            raise ValueError("phi indices must be nonnegative")
        cell = self._cells.get((a, b))
        if cell is not None:
            return cell
        with self._lock:
            self._fill(a, b)
            return self._cells[(a, b)]

    def _fill(self, a: int, b: int):
        cells = self._cells
        # column a = 0 from the depth-3 recursion in b
        top = a + b
        for k in range(top + 1):
            if (0, k) in cells:
                continue
            if k == 0:
                cells[(0, 0)] = Poly.zero(PHI_SPACE)
            elif k == 1:
                cells[(0, 1)] = Poly.const(PHI_SPACE, 3)
            elif k == 2:
                cells[(0, 2)] = 3 * _X
            else:
                cells[(0, k)] = 3 * _X * cells[(0, k - 1)] + _DISC * cells[(0, k - 3)]
        # phi_{r+1, k} = phi_{r, k+1} + 3x phi_{r, k}
        for r in range(1, a + 1):
            for k in range(top - r + 1):
                if (r, k) not in cells:
                    cells[(r, k)] = cells[(r - 1, k + 1)] + 3 * _X * cells[(r - 1, k)]


_TABLE = PhiTable()


def phi(a: int, b: int) -> Poly:
    """phi_{a,b} as a polynomial in x (weight 2) and y (weight 3)."""
    return _TABLE.get(a, b)


def phi_table() -> PhiTable:
    return _TABLE


# -- residue oracle ---------------------------------------------------------
# Univariate polynomials in z over Q[x, y] are lists of Polys, constant term
# first.  Nothing below touches the recursion.


def _zmul(f: list[Poly], g: list[Poly]) -> list[Poly]:
    out = [Poly.zero(PHI_SPACE) for _ in range(len(f) + len(g) - 1)]
    for i, fi in enumerate(f):
        if not fi:
            continue
        for j, gj in enumerate(g):
            if gj:
                out[i + j] = out[i + j] + fi * gj
    return out


def _reduce_mod_cubic(f: list[Poly]) -> list[Poly]:
    """Remainder of f modulo z^3 - x z - y, as [q0, q1, q2]."""
    f = list(f) + [Poly.zero(PHI_SPACE)] * max(0, 3 - len(f))
    for k in range(len(f) - 1, 2, -1):
        c = f[k]
        if c:
            # z^k = z^(k-3) (x z + y)
            f[k - 2] = f[k - 2] + c * _X
            f[k - 3] = f[k - 3] + c * _Y
            f[k] = Poly.zero(PHI_SPACE)
    return f[:3]


def phi_oracle_residue(a: int, b: int) -> Poly:
    """phi_{a,b} by reducing (p' + 3x)^a p'^b modulo p and reading off z^2.

    For a monic cubic with roots z_i the residue sum of z^k / p(z) is 0, 0, 1
    for k = 0, 1, 2, so only the z^2 coefficient of the remainder survives.
    """
    if a < 0 or b < 0:
        raise ValueError("phi indices must be nonnegative")
    dp = [-_X, Poly.zero(PHI_SPACE), Poly.const(PHI_SPACE, 3)]
    dp_shift = [2 * _X, Poly.zero(PHI_SPACE), Poly.const(PHI_SPACE, 3)]
    f = [Poly.const(PHI_SPACE, 1)]
    for factor, count in ((dp_shift, a), (dp, b)):
        for _ in range(count):
            f = _reduce_mod_cubic(_zmul(f, factor))
    return _reduce_mod_cubic(f)[2]


def phi_numeric(a: int, b: int, x0, y0) -> Fraction:
    return phi(a, b).evaluate({"x": x0, "y": y0})

"""Exact linear algebra over the rationals.

Plain Gaussian elimination on Fraction matrices.  The systems solved in this
package (ideal membership, closure of subbundles, cometric solution spaces,
witness searches for closedness/exactness) are all moderate in size, so a
straightforward exact RREF is both fast enough and certificate-grade: a
returned solution is checkable by substitution, a returned nullspace basis
spans exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_matrix(rows: Sequence[Sequence[int | Fraction]]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence[int | Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = _as_matrix(rows)
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = _ONE / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def solve(
    rows: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]
) -> Vector | None:
    """One exact solution of A·x = b with free variables set to 0, or None."""
    if not rows:
        return [] if not any(Fraction(v) for v in rhs) else None
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:  # a pivot in the rhs column means 0 = 1 somewhere
        return None
    x = [_ZERO] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    return x


def nullspace(rows: Sequence[Sequence[int | Fraction]], ncols: int | None = None) -> list[Vector]:
    """Basis of the right nullspace of A (one vector per free column)."""
    if not rows:
        return [] if not ncols else [
            [_ONE if i == j else _ZERO for i in range(ncols)] for j in range(ncols)
        ]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis: list[Vector] = []
    for fc in free_cols:
        v = [_ZERO] * ncols
        v[fc] = _ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    if not rows:
        return 0
    _, pivots = rref(rows)
    return len(pivots)


def det(rows: Sequence[Sequence[int | Fraction]]) -> Fraction:
    """Exact determinant by elimination with partial pivoting on nonzeros."""
    m = _as_matrix(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    sign = _ONE
    result = _ONE
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            return _ZERO
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        result *= m[c][c]
        inv = _ONE / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * result

"""Dense exact linear algebra over Fraction: solve, invert, nullspace.

Matrices are lists of row lists of Fractions.  Sizes in this package stay
in the tens, so plain Gaussian elimination with first-nonzero pivoting is
both simple and fast enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[Fraction]]
Vector = List[Fraction]


class LinAlgError(Exception):
    pass


def _copy(mat: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(row) for row in mat]


def rref(mat: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = _copy(mat)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [vi - factor * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def solve(mat: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector:
    """Solve a square nonsingular system exactly."""
    n = len(mat)
    if any(len(row) != n for row in mat) or len(rhs) != n:
        raise LinAlgError("solve expects a square matrix and a matching vector")
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise LinAlgError("singular matrix")
    return [red[i][n] for i in range(n)]


def invert(mat: Sequence[Sequence[Fraction]]) -> Matrix:
    """Exact inverse of a square nonsingular matrix."""
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise LinAlgError("singular matrix")
    return [row[n:] for row in red]


def mat_vec(mat: Sequence[Sequence[Fraction]], vec: Sequence[Fraction]) -> Vector:
    return [sum((a * v for a, v in zip(row, vec)), Fraction(0)) for row in mat]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def nullspace(mat: Sequence[Sequence[Fraction]]) -> List[Vector]:
    """Basis of the kernel of a (possibly rectangular) matrix."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    red, pivots = rref(mat)
    free = [c for c in range(cols) if c not in pivots]
    basis: List[Vector] = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -red[r][f]
        basis.append(vec)
    return basis


class IncrementalRank:
    """Accepts rows one at a time, keeping only those that raise the rank."""

    def __init__(self, cols: int) -> None:
        self.cols = cols
        self._reduced: List[Vector] = []
        self._pivot_cols: List[int] = []

    @property
    def rank(self) -> int:
        return len(self._reduced)

    def try_add(self, row: Sequence[Fraction]) -> bool:
        work = list(row)
        for red, pc in zip(self._reduced, self._pivot_cols):
            if work[pc] != 0:
                factor = work[pc]
                work = [w - factor * r for w, r in zip(work, red)]
        pivot = next((c for c in range(self.cols) if work[c] != 0), None)
        if pivot is None:
            return False
        inv = 1 / work[pivot]
        self._reduced.append([w * inv for w in work])
        self._pivot_cols.append(pivot)
        return True

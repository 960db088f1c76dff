"""Exact linear-system solving by fraction-free (Bareiss) elimination.

Rows are scaled to integers and eliminated with the Bareiss pivot rule,
which keeps every intermediate entry an exact integer of controlled size.
Pivoting is deterministic: the first row with a nonzero entry in the
current column, columns scanned left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence


@dataclass
class LinearSolution:
    """Solution set of A x = b: one particular solution plus a nullspace basis."""

    particular: list[Fraction]
    nullspace: list[list[Fraction]]

    @property
    def unique(self) -> bool:
        return not self.nullspace


def _to_integer_rows(matrix: Sequence[Sequence[Fraction]],
                     rhs: Sequence[Fraction]) -> list[list[int]]:
    rows = []
    for row, b in zip(matrix, rhs):
        entries = [Fraction(x) for x in row] + [Fraction(b)]
        scale = lcm(*(e.denominator for e in entries)) if entries else 1
        rows.append([int(e * scale) for e in entries])
    return rows


def _echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns rows and pivot columns."""
    rows = [row[:] for row in rows]
    pivots: list[int] = []
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            if not any(rows[i]):
                continue
            factor = rows[i][col]
            for j in range(len(rows[i])):
                rows[i][j] = (rows[i][j] * p - factor * rows[rank][j]) // prev
        prev = p
        pivots.append(col)
        rank += 1
    return rows, pivots


def solve_linear_exact(matrix: Sequence[Sequence[Fraction]],
                       rhs: Sequence[Fraction]) -> LinearSolution | None:
    """Solve A x = b exactly; None signals an infeasible system.

    The particular solution sets every free variable to zero; the nullspace
    basis has one vector per free column, each with a 1 in that column.
    """
    nrows = len(matrix)
    if nrows != len(rhs):
        raise ValueError(f"{nrows} rows but {len(rhs)} right-hand sides")
    ncols = len(matrix[0]) if nrows else 0
    for row in matrix:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    if nrows == 0:
        return LinearSolution([], [])

    rows, pivots = _echelon(_to_integer_rows(matrix, rhs), ncols)
    rank = len(pivots)
    for i in range(rank, nrows):
        if any(rows[i][:ncols]):
            raise AssertionError("echelon invariant violated")
        if rows[i][ncols]:
            return None

    free_cols = [c for c in range(ncols) if c not in pivots]

    def back_substitute(target: list[Fraction],
                        fixed: dict[int, Fraction]) -> list[Fraction]:
        x = [Fraction(0)] * ncols
        for c, v in fixed.items():
            x[c] = v
        for i in range(rank - 1, -1, -1):
            col = pivots[i]
            acc = target[i]
            for j in range(col + 1, ncols):
                if rows[i][j]:
                    acc -= rows[i][j] * x[j]
            x[col] = Fraction(acc, rows[i][col])
        return x

    particular = back_substitute([Fraction(r[ncols]) for r in rows[:rank]],
                                 {c: Fraction(0) for c in free_cols})
    nullspace = []
    for free in free_cols:
        fixed = {c: Fraction(1 if c == free else 0) for c in free_cols}
        nullspace.append(back_substitute([Fraction(0)] * rank, fixed))
    return LinearSolution(particular, nullspace)

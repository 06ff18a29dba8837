"""Small exact linear algebra over Q with polynomial right-hand sides."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ComputationError
from .poly import GradedPoly


def invert(mat: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss–Jordan elimination."""
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ComputationError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def solve_rational(mat: Sequence[Sequence[Fraction]], rhs: Sequence[GradedPoly]) -> list[GradedPoly]:
    """Solve ``mat · x = rhs`` where the unknowns and right-hand sides are polynomials."""
    if not rhs:
        return []
    inv = invert(mat)
    table = rhs[0].table
    out = []
    for row in inv:
        acc = GradedPoly.zero(table)
        for c, r in zip(row, rhs):
            if c:
                acc = acc + r.scale(c)
        out.append(acc)
    return out

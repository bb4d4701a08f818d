"""Exact linear algebra over Q with Fraction entries."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInSpaceError, UnderdeterminedError


@dataclass(frozen=True)
class Solution:
    x: tuple[Fraction, ...]
    rank: int


def rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of the first ncols columns (extra columns ride along)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref([[Fraction(v) for v in r] for r in rows], len(rows[0]))[1])


def solve(A: list[list], b: list) -> Solution:
    """Unique x with A x = b; raises on inconsistency or a rank deficit."""
    n = len(A[0]) if A else 0
    aug = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    m, pivots = rref(aug, n)
    for row in m[len(pivots):]:
        if row[n]:
            raise NotInSpaceError("inconsistent linear system")
    if len(pivots) < n:
        raise UnderdeterminedError(f"rank {len(pivots)} < {n} unknowns; use more coefficients")
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = m[i][n]
    return Solution(tuple(x), len(pivots))

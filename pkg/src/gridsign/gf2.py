"""GF(2) linear algebra on Python-int bitsets.

A row is an int whose bit ``k`` is the coefficient of variable ``k``.
Augmented systems put the right-hand side at bit ``nvars``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import Inconsistent


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass
class Echelon:
    """Reduced row echelon form of an augmented system.

    ``pivots`` maps pivot column to its fully reduced row. Pivots are the
    leftmost columns possible, so the form is canonical for the row space.
    """

    nvars: int
    pivots: dict[int, int]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def nullity(self) -> int:
        return self.nvars - self.rank

    def free_columns(self) -> list[int]:
        return [c for c in range(self.nvars) if c not in self.pivots]

    def particular(self) -> int:
        """Solution with every free variable at 0."""
        sol = 0
        for col, row in self.pivots.items():
            if (row >> self.nvars) & 1:
                sol |= 1 << col
        return sol

    def kernel_basis(self) -> list[int]:
        basis = []
        for f in self.free_columns():
            vec = 1 << f
            for col, row in self.pivots.items():
                if (row >> f) & 1:
                    vec |= 1 << col
            basis.append(vec)
        return basis


def row_reduce(rows: Iterable[int], nvars: int, augmented: bool = True) -> Echelon:
    """Gaussian elimination with leftmost pivots; raises Inconsistent on ``0 = 1``."""
    var_mask = (1 << nvars) - 1
    pivots: dict[int, int] = {}
    for row in rows:
        while row & var_mask:
            low = (row & -row).bit_length() - 1
            if low not in pivots:
                pivots[low] = row
                break
            row ^= pivots[low]
        else:
            if augmented and row:
                raise Inconsistent("GF(2) system has no solution")
    # back substitution, highest pivot first so each reducer is already clean
    pivot_mask = 0
    for col in sorted(pivots, reverse=True):
        row = pivots[col]
        for b in _bits(row & pivot_mask & ~((2 << col) - 1)):
            row ^= pivots[b]
        pivots[col] = row
        pivot_mask |= 1 << col
    return Echelon(nvars, dict(sorted(pivots.items())))


def rank(rows: Iterable[int], ncols: int) -> int:
    return row_reduce(rows, ncols, augmented=False).rank

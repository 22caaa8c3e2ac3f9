"""Smith normal form over the integers, exact (Python ints never overflow)."""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def _identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


class _Work:
    """Row/column operations on ``A`` mirrored into ``U`` (rows) and ``V`` (columns)."""

    def __init__(self, a: Sequence[Sequence[int]], transforms: bool):
        self.a = [list(row) for row in a]
        self.rows = len(self.a)
        self.cols = len(self.a[0]) if self.rows else 0
        self.u = _identity(self.rows) if transforms else None
        self.v = _identity(self.cols) if transforms else None

    def swap_rows(self, i, j):
        if i != j:
            self.a[i], self.a[j] = self.a[j], self.a[i]
            if self.u is not None:
                self.u[i], self.u[j] = self.u[j], self.u[i]

    def swap_cols(self, i, j):
        if i != j:
            for row in self.a:
                row[i], row[j] = row[j], row[i]
            if self.v is not None:
                for row in self.v:
                    row[i], row[j] = row[j], row[i]

    def add_row(self, src, dst, k):
        """row[dst] += k * row[src]"""
        ra, rd = self.a[src], self.a[dst]
        for c in range(self.cols):
            if ra[c]:
                rd[c] += k * ra[c]
        if self.u is not None:
            us, ud = self.u[src], self.u[dst]
            for c in range(self.rows):
                if us[c]:
                    ud[c] += k * us[c]

    def add_col(self, src, dst, k):
        for row in self.a:
            if row[src]:
                row[dst] += k * row[src]
        if self.v is not None:
            for row in self.v:
                if row[src]:
                    row[dst] += k * row[src]

    def negate_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        if self.u is not None:
            self.u[i] = [-x for x in self.u[i]]


def _smallest(w: _Work, t: int):
    best = None
    for i in range(t, w.rows):
        row = w.a[i]
        for j in range(t, w.cols):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return best
    return best


def _reduce(w: _Work) -> list[int]:
    diag = []
    t = 0
    while t < min(w.rows, w.cols):
        found = _smallest(w, t)
        if found is None:
            break
        _, i, j = found
        w.swap_rows(t, i)
        w.swap_cols(t, j)
        while True:
            p = w.a[t][t]
            dirty = False
            for i in range(t + 1, w.rows):
                if w.a[i][t]:
                    w.add_row(t, i, -(w.a[i][t] // p))
                    dirty = dirty or w.a[i][t] != 0
            for j in range(t + 1, w.cols):
                if w.a[t][j]:
                    w.add_col(t, j, -(w.a[t][j] // p))
                    dirty = dirty or w.a[t][j] != 0
            if dirty:
                # a remainder smaller than the pivot survived; move it to the corner
                cands = [(abs(w.a[i][t]), i, t) for i in range(t + 1, w.rows) if w.a[i][t]]
                cands += [(abs(w.a[t][j]), t, j) for j in range(t + 1, w.cols) if w.a[t][j]]
                _, i, j = min(cands)
                w.swap_rows(t, i)
                w.swap_cols(t, j)
                continue
            if abs(p) != 1:
                bad = next(
                    (i for i in range(t + 1, w.rows) if any(x % p for x in w.a[i][t + 1:])),
                    None,
                )
                if bad is not None:
                    w.add_row(bad, t, 1)
                    continue
            break
        if w.a[t][t] < 0:
            w.negate_row(t)
        diag.append(w.a[t][t])
        t += 1
    return diag


def smith_normal_form(a: Sequence[Sequence[int]], transforms: bool = False):
    """Invariant factors ``d_1 | d_2 | ... | d_r`` of ``a``, all positive.

    With ``transforms=True`` returns ``(factors, U, D, V)`` where ``U`` and
    ``V`` are unimodular and ``U @ a @ V == D``.
    """
    w = _Work(a, transforms)
    factors = _reduce(w)
    if not transforms:
        return tuple(factors)
    return tuple(factors), w.u, w.a, w.v


def _eliminate_units(a: Sequence[Sequence[int]]) -> tuple[int, Matrix]:
    """Sparse elimination of +-1 pivots.

    Returns the number of unit factors removed and the dense residual matrix,
    which has the same remaining invariant factors.
    """
    rows = [{j: x for j, x in enumerate(row) if x} for row in a]
    cols: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for j in row:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    units = 0
    progress = True
    while progress:
        progress = False
        for i in sorted(alive):
            row = rows[i]
            pivot_col = next((j for j in sorted(row) if abs(row[j]) == 1), None)
            if pivot_col is None:
                continue
            p = row[pivot_col]
            for k in sorted(cols.get(pivot_col, set()) - {i}):
                other = rows[k]
                factor = other[pivot_col] * p  # p is its own inverse
                for j, x in row.items():
                    value = other.get(j, 0) - factor * x
                    if value:
                        if j not in other:
                            cols.setdefault(j, set()).add(k)
                        other[j] = value
                    else:
                        other.pop(j, None)
                        cols[j].discard(k)
            # after clearing the column, the row's other entries can be cleared
            # by column operations without touching anything else
            for j in row:
                cols[j].discard(i)
            rows[i] = {}
            alive.discard(i)
            units += 1
            progress = True
    live_rows = sorted(i for i in alive if rows[i])
    live_cols = sorted({j for i in live_rows for j in rows[i]})
    residual = [[rows[i].get(j, 0) for j in live_cols] for i in live_rows]
    return units, residual


def invariant_factors(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Same as ``smith_normal_form(a)`` but eliminates unit pivots sparsely first."""
    units, residual = _eliminate_units(a)
    return (1,) * units + smith_normal_form(residual)


def integer_rank(a: Sequence[Sequence[int]]) -> int:
    return len(invariant_factors(a))

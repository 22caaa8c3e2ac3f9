"""Grid diagrams, grid states, empty rectangles, domains and gradings.

Conventions (0-indexed internally, 1-indexed in files):

* row ``i`` of the state ``sigma`` is the intersection point at planar
  coordinates ``(sigma[i], i)`` in the fundamental domain ``[0, n) x [0, n)``;
  alpha circle ``i`` is the line ``y = i`` and beta circle ``j`` is ``x = j``;
* cell ``(col, row)`` is the unit square with south-west corner ``(col, row)``;
  the O (resp. X) marking of row ``i`` sits at the centre of cell
  ``(o_cols[i], i)`` (resp. ``(x_cols[i], i)``);
* a rectangle leaving ``x`` has its SW and NE corners on ``x`` and its SE and
  NW corners on the end state.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import BoundExceeded, MalformedInput, MarkingCollision, NotPermutation, StateMismatch

State = tuple[int, ...]

DEFAULT_STATE_BOUND = 8
# Process-wide override, set by the CLI's --state-bound flag.
state_bound = DEFAULT_STATE_BOUND


@dataclass(frozen=True)
class GridDiagram:
    n: int
    o_cols: tuple[int, ...]
    x_cols: tuple[int, ...]
    iota: tuple[int, ...] = field(default=(), compare=False)
    m: int = field(default=0, compare=False)

    def __post_init__(self):
        _validate_markings(self.n, self.o_cols, self.x_cols)
        if not self.iota:
            m, iota = _trace_components(self.o_cols, self.x_cols)
            object.__setattr__(self, "iota", iota)
            object.__setattr__(self, "m", m)

    @classmethod
    def from_one_indexed(cls, o: Sequence[int], x: Sequence[int]) -> "GridDiagram":
        return cls(len(o), tuple(c - 1 for c in o), tuple(c - 1 for c in x))

    def to_json(self) -> dict:
        return {"n": self.n, "O": [c + 1 for c in self.o_cols], "X": [c + 1 for c in self.x_cols]}

    def o_cell(self, i: int) -> tuple[int, int]:
        return (self.o_cols[i], i)

    def x_cell(self, i: int) -> tuple[int, int]:
        return (self.x_cols[i], i)


def _validate_markings(n, o_cols, x_cols):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedInput(f"grid size must be a positive integer, got {n!r}")
    for name, cols in (("O", o_cols), ("X", x_cols)):
        if len(cols) != n:
            raise NotPermutation(f"{name} has {len(cols)} entries, expected {n}")
        if sorted(cols) != list(range(n)):
            raise NotPermutation(f"{name} columns are not a permutation of 1..{n}")
    for i, (oc, xc) in enumerate(zip(o_cols, x_cols)):
        if oc == xc:
            raise MarkingCollision(f"X and O share cell (column {oc + 1}, row {i + 1})")


def _trace_components(o_cols, x_cols) -> tuple[int, tuple[int, ...]]:
    # X in row i -> O in row i -> X in that O's column.
    n = len(o_cols)
    x_row_of_col = {c: r for r, c in enumerate(x_cols)}
    iota = [-1] * n
    m = 0
    for start in range(n):
        if iota[start] >= 0:
            continue
        i = start
        while iota[i] < 0:
            iota[i] = m
            i = x_row_of_col[o_cols[i]]
        m += 1
    return m, tuple(iota)


def parse_grid(text: str) -> GridDiagram:
    """Parse grid-file JSON ``{"n": int, "O": [...], "X": [...]}`` (1-indexed columns)."""
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedInput(f"grid file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise MalformedInput("grid file must be a JSON object")
    keys = set(data)
    if keys != {"n", "O", "X"}:
        extra = sorted(keys - {"n", "O", "X"})
        missing = sorted({"n", "O", "X"} - keys)
        raise MalformedInput(f"grid keys wrong: unknown {extra}, missing {missing}")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedInput(f"'n' must be a positive integer, got {n!r}")
    cols = {}
    for name in ("O", "X"):
        seq = data[name]
        if not isinstance(seq, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in seq):
            raise MalformedInput(f"'{name}' must be a list of integers")
        if any(c < 1 or c > n for c in seq):
            raise NotPermutation(f"'{name}' has a column outside 1..{n}")
        cols[name] = tuple(c - 1 for c in seq)
    return GridDiagram(n, cols["O"], cols["X"])


def link_components(d: GridDiagram) -> tuple[int, tuple[int, ...]]:
    """Number of link components and the component index of each X (by row)."""
    return d.m, d.iota


def grid_states(n: int, bound: int | None = None) -> list[State]:
    """All ``n!`` states, lexicographic in one-line notation."""
    bound = state_bound if bound is None else bound
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds the state enumeration bound {bound}")
    return list(itertools.permutations(range(n)))


def state_points(sigma: State) -> list[tuple[int, int]]:
    return [(c, r) for r, c in enumerate(sigma)]


def sign(sigma: State) -> int:
    """Sign of a permutation via cycle decomposition."""
    seen = [False] * len(sigma)
    parity = 0
    for i in range(len(sigma)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        parity += length - 1
    return -1 if parity % 2 else 1


def _cyclic_open(a: int, b: int, v: int, n: int) -> bool:
    """True when ``v`` lies strictly between ``a`` and ``a + ((b - a) % n)`` going up mod n."""
    return 0 < (v - a) % n < (b - a) % n


@dataclass(frozen=True, order=True)
class EmptyRect:
    start: State
    sw: tuple[int, int]
    w: int
    h: int
    end: State = field(compare=False, repr=False, default=())

    def __post_init__(self):
        if not self.end:
            object.__setattr__(self, "end", _rect_end(self.start, self.sw, self.h))

    @property
    def n(self) -> int:
        return len(self.start)

    @property
    def key(self) -> tuple:
        return (self.start, self.sw, self.w, self.h)

    def cells(self) -> Iterator[tuple[int, int]]:
        n = self.n
        c0, r0 = self.sw
        for dc in range(self.w):
            for dr in range(self.h):
                yield ((c0 + dc) % n, (r0 + dr) % n)

    def contains_cell(self, cell: tuple[int, int]) -> bool:
        n = self.n
        c0, r0 = self.sw
        return (cell[0] - c0) % n < self.w and (cell[1] - r0) % n < self.h

    def domain(self) -> "Domain":
        n = self.n
        mult = [0] * (n * n)
        for c, r in self.cells():
            mult[r * n + c] += 1
        return Domain(tuple(mult), self.start, self.end)


def _rect_end(start: State, sw: tuple[int, int], h: int) -> State:
    n = len(start)
    r0 = sw[1]
    r1 = (r0 + h) % n
    end = list(start)
    end[r0], end[r1] = end[r1], end[r0]
    return tuple(end)


@lru_cache(maxsize=None)
def _rectangles_from(sigma: State) -> tuple[EmptyRect, ...]:
    n = len(sigma)
    found = []
    for r0 in range(n):
        for r1 in range(n):
            if r0 == r1:
                continue
            c0, c1 = sigma[r0], sigma[r1]
            if any(
                _cyclic_open(r0, r1, r, n) and _cyclic_open(c0, c1, sigma[r], n)
                for r in range(n)
            ):
                continue
            found.append(EmptyRect(sigma, (c0, r0), (c1 - c0) % n, (r1 - r0) % n))
    found.sort()
    return tuple(found)


def empty_rectangles(x: State, d: GridDiagram | None = None) -> list[EmptyRect]:
    """Empty rectangles leaving ``x``, sorted by ``(sw, w, h)``.

    Emptiness only concerns state points; markings may lie inside.
    """
    if d is not None and len(x) != d.n:
        raise StateMismatch(f"state of size {len(x)} on a grid of size {d.n}")
    return list(_rectangles_from(tuple(x)))


def marking_counts(r: EmptyRect, d: GridDiagram) -> tuple[tuple[int, ...], tuple[int, ...]]:
    o_vec = tuple(int(r.contains_cell(d.o_cell(i))) for i in range(d.n))
    x_vec = tuple(int(r.contains_cell(d.x_cell(i))) for i in range(d.n))
    return o_vec, x_vec


@dataclass(frozen=True)
class Domain:
    """Nonnegative cell multiplicities, indexed by ``row * n + col``."""

    multiplicities: tuple[int, ...]
    start: State
    end: State

    @property
    def n(self) -> int:
        return len(self.start)

    def __add__(self, other: "Domain") -> "Domain":
        if self.end != other.start:
            raise StateMismatch(f"cannot compose: {self.end} != {other.start}")
        mult = tuple(a + b for a, b in zip(self.multiplicities, other.multiplicities))
        return Domain(mult, self.start, other.end)

    def thin_column(self) -> int | None:
        """Column index if this is a thin vertical annulus, else None."""
        n = self.n
        if self.start != self.end or sum(self.multiplicities) != n:
            return None
        for col in range(n):
            if all(self.multiplicities[r * n + col] == 1 for r in range(n)):
                return col
        return None

    def thin_row(self) -> int | None:
        n = self.n
        if self.start != self.end or sum(self.multiplicities) != n:
            return None
        for row in range(n):
            if all(self.multiplicities[row * n + c] == 1 for c in range(n)):
                return row
        return None


def vertical_annulus(sigma: State, col: int) -> Domain:
    n = len(sigma)
    return Domain(tuple(int(i % n == col) for i in range(n * n)), sigma, sigma)


def horizontal_annulus(sigma: State, row: int) -> Domain:
    n = len(sigma)
    return Domain(tuple(int(i // n == row) for i in range(n * n)), sigma, sigma)


def compose(r1: EmptyRect, r2: EmptyRect) -> Domain:
    """Juxtaposition ``r1 * r2``; ``r2`` must start where ``r1`` ends."""
    if r1.end != r2.start:
        raise StateMismatch(f"r1 ends at {r1.end} but r2 starts at {r2.start}")
    return r1.domain() + r2.domain()


SQUARE = "square"
VERTICAL = "vertical"
HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class ClassGroup:
    kind: str
    index: int | None
    domain: Domain
    decompositions: tuple[tuple[EmptyRect, EmptyRect], ...]

    @property
    def start(self) -> State:
        return self.domain.start

    @property
    def end(self) -> State:
        return self.domain.end

    def rect_keys(self) -> set[tuple]:
        return {r.key for pair in self.decompositions for r in pair}


@dataclass(frozen=True)
class Index2Classes:
    groups: tuple[ClassGroup, ...]
    anomalies: tuple[ClassGroup, ...]


@lru_cache(maxsize=None)
def _index2_classes(sigma: State) -> Index2Classes:
    buckets: dict[tuple, list] = {}
    for r1 in _rectangles_from(sigma):
        for r2 in _rectangles_from(r1.end):
            dom = compose(r1, r2)
            buckets.setdefault((dom.end, dom.multiplicities), []).append((r1, r2))
    groups, anomalies = [], []
    for (end, mult), decs in sorted(buckets.items()):
        dom = Domain(mult, sigma, end)
        col, row = dom.thin_column(), dom.thin_row()
        if col is not None:
            group = ClassGroup(VERTICAL, col, dom, tuple(decs))
            ok = len(decs) == 1
        elif row is not None:
            group = ClassGroup(HORIZONTAL, row, dom, tuple(decs))
            ok = len(decs) == 1
        else:
            group = ClassGroup(SQUARE, None, dom, tuple(decs))
            ok = end != sigma and len(decs) == 2 and len(group.rect_keys()) == 4
        (groups if ok else anomalies).append(group)
    return Index2Classes(tuple(groups), tuple(anomalies))


def index2_classes(x: State, d: GridDiagram | None = None) -> Index2Classes:
    """Group every composable pair ``(r1, r2)`` leaving ``x`` by its domain.

    Thin annuli must have one decomposition, square classes two with four
    distinct rectangles; anything else lands in ``anomalies``.
    """
    if d is not None and len(x) != d.n:
        raise StateMismatch(f"state of size {len(x)} on a grid of size {d.n}")
    return _index2_classes(tuple(x))


# Gradings. Points are stored in doubled coordinates so marking centres are integral.

def _count_sw(p: Sequence[tuple[int, int]], q: Sequence[tuple[int, int]]) -> int:
    return sum(1 for a in p for b in q if a[0] < b[0] and a[1] < b[1])


def _twice_j(p, q) -> int:
    return _count_sw(p, q) + _count_sw(q, p)


def _m_relative(sigma: State, markings: Sequence[tuple[int, int]]) -> int:
    pts = [(2 * c, 2 * r) for c, r in state_points(sigma)]
    mk = [(2 * c + 1, 2 * r + 1) for c, r in markings]
    twice = _twice_j(pts, pts) - 2 * _twice_j(pts, mk) + _twice_j(mk, mk)
    return twice // 2 + 1


def maslov(x: State, d: GridDiagram) -> int:
    return _m_relative(x, [d.o_cell(i) for i in range(d.n)])


def maslov_x(x: State, d: GridDiagram) -> int:
    return _m_relative(x, [d.x_cell(i) for i in range(d.n)])


def alexander2(x: State, d: GridDiagram) -> int:
    """Twice the Alexander grading."""
    return maslov(x, d) - maslov_x(x, d) - (d.n - d.m)

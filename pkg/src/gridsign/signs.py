"""Sign assignments on empty rectangles.

A sign ``s`` is encoded over GF(2) as the bit ``b`` with ``s = (-1)**b``.
The axiom families, per index-2 class leaving a state:

* square classes: the two decompositions have opposite sign products;
* vertical thin annuli: product ``-1`` (``+1`` for the false convention);
* horizontal thin annuli: product ``+1`` (``-1`` for the false convention).

Nothing here depends on the markings, so the heavy lifting is cached by ``n``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

from . import gf2
from .errors import (
    AnomalousClass,
    BoundExceeded,
    DisconnectedStates,
    MissingRectangle,
    NotGaugeEquivalent,
    SizeMismatch,
)
from .grid import (
    SQUARE,
    VERTICAL,
    EmptyRect,
    GridDiagram,
    State,
    empty_rectangles,
    grid_states,
    index2_classes,
    sign,
)

TRUE = "true"
FALSE = "false"
CONVENTIONS = (TRUE, FALSE)

RectKey = tuple  # (state, (col, row), w, h)

ENUMERATION_BOUND = 3


def _grid_n(d: GridDiagram | int) -> int:
    return d if isinstance(d, int) else d.n


def annulus_target(kind: str, convention: str) -> int:
    """Required sign product of a thin annulus class."""
    base = -1 if kind == VERTICAL else 1
    return base if convention == TRUE else -base


@dataclass(frozen=True)
class Constraint:
    kind: str
    variables: tuple[int, ...]
    parity: int
    state: State
    index: int | None = None
    end: State | None = None

    def as_bits(self, nvars: int) -> int:
        row = self.parity << nvars
        for v in self.variables:
            row ^= 1 << v
        return row


@dataclass(frozen=True)
class ConstraintSystem:
    n: int
    keys: tuple[RectKey, ...]
    rows: tuple[Constraint, ...]
    index: Mapping[RectKey, int] = field(repr=False, compare=False, default_factory=dict)

    @property
    def nvars(self) -> int:
        return len(self.keys)


@lru_cache(maxsize=None)
def _constraints(n: int) -> ConstraintSystem:
    states = grid_states(n)
    keys = tuple(r.key for s in states for r in empty_rectangles(s))
    index = {k: i for i, k in enumerate(keys)}
    rows: list[Constraint] = []
    seen: set[tuple] = set()
    for s in states:
        classes = index2_classes(s)
        if classes.anomalies:
            a = classes.anomalies[0]
            raise AnomalousClass(
                f"state {s}: {a.kind} class to {a.end} with {len(a.decompositions)} decompositions"
            )
        for g in classes.groups:
            if g.kind == SQUARE:
                (r1, r2), (q1, q2) = g.decompositions
                variables = (index[r1.key], index[r2.key], index[q1.key], index[q2.key])
                parity = 1
            else:
                ((r1, r2),) = g.decompositions
                variables = (index[r1.key], index[r2.key])
                parity = 1 if annulus_target(g.kind, TRUE) == -1 else 0
            sig = (tuple(sorted(variables)), parity)
            if sig in seen:
                continue
            seen.add(sig)
            rows.append(Constraint(g.kind, tuple(sorted(variables)), parity, s, g.index, g.end))
    return ConstraintSystem(n, keys, tuple(rows), MappingProxyType(index))


def build_constraints(d: GridDiagram | int) -> ConstraintSystem:
    """GF(2) system whose solutions are exactly the true sign assignments."""
    n = _grid_n(d)
    grid_states(n)  # bound check even when cached
    return _constraints(n)


@lru_cache(maxsize=None)
def _echelon(n: int) -> gf2.Echelon:
    system = build_constraints(n)
    nv = system.nvars
    return gf2.row_reduce((c.as_bits(nv) for c in system.rows), nv)


@dataclass(frozen=True)
class SignAssignment:
    n: int
    values: Mapping[RectKey, int]
    convention: str = TRUE

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")
        object.__setattr__(self, "values", MappingProxyType(dict(sorted(self.values.items()))))

    def __getitem__(self, r: EmptyRect | RectKey) -> int:
        key = r.key if isinstance(r, EmptyRect) else r
        try:
            return self.values[key]
        except KeyError:
            raise MissingRectangle(f"no sign for rectangle {key}") from None

    def __eq__(self, other):
        if not isinstance(other, SignAssignment):
            return NotImplemented
        return (self.n, self.convention, dict(self.values)) == (other.n, other.convention, dict(other.values))

    def __hash__(self):
        return hash((self.n, self.convention, tuple(self.values.items())))

    def flipped(self, key: RectKey) -> "SignAssignment":
        values = dict(self.values)
        values[key] = -values[key]
        return SignAssignment(self.n, values, self.convention)


def _from_bits(system: ConstraintSystem, bits: int) -> SignAssignment:
    values = {k: -1 if (bits >> i) & 1 else 1 for i, k in enumerate(system.keys)}
    return SignAssignment(system.n, values, TRUE)


def solve_signs(d: GridDiagram | int) -> SignAssignment:
    """Canonical true sign assignment: leftmost pivots, free variables at +1."""
    n = _grid_n(d)
    return _from_bits(build_constraints(n), _echelon(n).particular())


def count_solutions(d: GridDiagram | int) -> int:
    """Number of true sign assignments, ``2 ** (variables - rank)``."""
    n = _grid_n(d)
    build_constraints(n)
    return 2 ** _echelon(n).nullity


def enumerate_solutions(d: GridDiagram | int) -> list[SignAssignment]:
    n = _grid_n(d)
    if n > ENUMERATION_BOUND:
        raise BoundExceeded(f"solution enumeration is limited to n <= {ENUMERATION_BOUND}")
    system = build_constraints(n)
    ech = _echelon(n)
    base = ech.particular()
    basis = ech.kernel_basis()
    out = []
    for choice in itertools.product((0, 1), repeat=len(basis)):
        bits = base
        for use, vec in zip(choice, basis):
            if use:
                bits ^= vec
        out.append(_from_bits(system, bits))
    return out


@dataclass(frozen=True)
class Violation:
    kind: str
    state: State
    index: int | None
    end: State
    rects: tuple[RectKey, ...]
    product: int
    expected: int


@dataclass(frozen=True)
class VerificationReport:
    convention: str
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_total(d: GridDiagram | int, s: SignAssignment) -> None:
    n = _grid_n(d)
    if s.n != n:
        raise SizeMismatch(f"sign assignment for n={s.n} used with n={n}")
    expected = set(build_constraints(n).keys)
    have = set(s.values)
    if expected - have:
        missing = min(expected - have)
        raise MissingRectangle(f"{len(expected - have)} rectangles have no sign, e.g. {missing}")
    if have - expected:
        raise MissingRectangle(f"{len(have - expected)} signed keys are not empty rectangles, e.g. {min(have - expected)}")


def verify_axioms(d: GridDiagram | int, s: SignAssignment, convention: str | None = None) -> VerificationReport:
    """Check every index-2 class directly (no linear algebra).

    A class reachable from both of its endpoint states is reported once,
    under the first state in enumeration order.
    """
    convention = convention or s.convention
    n = _grid_n(d)
    check_total(n, s)
    violations = []
    seen = set()
    for x in grid_states(n):
        for g in index2_classes(x).groups:
            if g.kind == SQUARE:
                (r1, r2), (q1, q2) = g.decompositions
                prod = s[r1] * s[r2] * s[q1] * s[q2]
                expected = -1
                rects = (r1.key, r2.key, q1.key, q2.key)
            else:
                ((r1, r2),) = g.decompositions
                prod = s[r1] * s[r2]
                expected = annulus_target(g.kind, convention)
                rects = (r1.key, r2.key)
            ident = (g.kind, tuple(sorted(rects)))
            if ident in seen:
                continue
            seen.add(ident)
            if prod != expected:
                violations.append(Violation(g.kind, x, g.index, g.end, rects, prod, expected))
    return VerificationReport(convention, tuple(violations))


@dataclass(frozen=True)
class GaugeFunction:
    """A map from states to +-1; ``f`` and ``-f`` act identically."""

    n: int
    values: Mapping[State, int]

    def __post_init__(self):
        object.__setattr__(self, "values", MappingProxyType(dict(sorted(self.values.items()))))

    def __call__(self, sigma: State) -> int:
        return self.values[sigma]

    @classmethod
    def constant(cls, n: int, value: int = 1) -> "GaugeFunction":
        return cls(n, {s: value for s in grid_states(n)})

    def normalized(self) -> "GaugeFunction":
        ident = tuple(range(self.n))
        g = self.values[ident]
        return GaugeFunction(self.n, {s: v * g for s, v in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, GaugeFunction):
            return NotImplemented
        return self.n == other.n and dict(self.values) == dict(other.values)

    def __hash__(self):
        return hash((self.n, tuple(self.values.items())))


def gauge_apply(s: SignAssignment, f: GaugeFunction) -> SignAssignment:
    if f.n != s.n:
        raise SizeMismatch(f"gauge for n={f.n} applied to signs for n={s.n}")
    values = {}
    for key, v in s.values.items():
        r = EmptyRect(*key)
        values[key] = f(r.start) * f(r.end) * v
    return SignAssignment(s.n, values, s.convention)


def gauge_difference(s1: SignAssignment, s2: SignAssignment) -> GaugeFunction:
    """The gauge ``f`` with ``f(id) = +1`` and ``gauge_apply(s1, f) == s2``.

    Ratios are propagated along a BFS tree of the rectangle graph, then every
    rectangle is rechecked.
    """
    if s1.n != s2.n:
        raise SizeMismatch(f"comparing signs for n={s1.n} and n={s2.n}")
    n = s1.n
    check_total(n, s1)
    check_total(n, s2)
    ident = tuple(range(n))
    f = {ident: 1}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for r in empty_rectangles(x):
            if r.end not in f:
                f[r.end] = f[x] * s1[r] * s2[r]
                queue.append(r.end)
    states = grid_states(n)
    if len(f) != len(states):
        raise DisconnectedStates(f"rectangle graph reaches {len(f)} of {len(states)} states")
    for x in states:
        for r in empty_rectangles(x):
            if f[x] * f[r.end] * s1[r] != s2[r]:
                raise NotGaugeEquivalent(f"cycle inconsistency at rectangle {r.key}")
    return GaugeFunction(n, f)


def twist(s: SignAssignment) -> SignAssignment:
    """Multiply each sign by the permutation sign of its start state; flips the convention."""
    values = {key: sign(key[0]) * v for key, v in s.values.items()}
    return SignAssignment(s.n, values, FALSE if s.convention == TRUE else TRUE)


@dataclass(frozen=True)
class OrientationSystem:
    """Orientation choices over the reference classes, relative to the canonical solution."""

    n: int
    eps: Mapping[State, int]

    def __post_init__(self):
        ident = tuple(range(self.n))
        if self.eps.get(ident) != 1:
            raise ValueError("orientation system must take +1 at the identity state")
        object.__setattr__(self, "eps", MappingProxyType(dict(sorted(self.eps.items()))))

    def as_gauge(self) -> GaugeFunction:
        return GaugeFunction(self.n, dict(self.eps))

    def __eq__(self, other):
        if not isinstance(other, OrientationSystem):
            return NotImplemented
        return self.n == other.n and dict(self.eps) == dict(other.eps)

    def __hash__(self):
        return hash((self.n, tuple(self.eps.items())))


def all_orientation_systems(n: int) -> list[OrientationSystem]:
    states = grid_states(n)
    rest = states[1:]
    out = []
    for choice in itertools.product((1, -1), repeat=len(rest)):
        eps = {states[0]: 1}
        eps.update(zip(rest, choice))
        out.append(OrientationSystem(n, eps))
    return out


def orientation_to_signs(d: GridDiagram | int, eps: OrientationSystem) -> SignAssignment:
    return gauge_apply(solve_signs(d), eps.as_gauge())


def signs_to_orientation(d: GridDiagram | int, s: SignAssignment) -> OrientationSystem:
    if s.convention != TRUE:
        raise NotGaugeEquivalent("only true sign assignments correspond to orientation systems")
    f = gauge_difference(solve_signs(d), s)
    return OrientationSystem(s.n, dict(f.values))

"""Signed grid chain complexes over Z[u_1..u_n, v_1..v_m].

A monomial is a tuple of exponents, the ``n`` u-exponents followed by the
``m`` v-exponents. A polynomial is a dict ``monomial -> nonzero int``. The
differential is stored column-wise: ``diff[x][y]`` is the coefficient of
``y`` in the boundary of ``x``.

The rectangle ``r`` contributes ``S(r) * prod u_i^{#(r, O_i)} * prod v_{iota(j)}^{#(r, X_j)}``.
The tilde version keeps only rectangles containing no markings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import BoundExceeded, SizeMismatch
from .grid import GridDiagram, State, alexander2, empty_rectangles, grid_states, marking_counts, maslov
from .signs import SignAssignment, check_total

FULL = "full"
TILDE = "tilde"

FULL_BOUND = 6

Monomial = tuple[int, ...]
Poly = dict[Monomial, int]


def poly_add(acc: Poly, other: Mapping[Monomial, int], scale: int = 1, shift: Monomial | None = None) -> None:
    """In-place ``acc += scale * shift * other``."""
    for mono, coef in other.items():
        if shift is not None:
            mono = tuple(a + b for a, b in zip(mono, shift))
        value = acc.get(mono, 0) + scale * coef
        if value:
            acc[mono] = value
        else:
            acc.pop(mono, None)


def poly_mul(p: Mapping[Monomial, int], q: Mapping[Monomial, int]) -> Poly:
    out: Poly = {}
    for mono, coef in p.items():
        poly_add(out, q, coef, mono)
    return out


def monomial_degree(mono: Monomial, n: int) -> tuple[int, int]:
    """(Maslov, 2*Alexander) degree of a monomial."""
    us = sum(mono[:n])
    vs = sum(mono[n:])
    return -2 * us, -2 * us + 2 * vs


def format_poly(p: Mapping[Monomial, int], n: int) -> str:
    if not p:
        return "0"
    terms = []
    for mono, coef in sorted(p.items(), reverse=True):
        factors = []
        for i, e in enumerate(mono):
            if e:
                name = f"u{i + 1}" if i < n else f"v{i - n + 1}"
                factors.append(name if e == 1 else f"{name}^{e}")
        body = "*".join(factors)
        if not body:
            terms.append(str(coef))
        elif coef == 1:
            terms.append(body)
        elif coef == -1:
            terms.append("-" + body)
        else:
            terms.append(f"{coef}*{body}")
    return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class BigradedComplex:
    grid: GridDiagram
    version: str
    states: tuple[State, ...]
    gradings: Mapping[State, tuple[int, int]]
    diff: Mapping[State, Mapping[State, Poly]]

    @property
    def nvars(self) -> int:
        return self.grid.n + self.grid.m

    def entry(self, x: State, y: State) -> Poly:
        return self.diff[x].get(y, {})

    def integer_entry(self, x: State, y: State) -> int:
        """Constant term of an entry; the whole entry for tilde complexes."""
        return self.entry(x, y).get((0,) * self.nvars, 0)


def rect_monomial(r, d: GridDiagram) -> Monomial:
    o_vec, x_vec = marking_counts(r, d)
    v = [0] * d.m
    for j, k in enumerate(x_vec):
        v[d.iota[j]] += k
    return tuple(o_vec) + tuple(v)


def build_complex(d: GridDiagram, s: SignAssignment, version: str = TILDE, bound: int = FULL_BOUND) -> BigradedComplex:
    if version not in (FULL, TILDE):
        raise ValueError(f"unknown complex version {version!r}")
    if s.n != d.n:
        raise SizeMismatch(f"signs for n={s.n} on a grid of size {d.n}")
    if version == FULL and d.n > bound:
        raise BoundExceeded(f"full complex limited to n <= {bound}")
    check_total(d, s)
    states = tuple(grid_states(d.n))
    zero = (0,) * (d.n + d.m)
    diff = {}
    for x in states:
        column: dict[State, Poly] = {}
        for r in empty_rectangles(x):
            mono = rect_monomial(r, d)
            if version == TILDE and mono != zero:
                continue
            poly_add(column.setdefault(r.end, {}), {mono: s[r]})
        diff[x] = {y: p for y, p in sorted(column.items()) if p}
    gradings = {x: (maslov(x, d), alexander2(x, d)) for x in states}
    return BigradedComplex(d, version, states, gradings, diff)


def d_squared(c: BigradedComplex) -> dict[State, dict[State, Poly]]:
    """Nonzero entries of the symbolic square of the differential."""
    out: dict[State, dict[State, Poly]] = {}
    for x in c.states:
        acc: dict[State, Poly] = {}
        for y, p in c.diff[x].items():
            for z, q in c.diff[y].items():
                poly_add(acc.setdefault(z, {}), poly_mul(p, q))
        nonzero = {z: p for z, p in sorted(acc.items()) if p}
        if nonzero:
            out[x] = nonzero
    return out


def homogeneity_defects(c: BigradedComplex) -> list[tuple[State, State, Monomial]]:
    """Terms that fail to drop Maslov by one or to preserve 2A."""
    n = c.grid.n
    bad = []
    for x in c.states:
        mx, ax = c.gradings[x]
        for y, p in c.diff[x].items():
            my, ay = c.gradings[y]
            for mono in p:
                dm, da = monomial_degree(mono, n)
                if my + dm != mx - 1 or ay + da != ax:
                    bad.append((x, y, mono))
    return bad


def specialize(c: BigradedComplex, kill_u: Iterable[int] = (), kill_v: Iterable[int] = ()) -> BigradedComplex:
    """Set the listed variables (0-indexed) to zero."""
    if c.version != FULL:
        raise ValueError("only full complexes can be specialized")
    n = c.grid.n
    killed = set(kill_u) | {n + j for j in kill_v}
    diff = {}
    for x in c.states:
        column = {}
        for y, p in c.diff[x].items():
            q = {mono: coef for mono, coef in p.items() if not any(mono[k] for k in killed)}
            if q:
                column[y] = q
        diff[x] = column
    version = TILDE if killed == set(range(c.nvars)) else FULL
    return BigradedComplex(c.grid, version, c.states, c.gradings, diff)


def complex_to_json(c: BigradedComplex) -> dict:
    n = c.grid.n
    gens = []
    for x in c.states:
        m, a2 = c.gradings[x]
        entries = [
            {
                "target": [v + 1 for v in y],
                "terms": [
                    {"coef": coef, "u_exps": list(mono[:n]), "v_exps": list(mono[n:])}
                    for mono, coef in sorted(p.items())
                ],
            }
            for y, p in c.diff[x].items()
        ]
        gens.append({"state": [v + 1 for v in x], "M": m, "A2": a2, "boundary": entries})
    return {"grid": c.grid.to_json(), "version": c.version, "generators": gens}

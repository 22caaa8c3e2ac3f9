"""Bigraded homology of tilde complexes over Z and Z/2."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from . import gf2
from .complex import TILDE, BigradedComplex, build_complex
from .errors import AxiomViolation
from .grid import GridDiagram, State, alexander2, empty_rectangles, grid_states, marking_counts, maslov
from .parallel import pmap
from .signs import SignAssignment, solve_signs, twist, verify_axioms
from .snf import invariant_factors

Z = "z"
Z2 = "z2"


@dataclass(frozen=True, order=True)
class HomologyEntry:
    alexander2: int
    maslov: int
    free_rank: int
    torsion: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"M": self.maslov, "A2": self.alexander2, "free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class HomologyTable:
    entries: tuple[HomologyEntry, ...]
    coefficients: str = Z

    def __post_init__(self):
        kept = tuple(sorted(e for e in self.entries if e.free_rank or e.torsion))
        object.__setattr__(self, "entries", kept)

    def at(self, maslov: int, alexander2: int) -> HomologyEntry | None:
        for e in self.entries:
            if (e.maslov, e.alexander2) == (maslov, alexander2):
                return e
        return None

    @property
    def total_rank(self) -> int:
        return sum(e.free_rank for e in self.entries)

    @property
    def has_torsion(self) -> bool:
        return any(e.torsion for e in self.entries)

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]


def _graded_pieces(gradings: dict[State, tuple[int, int]]) -> dict[tuple[int, int], list[State]]:
    """(2A, M) -> generators, each list in state order."""
    pieces: dict[tuple[int, int], list[State]] = defaultdict(list)
    for x in sorted(gradings):
        m, a2 = gradings[x]
        pieces[(a2, m)].append(x)
    return dict(pieces)


def _block_homology(a2, pieces, entry, coefficients) -> list[HomologyEntry]:
    """Homology of the subcomplex in Alexander grading ``a2``.

    ``entry(x, y)`` is the integer coefficient of ``y`` in the boundary of ``x``.
    """
    degrees = sorted(m for (a, m) in pieces if a == a2)
    ranks: dict[int, int] = {}
    factors: dict[int, tuple[int, ...]] = {}
    for m in degrees:
        src = pieces[(a2, m)]
        dst = pieces.get((a2, m - 1), [])
        if not dst:
            ranks[m], factors[m] = 0, ()
            continue
        if coefficients == Z:
            mat = [[entry(x, y) for x in src] for y in dst]
            f = invariant_factors(mat)
            ranks[m], factors[m] = len(f), f
        else:
            rows = []
            for y in dst:
                bits = 0
                for k, x in enumerate(src):
                    if entry(x, y) % 2:
                        bits |= 1 << k
                rows.append(bits)
            ranks[m], factors[m] = gf2.rank(rows, len(src)), ()
    out = []
    for m in degrees:
        dim = len(pieces[(a2, m)])
        incoming = ranks.get(m + 1, 0)
        free = dim - ranks[m] - incoming
        torsion = tuple(f for f in factors.get(m + 1, ()) if f > 1)
        out.append(HomologyEntry(a2, m, free, torsion))
    return out


def _homology(gradings, entry, coefficients) -> HomologyTable:
    pieces = _graded_pieces(gradings)
    alex = sorted({a for a, _ in pieces})
    blocks = pmap(lambda a2: _block_homology(a2, pieces, entry, coefficients), alex)
    return HomologyTable(tuple(e for block in blocks for e in block), coefficients)


def bigraded_homology(c: BigradedComplex, coefficients: str = Z) -> HomologyTable:
    """Free ranks and torsion per (M, 2A), one Alexander block at a time."""
    if c.version != TILDE:
        raise ValueError("homology is computed for tilde complexes only")
    if coefficients not in (Z, Z2):
        raise ValueError(f"unknown coefficients {coefficients!r}")
    return _homology(dict(c.gradings), c.integer_entry, coefficients)


def z2_oracle_homology(d: GridDiagram) -> HomologyTable:
    """Tilde homology over Z/2 from marking-free rectangles alone, ignoring signs."""
    states = grid_states(d.n)
    incidence: dict[State, dict[State, int]] = {}
    for x in states:
        col: dict[State, int] = defaultdict(int)
        for r in empty_rectangles(x):
            o_vec, x_vec = marking_counts(r, d)
            if not any(o_vec) and not any(x_vec):
                col[r.end] += 1
        incidence[x] = col
    gradings = {x: (maslov(x, d), alexander2(x, d)) for x in states}
    return _homology(gradings, lambda x, y: incidence[x].get(y, 0), Z2)


def universal_coefficient_ranks(t: HomologyTable) -> dict[tuple[int, int], int]:
    """Predicted Z/2 dimension at each (M, 2A) from an integral table.

    dim H_M(Z/2) = free rank of H_M + even torsion factors of H_M and of H_{M-1}.
    """
    out: dict[tuple[int, int], int] = defaultdict(int)
    for e in t.entries:
        even = sum(1 for f in e.torsion if f % 2 == 0)
        out[(e.maslov, e.alexander2)] += e.free_rank + even
        out[(e.maslov + 1, e.alexander2)] += even
    return {k: v for k, v in sorted(out.items()) if v}


def z2_ranks(t: HomologyTable) -> dict[tuple[int, int], int]:
    return {(e.maslov, e.alexander2): e.free_rank for e in t.entries}


def euler_characteristic(t: HomologyTable) -> dict[Fraction, int]:
    """Graded Euler characteristic: coefficient of ``t**A`` is the alternating sum of ranks."""
    out: dict[Fraction, int] = defaultdict(int)
    for e in t.entries:
        out[Fraction(e.alexander2, 2)] += (-1) ** (e.maslov % 2) * e.free_rank
    return {a: c for a, c in sorted(out.items()) if c}


def euler_to_json(chi: dict[Fraction, int]) -> dict[str, int]:
    return {str(a): c for a, c in chi.items()}


def homology_document(d: GridDiagram, s: SignAssignment, t: HomologyTable) -> dict:
    return {
        "grid": d.to_json(),
        "convention": s.convention,
        "coefficients": t.coefficients,
        "entries": t.to_json(),
        "euler": euler_to_json(euler_characteristic(t)),
    }


def require_valid(d: GridDiagram, s: SignAssignment) -> None:
    report = verify_axioms(d, s)
    if not report.ok:
        raise AxiomViolation(
            f"sign assignment violates {len(report.violations)} {s.convention}-convention constraints"
        )


def compare_true_false(d: GridDiagram, s: SignAssignment | None = None) -> dict:
    """Z homology of the tilde complex under ``s`` and ``twist(s)``, plus a Z/2 cross-check."""
    s = s if s is not None else solve_signs(d)
    require_valid(d, s)
    true_s = s if s.convention == "true" else twist(s)
    false_s = twist(true_s)
    require_valid(d, false_s)
    tables = {}
    for label, signs in (("true", true_s), ("false", false_s)):
        tables[label] = bigraded_homology(build_complex(d, signs, TILDE), Z)
    z2 = bigraded_homology(build_complex(d, true_s, TILDE), Z2)
    oracle = z2_oracle_homology(d)
    return {
        "grid": d.to_json(),
        "true": tables["true"].to_json(),
        "false": tables["false"].to_json(),
        "agree": tables["true"].entries == tables["false"].entries,
        "z2": z2.to_json(),
        "z2_matches_oracle": z2.entries == oracle.entries,
        "z2_matches_universal_coefficients": z2_ranks(z2) == universal_coefficient_ranks(tables["true"]),
        "euler": euler_to_json(euler_characteristic(tables["true"])),
    }

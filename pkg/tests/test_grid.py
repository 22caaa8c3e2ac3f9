import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, GRIDS, grid
from gridsign.errors import BoundExceeded, MalformedInput, MarkingCollision, NotPermutation, StateMismatch
from gridsign.grid import (
    HORIZONTAL,
    SQUARE,
    VERTICAL,
    EmptyRect,
    GridDiagram,
    alexander2,
    compose,
    empty_rectangles,
    grid_states,
    horizontal_annulus,
    index2_classes,
    link_components,
    marking_counts,
    maslov,
    parse_grid,
    sign,
    state_points,
    vertical_annulus,
)


def rectangles_by_lifting(sigma):
    """Brute-force oracle: search rectangles in the plane against lifted state points."""
    n = len(sigma)
    pts = set(state_points(sigma))
    lifted = [(c + a * n, r + b * n) for c, r in pts for a in (0, 1, 2) for b in (0, 1, 2)]
    out = set()
    for c, r in pts:
        for w in range(1, n):
            for h in range(1, n):
                if ((c + w) % n, (r + h) % n) not in pts:
                    continue
                if any(c < px < c + w and r < py < r + h for px, py in lifted):
                    continue
                out.add((sigma, (c, r), w, h))
    return out


grids_strategy = st.integers(2, 6).flatmap(
    lambda n: st.tuples(st.permutations(range(n)), st.permutations(range(n)))
).filter(lambda ox: all(a != b for a, b in zip(*ox))).map(lambda ox: GridDiagram(len(ox[0]), tuple(ox[0]), tuple(ox[1])))


def test_data_files_match_fixtures():
    for name in GRIDS:
        assert parse_grid((DATA / f"{name}.json").read_text()) == grid(name)


class TestParse:
    def test_unknot(self):
        d = parse_grid('{"n": 2, "O": [1, 2], "X": [2, 1]}')
        assert d.n == 2 and d.m == 1
        assert d.o_cols == (0, 1) and d.x_cols == (1, 0)

    def test_collision(self):
        with pytest.raises(MarkingCollision):
            parse_grid('{"n": 2, "O": [1, 2], "X": [1, 2]}')

    def test_not_permutation(self):
        with pytest.raises(NotPermutation):
            parse_grid('{"n": 3, "O": [1, 2, 2], "X": [2, 3, 1]}')

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            "[1, 2]",
            '{"n": 2, "O": [1, 2], "X": [2, 1], "extra": 1}',
            '{"n": 2, "O": [1, 2]}',
            '{"n": "2", "O": [1, 2], "X": [2, 1]}',
            '{"n": 2, "O": [1.0, 2], "X": [2, 1]}',
            '{"n": 0, "O": [], "X": []}',
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(MalformedInput):
            parse_grid(text)

    @pytest.mark.parametrize("text", ['{"n": 2, "O": [1], "X": [2, 1]}', '{"n": 2, "O": [1, 3], "X": [2, 1]}'])
    def test_wrong_counts(self, text):
        with pytest.raises(NotPermutation):
            parse_grid(text)

    def test_round_trip(self, any_grid):
        assert parse_grid(json.dumps(any_grid.to_json())) == any_grid


class TestComponents:
    def test_unknot(self, unknot2):
        assert link_components(unknot2) == (1, (0, 0))

    def test_split_pair(self, unlink4):
        m, iota = link_components(unlink4)
        assert m == 2
        assert iota == (0, 0, 1, 1)

    def test_trefoil(self, trefoil5):
        assert link_components(trefoil5)[0] == 1

    @given(grids_strategy)
    def test_iota_constant_on_trace(self, d):
        m, iota = link_components(d)
        assert sorted(set(iota)) == list(range(m))
        x_row_of_col = {c: r for r, c in enumerate(d.x_cols)}
        for i in range(d.n):
            assert iota[x_row_of_col[d.o_cols[i]]] == iota[i]
        # components numbered in order of their smallest X index
        firsts = [iota.index(k) for k in range(m)]
        assert firsts == sorted(firsts)


class TestStates:
    def test_counts(self):
        assert len(grid_states(3)) == 6
        assert len(grid_states(1)) == 1

    def test_lexicographic(self):
        states = grid_states(4)
        assert states == sorted(states)
        assert states[0] == (0, 1, 2, 3)

    def test_identity_points(self):
        assert state_points(grid_states(2)[0]) == [(0, 0), (1, 1)]

    def test_bound(self):
        with pytest.raises(BoundExceeded):
            grid_states(9)
        assert len(grid_states(3, bound=3)) == 6

    def test_sign(self):
        for sigma in grid_states(4):
            inversions = sum(1 for i, j in itertools.combinations(range(4), 2) if sigma[i] > sigma[j])
            assert sign(sigma) == (-1) ** inversions


class TestRectangles:
    def test_unknot_identity(self):
        rects = empty_rectangles((0, 1))
        assert [(r.sw, r.w, r.h) for r in rects] == [((0, 0), 1, 1), ((1, 1), 1, 1)]
        assert all(r.end == (1, 0) for r in rects)

    def test_n3_identity(self):
        assert len(empty_rectangles((0, 1, 2))) == 3

    def test_n1(self):
        assert empty_rectangles((0,)) == []

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_lifting_oracle(self, n):
        for sigma in grid_states(n):
            assert {r.key for r in empty_rectangles(sigma)} == rectangles_by_lifting(sigma)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_corners_and_end_state(self, n):
        for sigma in grid_states(n):
            start_pts = set(state_points(sigma))
            for r in empty_rectangles(sigma):
                c, row = r.sw
                ne = ((c + r.w) % n, (row + r.h) % n)
                se = ((c + r.w) % n, row)
                nw = (c, (row + r.h) % n)
                end_pts = set(state_points(r.end))
                assert {r.sw, ne} <= start_pts
                assert {se, nw} <= end_pts
                assert sign(r.end) == -sign(sigma)
                assert len(start_pts ^ end_pts) == 4

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_census_at_most_two_per_pair(self, n):
        for sigma in grid_states(n):
            per_end = {}
            for r in empty_rectangles(sigma):
                per_end.setdefault(r.end, []).append(r)
            for rs in per_end.values():
                assert len(rs) <= 2
                if len(rs) == 2:
                    a, b = rs
                    # complementary quadrants: widths and heights add to n,
                    # x-corners swap roles
                    assert a.w + b.w == n and a.h + b.h == n

    def test_sorted_order(self):
        for sigma in grid_states(4):
            rects = empty_rectangles(sigma)
            assert rects == sorted(rects)

    def test_state_size_mismatch(self, unknot2):
        with pytest.raises(StateMismatch):
            empty_rectangles((0, 1, 2), unknot2)


class TestMarkings:
    def test_unknot_cell(self, unknot2):
        r = EmptyRect((0, 1), (0, 0), 1, 1)
        assert marking_counts(r, unknot2) == ((1, 0), (0, 0))

    def test_marking_free(self, trefoil5):
        found = False
        for sigma in grid_states(5):
            for r in empty_rectangles(sigma):
                cells = set(r.cells())
                o_vec, x_vec = marking_counts(r, trefoil5)
                expect_o = tuple(int(trefoil5.o_cell(i) in cells) for i in range(5))
                expect_x = tuple(int(trefoil5.x_cell(i) in cells) for i in range(5))
                assert (o_vec, x_vec) == (expect_o, expect_x)
                found = found or (not any(o_vec) and not any(x_vec))
        assert found

    def test_thin_column_holds_one_of_each(self, trefoil5):
        for col in range(5):
            cells = [(col, r) for r in range(5)]
            assert sum(trefoil5.o_cell(i) in cells for i in range(5)) == 1
            assert sum(trefoil5.x_cell(i) in cells for i in range(5)) == 1


class TestCompose:
    def test_vertical_annulus(self):
        r1 = EmptyRect((0, 1), (0, 0), 1, 1)
        r2 = EmptyRect((1, 0), (0, 1), 1, 1)
        dom = compose(r1, r2)
        assert dom == vertical_annulus((0, 1), 0)
        assert dom.thin_column() == 0 and dom.thin_row() is None

    def test_mismatch(self):
        r1 = EmptyRect((0, 1), (0, 0), 1, 1)
        with pytest.raises(StateMismatch):
            compose(r1, r1)

    def test_nonnegative(self):
        for sigma in grid_states(4):
            for r1 in empty_rectangles(sigma):
                for r2 in empty_rectangles(r1.end):
                    dom = compose(r1, r2)
                    assert min(dom.multiplicities) >= 0
                    assert sum(dom.multiplicities) == r1.w * r1.h + r2.w * r2.h

    def test_annulus_helpers(self):
        assert horizontal_annulus((0, 1, 2), 1).thin_row() == 1
        assert vertical_annulus((0, 1, 2), 2).thin_column() == 2


class TestIndex2:
    def test_unknot_identity(self):
        classes = index2_classes((0, 1))
        kinds = sorted(g.kind for g in classes.groups)
        assert kinds == [HORIZONTAL, HORIZONTAL, VERTICAL, VERTICAL]
        assert not classes.anomalies

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_structure(self, n):
        for sigma in grid_states(n):
            classes = index2_classes(sigma)
            assert not classes.anomalies
            vert = sorted(g.index for g in classes.groups if g.kind == VERTICAL)
            horiz = sorted(g.index for g in classes.groups if g.kind == HORIZONTAL)
            assert vert == list(range(n)) and horiz == list(range(n))
            for g in classes.groups:
                if g.kind == SQUARE:
                    assert len(g.decompositions) == 2 and len(g.rect_keys()) == 4
                    assert g.end != sigma
                else:
                    assert len(g.decompositions) == 1 and g.end == sigma

    def test_n3_has_squares(self):
        assert any(g.kind == SQUARE for g in index2_classes((0, 1, 2)).groups)

    def test_every_pair_classified(self):
        for sigma in grid_states(4):
            pairs = sum(len(empty_rectangles(r.end)) for r in empty_rectangles(sigma))
            grouped = sum(len(g.decompositions) for g in index2_classes(sigma).groups)
            assert pairs == grouped


class TestGradings:
    def test_unknot_values(self, unknot2):
        assert maslov((0, 1), unknot2) == -1
        assert maslov((1, 0), unknot2) == 0
        assert alexander2((0, 1), unknot2) == -2
        assert alexander2((1, 0), unknot2) == 0

    @pytest.mark.parametrize("name", sorted(GRIDS))
    def test_relative_rules(self, name):
        d = grid(name)
        for x in grid_states(d.n):
            for r in empty_rectangles(x):
                o_vec, x_vec = marking_counts(r, d)
                assert maslov(x, d) - maslov(r.end, d) == 1 - 2 * sum(o_vec)
                assert alexander2(x, d) - alexander2(r.end, d) == 2 * sum(x_vec) - 2 * sum(o_vec)

    @settings(max_examples=25, deadline=None)
    @given(grids_strategy)
    def test_relative_rules_random(self, d):
        rng = random.Random(d.n)
        states = grid_states(d.n)
        for x in rng.sample(states, min(len(states), 30)):
            for r in empty_rectangles(x):
                o_vec, x_vec = marking_counts(r, d)
                assert maslov(x, d) - maslov(r.end, d) == 1 - 2 * sum(o_vec)
                assert alexander2(x, d) - alexander2(r.end, d) == 2 * sum(x_vec) - 2 * sum(o_vec)

    def test_j_symmetry(self):
        from gridsign.grid import _twice_j

        rng = random.Random(0)
        for _ in range(50):
            p = [(rng.randrange(10), rng.randrange(10)) for _ in range(5)]
            q = [(rng.randrange(10), rng.randrange(10)) for _ in range(4)]
            assert _twice_j(p, q) == _twice_j(q, p)

"""Tests for D_{n,t}: the word families, the level-by-level build and its size laws."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.construction import (
    BLOCK_E1,
    BLOCK_E2,
    BLOCK_E3,
    BLOCK_ONES,
    KIND_D,
    KIND_D_STAR,
    ConstructionStats,
    UndefinedEllError,
    VertexSet,
    build_D,
    build_D_star,
    cardinality_formula,
    cardinality_recurrence,
    count_D_streaming,
    e1,
    e2,
    e3,
    ell,
    flip,
    generate_blocks,
    iter_D,
)
from src.graph import (
    CapacityError,
    GraphParams,
    InvalidWordError,
    are_adjacent,
    closed_neighborhood,
    is_extreme,
    iter_words,
)

SIZE_GRID = [(n, t) for n in range(2, 7) for t in range(1, 8)]


def _slow_if_large(n, t):
    marks = [pytest.mark.slow] if n ** t > 50_000 else []
    return pytest.param(n, t, marks=marks)


class TestEllAndFlip:
    @pytest.mark.parametrize("word,expected", [((1, 2, 1), 2), ((2, 1, 1), 1), ((1, 2, 1, 2), 3)])
    def test_ell(self, word, expected):
        assert ell(word) == expected

    @pytest.mark.parametrize("word", [(1, 1, 1), (2, 2), (3,)])
    def test_ell_undefined(self, word):
        with pytest.raises(UndefinedEllError):
            ell(word)

    @pytest.mark.parametrize("word,expected", [
        ((1, 2, 2), (2, 1, 1)),
        ((1, 1, 2), (1, 2, 1)),
        ((2, 1, 1, 1), (1, 2, 2, 2)),
    ])
    def test_flip(self, word, expected):
        assert flip(word) == expected

    def test_flip_of_constant_word(self):
        with pytest.raises(UndefinedEllError):
            flip((2, 2, 2))

    @pytest.mark.parametrize("n,t", [(n, t) for n in range(2, 4) for t in range(2, 5)])
    def test_flip_is_an_adjacent_involution(self, n, t):
        g = GraphParams(n, t)
        for v in iter_words(g):
            if is_extreme(v):
                continue
            assert flip(flip(v)) == v
            assert are_adjacent(g, v, flip(v))


class TestWordFamilies:
    @pytest.mark.parametrize("parent,n,t,expected", [
        ((1,), 2, 3, [(1, 1, 1), (1, 2, 2)]),
        ((1,), 3, 3, [(1, 1, 1), (1, 2, 2), (1, 3, 3)]),
        ((2, 1), 3, 4, [(2, 1, 1, 1), (2, 1, 2, 2), (2, 1, 3, 3)]),
    ])
    def test_e1(self, parent, n, t, expected):
        assert e1(parent, GraphParams(n, t)) == expected

    @pytest.mark.parametrize("parent,n,t,expected", [
        ((1,), 2, 3, [(2, 2, 1)]),
        ((1,), 3, 3, [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 3, 1)]),
        ((2, 1), 2, 4, [(2, 2, 2, 1)]),
    ])
    def test_e2(self, parent, n, t, expected):
        assert e2(parent, GraphParams(n, t)) == expected

    @pytest.mark.parametrize("parent,n,t,expected", [
        ((2, 1), 2, 4, [(1, 2, 1, 2)]),
        ((2, 1), 3, 4, [(1, 2, 1, 2), (1, 2, 3, 2)]),
        ((1, 2), 2, 4, [(2, 1, 2, 1)]),
    ])
    def test_e3(self, parent, n, t, expected):
        assert e3(parent, GraphParams(n, t)) == expected

    def test_e3_needs_a_non_constant_parent(self):
        with pytest.raises(UndefinedEllError):
            e3((1, 1), GraphParams(3, 4))

    @pytest.mark.parametrize("family", [e1, e2, e3])
    def test_parent_length_is_checked(self, family):
        with pytest.raises(InvalidWordError):
            family((1, 2, 1), GraphParams(3, 4))

    @pytest.mark.parametrize("family", [e1, e2])
    def test_families_need_t_at_least_3(self, family):
        with pytest.raises(InvalidWordError):
            family((), GraphParams(3, 2))

    @settings(deadline=None)
    @given(st.integers(min_value=2, max_value=6), st.integers(min_value=3, max_value=6), st.data())
    def test_family_sizes(self, n, t, data):
        g = GraphParams(n, t)
        parent = tuple(data.draw(st.lists(st.integers(1, n), min_size=t - 2, max_size=t - 2)))
        assert len(e1(parent, g)) == n
        assert len(e2(parent, g)) == (n - 1) ** 2
        if not is_extreme(parent):
            assert len(e3(parent, g)) == n - 1


class TestBuild:
    @pytest.mark.parametrize("n,t,expected", [
        (3, 1, [(1,)]),
        (3, 2, [(1, 1), (2, 1), (3, 1)]),
        (2, 3, [(1, 1, 1), (1, 2, 2), (2, 2, 1)]),
    ])
    def test_examples(self, n, t, expected):
        members = build_D(GraphParams(n, t))
        assert list(members) == expected
        assert members.kind == KIND_D

    def test_size_of_hanoi_instance(self):
        assert len(build_D(GraphParams(3, 3))) == 7
        assert len(build_D(GraphParams(3, 4))) == 21

    @pytest.mark.parametrize("n,t,expected", [
        (3, 2, [(2, 1), (3, 1)]),
        (2, 3, [(1, 2, 2), (2, 2, 1)]),
        (2, 1, []),
    ])
    def test_star(self, n, t, expected):
        star = build_D_star(GraphParams(n, t))
        assert list(star) == expected
        assert star.kind == KIND_D_STAR
        assert len(star) == cardinality_formula(GraphParams(n, t)) - 1

    @pytest.mark.parametrize("n,t", [_slow_if_large(n, t) for n, t in SIZE_GRID])
    def test_size_law(self, n, t):
        g = GraphParams(n, t)
        stats = ConstructionStats()
        members = build_D(g, stats=stats)
        assert len(members) == cardinality_formula(g) == cardinality_recurrence(g)
        assert stats.duplicate_incidents == 0
        assert all(level.block_total == level.union_size for level in stats.levels)

    @pytest.mark.parametrize("n,t", [(n, t) for n in range(2, 7) for t in range(3, 8)])
    def test_recurrences(self, n, t):
        previous = cardinality_formula(GraphParams(n, t - 2))
        if t % 2 == 1:
            expected = n + (n - 1) ** 2 + n * n * (previous - 1)
        else:
            expected = n + n * n * (previous - 1)
        assert cardinality_formula(GraphParams(n, t)) == expected
        assert cardinality_recurrence(GraphParams(n, t)) == expected

    @pytest.mark.parametrize("n,t,expected", [(3, 4, 21), (2, 1, 1), (5, 3, 21)])
    def test_cardinality_formula(self, n, t, expected):
        assert cardinality_formula(GraphParams(n, t)) == expected

    def test_cardinality_formula_has_no_cap(self):
        g = GraphParams(2, 63)
        assert cardinality_formula(g) == (2 ** 63 + 1) // 3

    @pytest.mark.parametrize("n,t", [(n, t) for n in range(2, 6) for t in range(1, 6)])
    def test_constant_entries(self, n, t):
        members = build_D(GraphParams(n, t))
        assert (1,) * t in members
        assert all((alpha,) * t not in members for alpha in range(2, n + 1))

    def test_level_statistics(self):
        stats = ConstructionStats()
        build_D(GraphParams(2, 5), stats=stats)
        assert [level.t for level in stats.levels] == [1, 3, 5]
        assert [level.union_size for level in stats.levels] == [1, 3, 11]

    def test_member_cap(self):
        with pytest.raises(CapacityError):
            build_D(GraphParams(3, 8), member_cap=100)

    @pytest.mark.parametrize("n,t", [(2, 6), (3, 5), (4, 4), (5, 3)])
    def test_streaming_matches_materialized(self, n, t):
        g = GraphParams(n, t)
        assert sorted(iter_D(g)) == list(build_D(g))
        assert count_D_streaming(g) == cardinality_formula(g)


class TestBlocks:
    def test_even_levels_use_the_ones_block(self):
        g = GraphParams(3, 4)
        blocks = list(generate_blocks(build_D(GraphParams(3, 2)), g))
        assert blocks[0].kind == BLOCK_ONES
        assert blocks[0].members == ((1, 1, 1, 1), (1, 1, 2, 1), (1, 1, 3, 1))
        assert {b.kind for b in blocks[1:]} == {BLOCK_E1, BLOCK_E2, BLOCK_E3}

    def test_odd_levels_skip_e3_for_the_ones_parent(self):
        blocks = list(generate_blocks([(1,)], GraphParams(3, 3)))
        assert [b.kind for b in blocks] == [BLOCK_E1, BLOCK_E2]

    @pytest.mark.parametrize("n,t", [(2, 4), (2, 5), (3, 3), (3, 4), (4, 3), (4, 4)])
    def test_blocks_are_pairwise_disjoint(self, n, t):
        g = GraphParams(n, t)
        blocks = list(generate_blocks(build_D(GraphParams(n, t - 2)), g))
        for a, b in itertools.combinations(blocks, 2):
            assert not set(a.members) & set(b.members)

    @pytest.mark.parametrize("n,t", [(2, 4), (3, 3), (3, 4), (4, 3), (3, 5)])
    def test_neighborhoods_stay_anchored_to_the_parent(self, n, t):
        g = GraphParams(n, t)
        lower = GraphParams(n, t - 2)
        for block in generate_blocks(build_D(lower), g):
            allowed = set(closed_neighborhood(lower, block.parent))
            for member in block.members:
                assert all(near[: t - 2] in allowed for near in closed_neighborhood(g, member))


class TestVertexSet:
    def test_from_words_sorts_and_deduplicates(self):
        g = GraphParams(3, 2)
        members = VertexSet.from_words(g, [(3, 1), (1, 1), (3, 1)])
        assert members.members == ((1, 1), (3, 1))
        assert (3, 1) in members and (2, 1) not in members

    def test_rejects_unsorted_members(self):
        with pytest.raises(ValueError):
            VertexSet(GraphParams(3, 2), ((2, 1), (1, 1)))

    def test_rejects_invalid_members(self):
        with pytest.raises(InvalidWordError):
            VertexSet(GraphParams(3, 2), ((1, 4),))

    def test_json_document(self):
        members = build_D_star(GraphParams(2, 3))
        data = members.to_json_dict()
        assert data == {"n": 2, "t": 3, "kind": "D_star", "members": ["1.2.2", "2.2.1"]}
        assert VertexSet.from_json_dict(data) == members

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubical_thompson.trees import (
    CARET,
    EMPTY,
    FULL_TREE,
    LEFT_INF,
    RIGHT_INF,
    ClosedTree,
    LongSnake,
    ParseError,
    Tree,
    TreeError,
    enumerate_snakes,
    enumerate_trees,
    full_tree,
    glue,
    glue_all,
    is_snake,
    left_approximation,
    left_spine,
    parse_snake,
    parse_tree,
    partition_to_tree,
    right_approximation,
    right_spine,
    termination,
    tree_to_partition,
    truncate,
    wings,
)

from conftest import trees


def brute_wings(t):
    return sum(1 for k, i in t.carets if i == 1), sum(1 for k, i in t.carets if i == 1 << k)


class TestTreeBasics:
    def test_gluing_condition_rejected(self):
        with pytest.raises(TreeError):
            Tree([(0, 1), (2, 1)])

    def test_index_bounds(self):
        with pytest.raises(TreeError):
            Tree([(0, 1), (1, 3)])

    def test_text_round_trip_examples(self):
        assert str(left_spine(2)) == "((**)*)"
        assert str(CARET) == "(**)"
        assert parse_tree("((**)*)") == left_spine(2)

    @pytest.mark.parametrize("bad,pos", [("((**)", 5), ("(*x)", 2), ("(**)*", 4), (")", 0)])
    def test_parse_errors_report_position(self, bad, pos):
        with pytest.raises(ParseError) as exc:
            parse_tree(bad)
        assert exc.value.position == pos

    @given(trees())
    def test_leaf_count(self, t):
        assert t.n_leaves == len(t) + 1
        assert parse_tree(str(t)) == t

    @pytest.mark.parametrize("n", range(1, 9))
    def test_free_blocked_relation_exhaustive(self, n):
        for t in enumerate_trees(n):
            assert len(t.free_carets()) == len(t.blocked_carets()) + 1

    def test_catalan_counts(self):
        assert [len(enumerate_trees(n)) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]


class TestGlue:
    def test_caret_on_empty(self):
        assert glue(EMPTY, [1], [CARET]) == CARET

    @pytest.mark.parametrize("k", range(1, 7))
    def test_spines_and_full_trees(self, k):
        assert glue(left_spine(k - 1), [1]) == left_spine(k)
        assert glue(full_tree(k - 1), range(1, 2 ** (k - 1) + 1)) == full_tree(k)

    @given(trees())
    def test_split_rejoin(self, t):
        if t.is_empty():
            return
        lt, rt = t.split()
        assert glue(CARET, [1, 2], [lt, rt]) == t

    def test_index_out_of_range(self):
        with pytest.raises(TreeError):
            glue(CARET, [3])

    def test_leaf_order_preserved(self):
        t = glue(CARET, [2], [CARET])
        assert t.leaves() == [(1, 1), (2, 3), (2, 4)]


class TestWings:
    @pytest.mark.parametrize("n", range(0, 8))
    def test_spines(self, n):
        assert wings(left_spine(n)) == (n, min(n, 1))
        assert wings(full_tree(n)) == (n, n)

    def test_glued_right_spine(self):
        t = glue(right_spine(2), [2])
        assert wings(t) == brute_wings(t) == (1, 2)

    @given(trees())
    def test_against_brute_force(self, t):
        assert wings(t) == brute_wings(t)


class TestLongSnakes:
    def test_truncations(self):
        assert truncate(LEFT_INF, 3) == left_spine(3)
        assert truncate(FULL_TREE, 4) == full_tree(4)
        both = truncate(ClosedTree.union_of([LEFT_INF, RIGHT_INF]), 2)
        assert both == left_spine(2) | right_spine(2) and len(both) == 3

    @given(st.text("LR", max_size=5), st.text("LR", min_size=1, max_size=3), st.integers(0, 30))
    def test_truncation_is_snake_of_k_carets(self, prefix, period, k):
        s = LongSnake(prefix, period)
        t = s.truncate(k)
        assert len(t) == k
        assert k == 0 or is_snake(t)

    def test_drop_head(self):
        assert LEFT_INF.drop_head(0) == LEFT_INF
        assert LEFT_INF.drop_head(5) == LEFT_INF
        assert parse_snake("(LR)*").drop_head(1) == parse_snake("(RL)*")

    def test_canonical_form(self):
        assert parse_snake("LL*") == LEFT_INF
        assert parse_snake("L(RL)*") == parse_snake("(LR)*")
        assert str(parse_snake("RL*")) == "RL*"

    def test_full_minus_rejects_free_caret(self):
        with pytest.raises(TreeError):
            ClosedTree.full_minus([(1, 1), (1, 2)])

    def test_closed_tree_has_no_free_caret(self):
        tau = ClosedTree.union_of([LEFT_INF, parse_snake("R(LR)*")])
        assert tau.has_free_caret(20) is None


class TestPartitions:
    def test_examples(self):
        assert tree_to_partition(EMPTY) == [0, 1]
        assert tree_to_partition(CARET) == [0, Fraction(1, 2), 1]
        assert tree_to_partition(left_spine(2)) == [0, Fraction(1, 4), Fraction(1, 2), 1]

    @pytest.mark.parametrize("n", range(0, 9))
    def test_round_trip_exhaustive(self, n):
        for t in enumerate_trees(n):
            assert partition_to_tree(tree_to_partition(t)) == t

    def test_non_standard_rejected(self):
        with pytest.raises(TreeError):
            partition_to_tree([0, Fraction(3, 4), 1])


def brute_termination(seq):
    """Pair up adjacent leaves of one tree that hang from the same caret."""
    out = []
    for t in seq:
        lv = t.leaves()
        parents = [((k - 1, (i + 1) // 2) if k else None) for k, i in lv]
        n = 0
        while n < len(lv):
            if n + 1 < len(lv) and parents[n] is not None and parents[n] == parents[n + 1]:
                out.append(CARET)
                n += 2
            else:
                out.append(EMPTY)
                n += 1
    return out


class TestTermination:
    def test_examples(self):
        assert termination([EMPTY] * 3) == [EMPTY] * 3
        assert termination([CARET, EMPTY]) == [CARET, EMPTY]
        assert termination([left_spine(2), right_spine(2)]) == [CARET, EMPTY, EMPTY, CARET]

    @given(st.lists(trees(5), min_size=1, max_size=4))
    def test_brute_force(self, seq):
        out = termination(seq)
        assert out == brute_termination(seq)
        assert sum(t.n_leaves for t in out) == sum(t.n_leaves for t in seq)


class TestApproximation:
    def test_examples(self):
        assert left_approximation(left_spine(5)) == ([left_spine(5)], 1)
        t = glue_all(left_spine(4))
        chain, m = left_approximation(t)
        assert chain == [left_spine(5), t] and m == 2
        rchain, rm = right_approximation(t)
        assert rm == 5 and rchain[-1] == t

    @given(trees(9))
    def test_chain_properties(self, t):
        for approx in (left_approximation, right_approximation):
            chain, m = approx(t)
            assert len(chain) == m and chain[-1] == t
            for a, b in zip(chain, chain[1:]):
                assert a < b <= t
                assert len(b) <= 2 * len(a) + 1

    def test_snakes_enumeration(self):
        assert len(enumerate_snakes(5)) == 1 + 2 + 4 + 8 + 16
        assert all(is_snake(s) for s in enumerate_snakes(5))

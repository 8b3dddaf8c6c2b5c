import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubical_thompson.bracket import (
    DistanceBracket,
    distance_bracket,
    distance_to_trees,
    l2_lower,
    project_to_trees,
)
from cubical_thompson.config import BracketConfig
from cubical_thompson.diagrams import Diagram, tree_vertex
from cubical_thompson.points import ORIGIN, Point, PointError, parse_point, tree_point
from cubical_thompson.tree_metric import (
    lantern_distance,
    lantern_factors,
    lantern_point,
    median,
    median_distance_trees,
    project_to_snake,
    snake_point,
    tree_distance,
    tree_distance_trees,
    tree_norm,
    weights,
)
from cubical_thompson.trees import (
    CARET,
    EMPTY,
    LEFT_INF,
    RIGHT_INF,
    LongSnake,
    ParseError,
    full_tree,
    glue,
    left_spine,
    right_spine,
)

from conftest import seeds, trees

snakes = st.builds(LongSnake, st.text("LR", max_size=4), st.text("LR", min_size=1, max_size=3))
times = st.fractions(min_value=0, max_value=12, max_denominator=16)


def random_tree_point(t, rng):
    return tree_point(t, [Fraction(rng.randrange(4), 4) for _ in range(t.n_leaves)])


class TestPoints:
    def test_promotion_of_unit_coordinates(self):
        x = tree_point(CARET, [1, 0])
        assert x.head == left_spine(2) and x.coords == (0, 0, 0)

    def test_promotion_outside_trees(self):
        x = Point(Diagram(CARET, (CARET,)), [1])
        assert x.diagram == Diagram(CARET, (EMPTY, EMPTY)) and x.coords == (0, 0)

    def test_range_checks(self):
        with pytest.raises(PointError):
            tree_point(CARET, [Fraction(3, 2), 0])
        with pytest.raises(PointError):
            tree_point(CARET, [0])

    def test_parse(self):
        x = parse_point("[ (**) | * , * ] [ 1/2^1, 0.25 ]")
        assert x.coords[0] == Fraction(1, 2) and float(x.coords[1]) == 0.25
        assert parse_point(str(x)) == x
        with pytest.raises(ParseError):
            parse_point("[ (**) | * , * ] [ 1/2, 0, 0 ]")


class TestTreeDistance:
    def test_single_cube_diagonal(self):
        # both ends of the diagonal of the square spanned at the caret
        a = tree_point(CARET)
        b = tree_point(full_tree(2))
        assert tree_distance(a, b) == pytest.approx(math.sqrt(2), abs=1e-12)

    @given(trees(5), seeds, seeds)
    def test_same_cube_is_euclidean(self, t, s1, s2):
        x = random_tree_point(t, random.Random(s1))
        y = random_tree_point(t, random.Random(s2))
        # both normal forms may grow after promotion; compare in the raw cube
        raw = math.dist([float(c) for c in _raw(t, s1)], [float(c) for c in _raw(t, s2)])
        assert tree_distance(x, y) == pytest.approx(raw, abs=1e-12)

    @given(trees(6), trees(6), trees(6))
    def test_metric_axioms(self, t, s, u):
        a, b, c = (tree_distance_trees(t, s), tree_distance_trees(s, u), tree_distance_trees(t, u))
        assert a == tree_distance_trees(s, t)
        assert c <= a + b + 1e-12
        assert (a == 0) == (t == s)

    @given(trees(6), trees(6))
    def test_between_l2_and_median(self, t, s):
        d = tree_distance_trees(t, s)
        sym = median_distance_trees(t, s)
        assert math.sqrt(sym) - 1e-12 <= d <= sym + 1e-12

    @pytest.mark.parametrize("n", range(0, 8))
    def test_snake_vertices(self, n):
        assert tree_norm(tree_point(left_spine(n))) == pytest.approx(n)

    def test_weights(self):
        assert weights(ORIGIN) == {}
        assert set(weights(tree_point(left_spine(2)))) == left_spine(2).carets


def _raw(t, seed):
    rng = random.Random(seed)
    return [Fraction(rng.randrange(4), 4) for _ in range(t.n_leaves)]


class TestMedian:
    def test_examples(self):
        assert median(left_spine(2), right_spine(2), CARET) == CARET
        assert median_distance_trees(left_spine(3), right_spine(3)) == 4

    @given(trees(5), trees(5), trees(5))
    def test_in_all_intervals(self, t, s, u):
        m = median(t, s, u)
        for a, b in ((t, s), (s, u), (t, u)):
            assert a.carets & b.carets <= m.carets <= a.carets | b.carets


class TestLantern:
    @given(st.lists(trees(3), min_size=2, max_size=2), st.lists(trees(3), min_size=2, max_size=2), seeds)
    def test_product_formula(self, xs, ys, seed):
        rng = random.Random(seed)
        px = [random_tree_point(t, rng) for t in xs]
        py = [random_tree_point(t, rng) for t in ys]
        whole = tree_distance(lantern_point(CARET, px), lantern_point(CARET, py))
        assert lantern_distance(CARET, px, py) == pytest.approx(whole, abs=1e-12)

    @given(st.lists(trees(3), min_size=3, max_size=3), seeds)
    def test_factors_invert_lantern_point(self, parts, seed):
        rng = random.Random(seed)
        px = [random_tree_point(t, rng) for t in parts]
        base = left_spine(2)
        assert lantern_factors(base, lantern_point(base, px)) == px

    @given(trees(4), trees(4), seeds)
    def test_l2_below_tree_distance(self, t, s, seed):
        rng = random.Random(seed)
        x, y = random_tree_point(t, rng), random_tree_point(s, rng)
        assert l2_lower(x, y) <= tree_distance(x, y) + 1e-12


class TestSnakes:
    def test_origin(self):
        assert snake_point(LEFT_INF, 0) == ORIGIN
        assert tree_norm(snake_point(RIGHT_INF, 7)) == pytest.approx(7)

    @given(snakes, times, times)
    def test_unit_speed(self, sigma, s, t):
        d = tree_distance(snake_point(sigma, s), snake_point(sigma, t))
        assert d == pytest.approx(float(abs(s - t)), abs=1e-12)

    def test_projection_of_vertex(self):
        t = glue(left_spine(2), [3])
        assert project_to_snake(tree_point(t), LEFT_INF) == tree_point(left_spine(2))

    @given(trees(5), snakes, seeds)
    def test_projection_is_nearest_on_grid(self, t, sigma, seed):
        x = random_tree_point(t, random.Random(seed))
        p = project_to_snake(x, sigma)
        best = tree_distance(x, p)
        for k in range(4 * 8):
            assert tree_distance(x, snake_point(sigma, Fraction(k, 4))) >= best - 1e-12


class TestProjectToTrees:
    def test_example(self):
        x = Point(Diagram(left_spine(3), (EMPTY, CARET, EMPTY)), [Fraction(1, 3), Fraction(1, 4), 0])
        assert project_to_trees(x) == tree_point(left_spine(3), [Fraction(1, 3), 0, 0, 0])

    def test_identity_on_trees(self):
        x = tree_point(CARET, [Fraction(1, 2), 0])
        assert project_to_trees(x) == x
        assert distance_to_trees(x)[1] == 0

    def test_vertex_projection_is_head(self):
        v = Point(Diagram(full_tree(2), (EMPTY, CARET, EMPTY)))
        assert project_to_trees(v) == tree_point(full_tree(2))
        assert distance_to_trees(v)[1] == pytest.approx(1)


class TestBracket:
    def test_same_point(self):
        x = tree_point(CARET)
        assert distance_bracket(x, x).width == 0

    def test_exact_in_trees(self):
        br = distance_bracket(tree_point(left_spine(3)), tree_point(right_spine(3)))
        assert br.exact and br.lower == pytest.approx(tree_distance_trees(left_spine(3), right_spine(3)))

    def test_monotone_refinement(self):
        # no tree translate holds both points, so the subdivision solver runs
        x = parse_point("[ (((*(**))*)*) | (**) , (*(**)) ] [ 7/8, 7/8 ]")
        y = parse_point("[ ((*(**))*) | (**) , (**) ] [ 3/8, 7/8 ]")
        br = distance_bracket(x, y, BracketConfig(tol=1e-6, max_levels=2))
        assert not br.exact and len(br.history) == 3
        assert br.lower <= br.upper and br.width < 0.1
        los = [lo for _, lo, _ in br.history]
        his = [hi for _, _, hi in br.history]
        assert los == sorted(los) and his == sorted(his, reverse=True)

    def test_record(self):
        assert set(DistanceBracket(0.0, 1.0).record()) == {"lower", "upper", "level", "converged"}

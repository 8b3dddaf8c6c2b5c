import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from cubical_thompson.complex import (
    BudgetExceeded,
    act,
    ball,
    bfs_distance,
    cube_coordinates,
    face,
    interval,
    link_simplex_check,
    maximal_cube,
    median_distance,
    neighbors,
    neighbors_tagged,
    rooms,
    square_exists,
    tree_translator,
)
from cubical_thompson.bracket import distance_bracket
from cubical_thompson.config import BracketConfig
from cubical_thompson.diagrams import (
    X0,
    X1_STANDARD,
    Diagram,
    DiagramError,
    compose,
    identity,
    invert,
    tree_vertex,
)
from cubical_thompson.points import tree_point
from cubical_thompson.tree_metric import tree_distance
from cubical_thompson.trees import CARET, EMPTY, enumerate_trees, full_tree, left_spine, parse_tree, right_spine

from conftest import elements, points, vertices

IDENTITY_VERTEX = identity()


class TestNeighbors:
    def test_identity_has_one(self):
        assert neighbors(IDENTITY_VERTEX) == [Diagram(CARET, (EMPTY, EMPTY))]

    def test_degree_two(self):
        head = parse_tree("(*((**)*))")
        v = Diagram(head, (CARET, CARET))
        assert v.is_reduced()
        assert set(neighbors(v)) == {
            Diagram(head, (EMPTY, EMPTY, CARET)),
            Diagram(head, (CARET, EMPTY, EMPTY)),
            Diagram(head, (full_tree(2),)),
        }

    @given(vertices())
    def test_count(self, v):
        assert len(neighbors(v)) == 2 * v.degree - 1

    def test_symmetric_in_ball(self):
        for v in ball(IDENTITY_VERTEX, 3):
            for w in neighbors(v):
                assert v in neighbors(w)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            ball(IDENTITY_VERTEX, 6, budget=50)


class TestCubes:
    def test_degree_one(self):
        assert len(maximal_cube(X0)) == 2

    def test_degree_two(self):
        cube = maximal_cube(Diagram(parse_tree("(*((**)*))"), (CARET, CARET)))
        assert len(cube) == 4
        assert sorted(cube_coordinates(2, j) for j in cube) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    @given(vertices(5))
    def test_vertex_count(self, v):
        assert len(set(maximal_cube(v).values())) == 2 ** v.degree

    def test_face(self):
        v = tree_vertex(full_tree(2))
        assert len(face(v, [1], [3])) == 2
        with pytest.raises(DiagramError):
            face(v, [1], [1])


class TestLinks:
    def test_examples(self):
        v = tree_vertex(left_spine(2))
        assert link_simplex_check(v, [("cut", 1), ("glue", 2)])
        assert not link_simplex_check(v, [("cut", 2), ("glue", 2)])
        with pytest.raises(DiagramError):
            link_simplex_check(v, [("glue", 3)])

    def test_agrees_with_square_search(self):
        checked = 0
        for v in ball(IDENTITY_VERTEX, 2):
            if v.degree > 4:
                continue
            tags = [t for t, _ in neighbors_tagged(v)]
            for e1, e2 in itertools.combinations(tags, 2):
                assert link_simplex_check(v, [e1, e2]) == square_exists(v, e1, e2)
                checked += 1
        assert checked > 20


class TestMedianDistance:
    def test_examples(self):
        assert median_distance(X0, X0) == 0
        assert median_distance(tree_vertex(left_spine(3)), tree_vertex(right_spine(3))) == 4

    @given(vertices(3), vertices(3))
    @settings(max_examples=40, deadline=None)
    def test_matches_bfs(self, u, v):
        if median_distance(u, v) <= 5:
            assert median_distance(u, v) == bfs_distance(u, v)

    def test_interval_endpoints(self):
        u, v = tree_vertex(left_spine(2)), tree_vertex(right_spine(2))
        iv = interval(u, v)
        assert iv[u] == 0 and iv[v] == 2
        assert tree_vertex(CARET) in iv

    def test_tree_translator(self):
        v = Diagram(full_tree(2), (CARET, EMPTY, EMPTY))
        assert compose(invert(tree_translator(v)), v).in_trees()


class TestAction:
    @given(points())
    def test_identity(self, x):
        assert act(identity(), x) == x

    @given(elements(4), points())
    def test_inverse(self, g, x):
        assert act(g, act(invert(g), x)) == x

    @given(elements(3), elements(3), points())
    def test_is_action(self, g, h, x):
        assert act(g, act(h, x)) == act(compose(g, h), x)

    @given(elements(3), points())
    def test_preserves_coordinates(self, g, x):
        y = act(g, x)
        assert y.degree == x.degree and y.coords == x.coords

    @pytest.mark.parametrize("g", [X0, X1_STANDARD, invert(X0)])
    def test_cubical_on_ball(self, g):
        for v in ball(IDENTITY_VERTEX, 2):
            if v.degree > 3:
                continue
            image = {j: act(g, w) for j, w in maximal_cube(v).items()}
            assert image == maximal_cube(act(g, v))

    @pytest.mark.parametrize("g", [X0, X1_STANDARD])
    def test_isometric(self, g):
        rng = random.Random(3)
        for _ in range(20):
            x = tree_point(rng.choice(enumerate_trees(3)), [Fraction(rng.randrange(4), 4) for _ in range(4)])
            y = tree_point(rng.choice(enumerate_trees(3)), [Fraction(rng.randrange(4), 4) for _ in range(4)])
            br = distance_bracket(act(g, x), act(g, y), BracketConfig(tol=1e-9, refine=False))
            assert br.contains(tree_distance(x, y))


class TestRooms:
    def test_separated(self):
        ok, lu, lv = rooms((0.5, 0.5), (0.2, 0.8), (0.9, 0.1))
        assert ok and lu == ("<=", ">=") and lv == (">=", "<=")

    def test_not_separated(self):
        assert not rooms((0.5, 0.5), (0.2, 0.2), (0.3, 0.9))[0]

    def test_errors(self):
        with pytest.raises(DiagramError):
            rooms((0.5,), (0.1, 0.2), (0.3,))
        with pytest.raises(DiagramError):
            rooms((1.0,), (0.1,), (0.3,))

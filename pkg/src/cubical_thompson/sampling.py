"""Seeded random trees, elements, points and flows for experiments and tests."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .diagrams import Diagram, reduce
from .points import Point
from .trees import ROOT, Tree, enumerate_trees, left_child, right_child


@lru_cache(maxsize=None)
def _trees(n: int) -> tuple:
    return tuple(enumerate_trees(n))


def random_tree(n: int, rng: random.Random) -> Tree:
    """Uniform over trees with ``n`` carets for small ``n``, random growth beyond."""
    if n <= 8:
        return rng.choice(_trees(n))
    cs = {ROOT}
    free = [left_child(ROOT), right_child(ROOT)]
    while len(cs) < n:
        p = free.pop(rng.randrange(len(free)))
        cs.add(p)
        free += [left_child(p), right_child(p)]
    return Tree(cs, validate=False)


def random_element(n: int, rng: random.Random) -> Diagram:
    return reduce(Diagram(random_tree(n, rng), (random_tree(n, rng),)))


def random_vertex(degree: int, rng: random.Random, max_part: int = 2, extra: int = 2) -> Diagram:
    """Random reduced vertex of the given degree."""
    while True:
        parts = [random_tree(rng.randint(0, max_part), rng) for _ in range(degree)]
        leaves = sum(p.n_leaves for p in parts)
        head = random_tree(leaves - 1, rng)
        d = reduce(Diagram(head, parts))
        if d.degree == degree:
            return d


def random_point(degree: int, rng: random.Random, denominator: int = 8) -> Point:
    d = random_vertex(degree, rng)
    return Point(d, [Fraction(rng.randrange(denominator), denominator) for _ in range(degree)])

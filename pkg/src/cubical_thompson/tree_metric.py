"""Exact CAT(0) geometry of the tree subcomplex.

A point ``T[t]`` of the tree subcomplex is encoded by its weight map: carets of
the mother get weight 1, leaf positions get their coordinate. The distance is
computed bottom-up with the lantern recursion: two points sharing a caret split
into independent orthogonal factors at its children, while a caret present on
one side only contributes the remaining edge plus the distance from the origin
of that side's subtree (the origin of each factor is a cone point).
"""

from __future__ import annotations

import math
from typing import Sequence

from .diagrams import Diagram
from .points import Point, PointError, tree_point
from .trees import (
    ROOT,
    LongSnake,
    Tree,
    attach_forest,
    left_approximation,
    left_child,
    relocate,
    right_child,
    wings,
)


def _check_tree_point(x: Point) -> None:
    if not x.in_trees():
        raise PointError("point is not in the tree subcomplex")


def weights(x: Point) -> dict:
    """Global hyperplane coordinates: caret position -> weight in [0, 1]."""
    _check_tree_point(x)
    w = dict.fromkeys(x.head.carets, 1)
    for p, c in zip(x.head.leaves(), x.coords):
        if c > 0:
            w[p] = c
    return w


embed_l2 = weights


def _order(keys) -> list:
    return sorted(keys, key=lambda p: -p[0])


def origin_profile(w: dict) -> dict:
    """Distance from the origin to the subtree rooted at each position."""
    z: dict = {}
    for p in _order(w):
        a = w[p]
        if a < 1:
            z[p] = float(a)
        else:
            z[p] = 1.0 + math.hypot(z.get(left_child(p), 0.0), z.get(right_child(p), 0.0))
    return z


def weight_distance(wa: dict, wb: dict) -> float:
    za = origin_profile(wa)
    zb = origin_profile(wb)
    d: dict = {}
    get = d.get
    for p in _order(set(wa) | set(wb)):
        a = wa.get(p, 0)
        b = wb.get(p, 0)
        l, r = left_child(p), right_child(p)
        if a == 1 and b == 1:
            d[p] = math.hypot(get(l, 0.0), get(r, 0.0))
        elif a == 1:
            d[p] = float(1 - b) + math.hypot(za.get(l, 0.0), za.get(r, 0.0))
        elif b == 1:
            d[p] = float(1 - a) + math.hypot(zb.get(l, 0.0), zb.get(r, 0.0))
        else:
            d[p] = abs(float(a) - float(b))
    return d.get(ROOT, 0.0)


def tree_distance(x: Point, y: Point) -> float:
    """Exact CAT(0) distance between two points of the tree subcomplex."""
    return weight_distance(weights(x), weights(y))


def tree_norm(x: Point) -> float:
    """Distance from the origin."""
    w = weights(x)
    return origin_profile(w).get(ROOT, 0.0)


def tree_distance_trees(t: Tree, s: Tree) -> float:
    return weight_distance(dict.fromkeys(t.carets, 1), dict.fromkeys(s.carets, 1))


def l2_distance(x: Point, y: Point) -> float:
    wa, wb = weights(x), weights(y)
    return math.sqrt(sum(float(wa.get(p, 0) - wb.get(p, 0)) ** 2 for p in set(wa) | set(wb)))


def median_distance_trees(t: Tree, s: Tree) -> int:
    return len(t.carets ^ s.carets)


def median(t: Tree, s: Tree, u: Tree) -> Tree:
    a, b, c = t.carets, s.carets, u.carets
    return Tree((a & b) | (a & c) | (b & c), validate=False)


# ---------------------------------------------------------------- lanterns


def lantern_point(t: Tree, parts: Sequence[Point]) -> Point:
    """Attach the point ``parts[k]`` at leaf ``k+1`` of ``t``."""
    if len(parts) != t.n_leaves:
        raise PointError("need one point per leaf")
    for p in parts:
        _check_tree_point(p)
    mother = attach_forest(t, [p.head for p in parts])
    coords = [c for p in parts for c in p.coords]
    return tree_point(mother, coords)


def lantern_factors(t: Tree, x: Point) -> list[Point]:
    """Inverse of ``lantern_point``: the point hanging below each leaf of ``t``."""
    _check_tree_point(x)
    if not t <= x.head:
        raise PointError("the mother tree of the point must contain the lantern tree")
    coord = dict(zip(x.head.leaves(), x.coords))
    out = []
    for leaf in t.leaves():
        below = [p for p in x.head.carets if p[0] >= leaf[0] and (p[1] - 1) >> (p[0] - leaf[0]) == leaf[1] - 1]
        sub = Tree([relocate(p, leaf, ROOT) for p in below], validate=False)
        local = {relocate(p, leaf, ROOT): c for p, c in coord.items()
                 if p[0] >= leaf[0] and (p[1] - 1) >> (p[0] - leaf[0]) == leaf[1] - 1}
        out.append(tree_point(sub, [local[q] for q in sub.leaves()]))
    return out


def lantern_distance(t: Tree, xs: Sequence[Point], ys: Sequence[Point]) -> float:
    """Distance between two lantern points: the root-sum-square of the factor distances."""
    if len(xs) != t.n_leaves or len(ys) != t.n_leaves:
        raise PointError("need one point per leaf on both sides")
    return math.sqrt(sum(tree_distance(a, b) ** 2 for a, b in zip(xs, ys)))


# ------------------------------------------------------------------ snakes


def snake_point(sigma: LongSnake, t) -> Point:
    if t < 0:
        raise PointError("time must be non-negative")
    n = int(math.floor(t))
    frac = t - n
    mother = sigma.truncate(n)
    coords = [0] * mother.n_leaves
    if frac:
        nxt = sigma.caret(n)
        coords[mother.leaves().index(nxt)] = frac
    return tree_point(mother, coords)


def snake_ray(sigma: LongSnake):
    """Unit-speed geodesic ray from the origin along a long snake."""
    return lambda t: snake_point(sigma, t)


def project_to_snake(x: Point, sigma: LongSnake) -> Point:
    """Nearest point of the snake geodesic to ``x``."""
    _check_tree_point(x)
    cs = x.head.carets
    n = 0
    while sigma.caret(n) in cs:
        n += 1
    core = sigma.truncate(n)
    nxt = sigma.caret(n)
    coords = [0] * core.n_leaves
    leaves = x.head.leaves()
    if nxt in leaves:
        c = x.coords[leaves.index(nxt)]
        coords[core.leaves().index(nxt)] = c
    return tree_point(core, coords)


def project_to_subtree_vertex(t: Tree, sigma: LongSnake) -> Tree:
    return Tree(t.carets & sigma.truncate(t.depth() + 1).carets, validate=False)


# ------------------------------------------------------ wing estimates


def wing_distance_upper(t: Tree) -> float:
    """Certified upper bound for the distance from the origin to ``t``."""
    lw = wings(t)[0]
    m = left_approximation(t)[1]
    return lw + math.sqrt(lw) * (1 + math.sqrt(2)) * 2 ** (m / 2)


def wing_distance_lower(d: Diagram) -> float:
    """Lower bound for the distance from the origin to a reduced degree-1 vertex."""
    return math.hypot(wings(d.head)[0], wings(d.parts[0])[1])

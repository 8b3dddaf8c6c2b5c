"""Vertices, edges and cubes of the complex; median distances and intervals."""

from __future__ import annotations

import itertools
from collections import deque
from typing import Callable, Iterable

from .diagrams import Diagram, DiagramError, compose, cut, glue_parts, invert, reduce, tree_vertex
from .points import Point
from .trees import Tree, attach_forest, enumerate_trees, left_spine, right_spine


class BudgetExceeded(RuntimeError):
    pass


def act(g: Diagram, x: Point | Diagram):
    """Left action of a degree-1 element on a point or vertex diagram."""
    if isinstance(x, Diagram):
        return compose(g, x)
    return Point(compose(g, x.diagram), x.coords)


# ------------------------------------------------------------- neighbours


def neighbors_tagged(v: Diagram) -> list[tuple[tuple, Diagram]]:
    """Edges at a vertex as ``(tag, neighbour)`` with tags ``('cut', j)`` / ``('glue', k)``."""
    v = reduce(v)
    out = [(("cut", j), reduce(cut(v, [j]))) for j in range(1, v.degree + 1)]
    out += [(("glue", k), reduce(glue_parts(v, k))) for k in range(1, v.degree)]
    return out


def neighbors(v: Diagram) -> list[Diagram]:
    return [w for _, w in neighbors_tagged(v)]


def edge_subscripts(tag: tuple) -> frozenset:
    kind, j = tag
    return frozenset([j]) if kind == "cut" else frozenset([j, j + 1])


def link_simplex_check(v: Diagram, edges: Iterable[tuple]) -> bool:
    """Edges at ``v`` span a cube iff their subscripts are pairwise disjoint."""
    v = reduce(v)
    edges = list(edges)
    for kind, j in edges:
        if kind == "cut" and not 1 <= j <= v.degree:
            raise DiagramError(f"edge {kind}{j} is not incident to the vertex")
        if kind == "glue" and not 1 <= j < v.degree:
            raise DiagramError(f"edge {kind}{j} is not incident to the vertex")
        if kind not in ("cut", "glue"):
            raise DiagramError(f"unknown edge kind {kind}")
    subs = [edge_subscripts(e) for e in edges]
    return all(not (a & b) for a, b in itertools.combinations(subs, 2))


def square_exists(v: Diagram, e1: tuple, e2: tuple) -> bool:
    """Brute force: the two neighbours along ``e1``, ``e2`` share a neighbour besides ``v``."""
    v = reduce(v)
    tagged = dict(neighbors_tagged(v))
    a, b = tagged[e1], tagged[e2]
    if a == b:
        return False
    na = set(neighbors(a))
    return any(w != v for w in neighbors(b) if w in na)


# ------------------------------------------------------------------ cubes


def maximal_cube(g: Diagram) -> dict:
    """Vertices ``g[J]`` of the cube at ``g``, keyed by the subset ``J``."""
    g = reduce(g)
    n = g.degree
    out = {}
    for r in range(n + 1):
        for js in itertools.combinations(range(1, n + 1), r):
            out[frozenset(js)] = reduce(cut(g, js))
    return out


def cube_coordinates(n: int, js: Iterable[int]) -> tuple:
    s = set(js)
    return tuple(1 if j in s else 0 for j in range(1, n + 1))


def face(g: Diagram, fixed_one: Iterable[int], free: Iterable[int]) -> dict:
    """Face of the cube at ``g``: coordinates in ``fixed_one`` are 1, ``free`` vary."""
    one = frozenset(fixed_one)
    free = sorted(set(free))
    if one & set(free):
        raise DiagramError("fixed and free index sets overlap")
    out = {}
    for r in range(len(free) + 1):
        for js in itertools.combinations(free, r):
            out[frozenset(js)] = reduce(cut(g, one | set(js)))
    return out


# ---------------------------------------------------------- translations


def tree_translator(v: Diagram, w: Tree | None = None) -> Diagram:
    """Element ``h`` with ``h^{-1} v = w`` for a tree ``w`` with ``degree(v)`` leaves."""
    if w is None:
        w = left_spine(v.degree - 1)
    if w.n_leaves != v.degree:
        raise DiagramError("tree must have one leaf per part")
    return Diagram(v.head, (attach_forest(w, list(v.parts)),))


def candidate_trees(n_leaves: int, limit: int = 14) -> list[Tree]:
    """A few trees with ``n_leaves`` leaves: all of them when few, else spines and a balanced one."""
    if n_leaves <= 5:
        return enumerate_trees(n_leaves - 1)[:limit]
    return [left_spine(n_leaves - 1), right_spine(n_leaves - 1)]


def gate_to_trees(v: Diagram) -> Diagram:
    """Nearest vertex of the tree subcomplex (the head tree)."""
    return tree_vertex(reduce(v).head)


def distance_to_trees(v: Diagram) -> int:
    return sum(len(p) for p in reduce(v).parts)


def median_distance(u: Diagram, v: Diagram) -> int:
    """Combinatorial distance between vertices.

    Translate so that ``u`` becomes a tree vertex ``W``; the other vertex then
    reads ``(T'; T'_1, ...)`` and the distance is ``|W Δ T'| + Σ |T'_i|``.
    """
    u, v = reduce(u), reduce(v)
    if u.in_trees() and v.in_trees():
        return len(u.head.carets ^ v.head.carets)
    w = left_spine(u.degree - 1)
    hinv = invert(tree_translator(u, w))
    vv = compose(hinv, v)
    return len(w.carets ^ vv.head.carets) + sum(len(p) for p in vv.parts)


def bfs_distance(u: Diagram, v: Diagram, budget: int = 10**6) -> int:
    """Breadth-first search over lazily generated neighbours."""
    u, v = reduce(u), reduce(v)
    if u == v:
        return 0
    seen = {u}
    frontier = deque([(u, 0)])
    while frontier:
        w, d = frontier.popleft()
        for z in neighbors(w):
            if z in seen:
                continue
            if z == v:
                return d + 1
            seen.add(z)
            if len(seen) > budget:
                raise BudgetExceeded(f"explored more than {budget} vertices")
            frontier.append((z, d + 1))
    raise BudgetExceeded("search exhausted")


def ball(center: Diagram, radius: int, budget: int = 10**6) -> dict:
    """Vertices within combinatorial distance ``radius``, with distances."""
    center = reduce(center)
    dist = {center: 0}
    frontier = [center]
    for r in range(1, radius + 1):
        nxt = []
        for w in frontier:
            for z in neighbors(w):
                if z not in dist:
                    dist[z] = r
                    nxt.append(z)
                    if len(dist) > budget:
                        raise BudgetExceeded(f"ball exceeded {budget} vertices")
        frontier = nxt
    return dist


def interval(u: Diagram, v: Diagram, dist: Callable = median_distance, budget: int = 10**6) -> dict:
    """Vertices on combinatorial geodesics from ``u`` to ``v`` with their distance from ``u``."""
    u, v = reduce(u), reduce(v)
    total = dist(u, v)
    out = {u: 0}
    layer = [u]
    for r in range(1, total + 1):
        nxt = []
        for w in layer:
            for z in neighbors(w):
                if z in out:
                    continue
                if dist(z, v) == total - r:
                    out[z] = r
                    nxt.append(z)
                    if len(out) > budget:
                        raise BudgetExceeded("interval too large")
        layer = nxt
    return out



# ------------------------------------------------------------------ rooms


def rooms(center, u, v) -> tuple[bool, tuple, tuple]:
    """Room labels of ``u`` and ``v`` around an interior point of a cube.

    Coordinate ``i`` of a point gets ``"<="`` or ``">="`` relative to the
    center; the pair is separated when every product
    ``(u_i - c_i)(v_i - c_i)`` is non-positive.
    """
    if not (len(center) == len(u) == len(v)):
        raise DiagramError("points must live in the same cube")
    if any(not 0 < c < 1 for c in center):
        raise DiagramError("center must be an interior point")
    lab_u = tuple("<=" if a <= c else ">=" for a, c in zip(u, center))
    lab_v = tuple("<=" if b <= c else ">=" for b, c in zip(v, center))
    separated = all((a - c) * (b - c) <= 0 for a, b, c in zip(u, v, center))
    return separated, lab_u, lab_v

"""Certified brackets for CAT(0) distances in the full complex.

Exact values come from translating both points into a common copy of the tree
subcomplex. Otherwise the bracket combines the nearest-point projection onto
the tree subcomplex (obtuse angle at the foot gives a lower bound, the broken
path through the foot an upper bound) with a shortest path over a subdivided
cubulation of the convex hull of a median interval.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .complex import (
    BudgetExceeded,
    act,
    candidate_trees,
    interval,
    median_distance,
    neighbors,
    tree_translator,
)
from .config import BracketConfig
from .diagrams import Diagram, cut, invert, reduce
from .points import Point, tree_point
from .tree_metric import l2_distance, tree_distance


@dataclass
class DistanceBracket:
    lower: float
    upper: float
    level: int = 0
    converged: bool = True
    exact: bool = False
    history: list = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 1e-12) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def record(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "level": self.level, "converged": self.converged}

    @staticmethod
    def exact_value(d: float) -> "DistanceBracket":
        return DistanceBracket(d, d, 0, True, True, [(0, d, d)])


# ------------------------------------------------------------ projections


def project_to_trees(x: Point) -> Point:
    """Nearest point of the tree subcomplex: keep coordinates over empty right trees."""
    head = x.diagram.head
    coords = []
    for part, t in zip(x.diagram.parts, x.coords):
        if part.is_empty():
            coords.append(t)
        else:
            coords.extend([0] * part.n_leaves)
    return tree_point(head, coords)


def distance_to_trees(x: Point) -> tuple[Point, float]:
    """Foot of the projection and the exact distance to it."""
    p = project_to_trees(x)
    if x.in_trees():
        return p, 0.0
    h = tree_translator(x.diagram)
    hinv = invert(h)
    return p, tree_distance(act(hinv, x), act(hinv, p))


def exact_distance(x: Point, y: Point) -> float | None:
    """Exact distance when some tree translate contains both points."""
    if x.in_trees() and y.in_trees():
        return tree_distance(x, y)
    for a, b in ((x, y), (y, x)):
        for w in candidate_trees(a.degree):
            hinv = invert(tree_translator(a.diagram, w))
            bb = act(hinv, b)
            if bb.in_trees():
                return tree_distance(act(hinv, a), bb)
    return None


def projection_bounds(x: Point, y: Point) -> tuple[float, float]:
    """Bounds from the obtuse angle at projection feet, over several translates."""
    lo, hi = 0.0, math.inf
    for a, b in ((x, y), (y, x)):
        for w in candidate_trees(a.degree):
            hinv = invert(tree_translator(a.diagram, w))
            aa, bb = act(hinv, a), act(hinv, b)
            p, delta = distance_to_trees(bb)
            leg = tree_distance(aa, p)
            lo = max(lo, math.hypot(leg, delta))
            hi = min(hi, leg + delta)
    return lo, hi


# ------------------------------------------------- subdivided convex hull


def _face_vertices(x: Point) -> list[Diagram]:
    sup = x.support()
    out = []
    for r in range(len(sup) + 1):
        for js in itertools.combinations(sup, r):
            out.append(reduce(cut(x.diagram, js)))
    return out


@dataclass
class _Cubulation:
    coords: dict  # vertex -> int vector
    cubes: list  # (base vector, directions)
    dim: int


def _cubulate(u: Diagram, v: Diagram, budget: int) -> _Cubulation:
    iv = interval(u, v, budget=budget)
    total = iv[v]
    # a geodesic edge path u = p0, ..., pD = v
    path = [v]
    while path[-1] != u:
        cur = path[-1]
        r = iv[cur]
        path.append(next(z for z in neighbors(cur) if iv.get(z) == r - 1))
    path.reverse()
    dist_cache: dict = {}

    def dist(a, b):
        key = (a, b)
        if key not in dist_cache:
            dist_cache[key] = median_distance(a, b)
        return dist_cache[key]

    coords = {}
    for w in iv:
        dw = [dist(w, p) for p in path]
        coords[w] = tuple(1 if dw[i] < dw[i - 1] else 0 for i in range(1, total + 1))
    by_vec = {c: w for w, c in coords.items()}
    cubes = []
    for w, c in coords.items():
        ups = []
        for z in neighbors(w):
            cz = coords.get(z)
            if cz is None:
                continue
            diff = [i for i in range(total) if cz[i] != c[i]]
            if len(diff) == 1 and cz[diff[0]] == 1:
                ups.append(diff[0])
        ups.sort()
        # keep the largest subset of up-directions whose full cube is present
        for size in range(len(ups), -1, -1):
            found = False
            for dirs in itertools.combinations(ups, size):
                ok = True
                for r in range(1, size + 1):
                    for sub in itertools.combinations(dirs, r):
                        vec = list(c)
                        for i in sub:
                            vec[i] = 1
                        if tuple(vec) not in by_vec:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    cubes.append((c, dirs))
                    found = True
            if found:
                break
    return _Cubulation(coords, cubes, total)


def _embed(x: Point, cub: _Cubulation) -> np.ndarray:
    m = x.vertex().diagram
    base = np.array(cub.coords[m], dtype=float)
    vec = base.copy()
    for j in x.support():
        nb = reduce(cut(x.diagram, [j]))
        vec += float(x.coords[j - 1]) * (np.array(cub.coords[nb], dtype=float) - base)
    return vec


def _crossings(cub: _Cubulation) -> list[set]:
    adj = [set() for _ in range(cub.dim)]
    for _, dirs in cub.cubes:
        for i, j in itertools.combinations(dirs, 2):
            adj[i].add(j)
            adj[j].add(i)
    return adj


def coloring_lower(a: np.ndarray, b: np.ndarray, cub: _Cubulation, tries: int = 32, seed: int = 0) -> float:
    """Lower bound from collapsing onto a product of trees.

    A colour class of pairwise non-crossing hyperplanes collapses the hull
    onto a tree, where the distance is the l1 sum over the class; distinct
    classes form an l2 product. Every proper colouring of the crossing graph
    therefore gives ``sqrt(sum_c (sum_{h in c} |a_h - b_h|)^2)``.
    """
    adj = _crossings(cub)
    gap = np.abs(a - b)
    rng = np.random.default_rng(seed)
    orders = [list(np.argsort(-gap))]
    orders += [list(rng.permutation(cub.dim)) for _ in range(tries)]
    best = float(np.linalg.norm(gap))
    for order in orders:
        color: dict = {}
        sums: list = []
        for h in order:
            used = {color[j] for j in adj[h] if j in color}
            # join the heaviest admissible class to grow the l2 sum the most
            options = [c for c in range(len(sums)) if c not in used]
            if options:
                c = max(options, key=lambda c: sums[c])
                sums[c] += gap[h]
            else:
                c = len(sums)
                sums.append(gap[h])
            color[h] = c
        best = max(best, math.sqrt(sum(s * s for s in sums)))
    return best


def _grid_dijkstra(a: np.ndarray, b: np.ndarray, cub: _Cubulation, k: int, budget: int) -> float:
    """Shortest path from ``a`` to ``b`` through k-grid points, straight inside each cube."""
    cubes = []
    total = 0
    for base, dirs in cub.cubes:
        base = np.array(base, dtype=np.int64) * k
        dirs = list(dirs)
        pts = np.repeat(base[None, :], (k + 1) ** len(dirs), axis=0)
        if dirs:
            pts[:, dirs] = np.array(list(itertools.product(range(k + 1), repeat=len(dirs))))
        fixed = [i for i in range(cub.dim) if i not in dirs]
        cubes.append((base, fixed, pts))
        total += len(pts)
        if total > budget:
            raise BudgetExceeded("subdivision grid exceeds budget")

    ak, bk = a * k, b * k
    in_a = [c for c in cubes if np.allclose(ak[c[1]], c[0][c[1]])]
    holds_b = {id(c) for c in cubes if np.allclose(bk[c[1]], c[0][c[1]])}
    best = math.inf
    dist: dict = {}
    heap = []
    for c in in_a:
        if id(c) in holds_b:
            best = min(best, float(np.linalg.norm(ak - bk)) / k)
        for z, d in zip(map(tuple, c[2]), np.linalg.norm(c[2] - ak, axis=1) / k):
            if d < dist.get(z, math.inf):
                dist[z] = d
                heapq.heappush(heap, (d, z))
    done = set()
    while heap:
        d, z = heapq.heappop(heap)
        if d >= best:
            break
        if z in done:
            continue
        done.add(z)
        if len(done) > budget:
            raise BudgetExceeded("subdivision search exceeds budget")
        zz = np.array(z)
        for c in cubes:
            base, fixed, pts = c
            if fixed and not np.array_equal(zz[fixed], base[fixed]):
                continue
            if id(c) in holds_b:
                best = min(best, d + float(np.linalg.norm(zz - bk)) / k)
            for w, dw in zip(map(tuple, pts), d + np.linalg.norm(pts - zz, axis=1) / k):
                if dw < dist.get(w, math.inf):
                    dist[w] = dw
                    heapq.heappush(heap, (dw, w))
    return float(best)


def subdivision_bracket(x: Point, y: Point, cfg: BracketConfig | None = None) -> DistanceBracket:
    """Bracket from the cubulated convex hull of a median interval, refined by doubling."""
    cfg = cfg or BracketConfig()
    fx, fy = _face_vertices(x), _face_vertices(y)
    my = y.vertex().diagram
    u = max(fx, key=lambda w: median_distance(w, my))
    v = max(fy, key=lambda w: median_distance(u, w))
    cub = _cubulate(u, v, cfg.budget)
    a, b = _embed(x, cub), _embed(y, cub)
    lower = coloring_lower(a, b, cub)
    upper = math.inf
    out = DistanceBracket(lower, upper, 0, False)
    k = cfg.k0
    level = 0
    while True:
        try:
            up = _grid_dijkstra(a, b, cub, k, cfg.budget)
        except BudgetExceeded:
            out.converged = False
            break
        level += 1
        out.upper = min(out.upper, up)
        out.level = level
        out.history.append((k, out.lower, out.upper))
        if out.upper - out.lower <= cfg.tol or level >= cfg.max_levels:
            out.converged = out.upper - out.lower <= cfg.tol
            break
        k *= 2
    return out


def distance_bracket(x: Point, y: Point, cfg: BracketConfig | None = None) -> DistanceBracket:
    cfg = cfg or BracketConfig()
    if x == y:
        return DistanceBracket.exact_value(0.0)
    d = exact_distance(x, y)
    if d is not None:
        return DistanceBracket.exact_value(d)
    lo, hi = projection_bounds(x, y)
    out = DistanceBracket(lo, hi, 0, hi - lo <= cfg.tol)
    out.history.append((0, lo, hi))
    if out.converged or not cfg.refine:
        return out
    try:
        sub = subdivision_bracket(x, y, cfg)
    except BudgetExceeded:
        out.converged = False
        return out
    for k, slo, shi in sub.history:
        out.lower = max(out.lower, slo)
        out.upper = min(out.upper, shi)
        out.level += 1
        out.history.append((k, out.lower, out.upper))
    out.converged = out.upper - out.lower <= cfg.tol
    return out


def l2_lower(x: Point, y: Point) -> float:
    """Euclidean distance of global coordinates (tree subcomplex only)."""
    return l2_distance(x, y)

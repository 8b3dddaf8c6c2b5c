"""The planar staircase complex under y = floor(sqrt x): hyperplanes, profiles, geodesics.

The region is the unit "hair" [0,1] x {0} together with the unit squares
[i,i+1] x [j,j+1] with j + 1 <= floor(sqrt i), truncated at x <= x_max.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable

from .config import StaircaseConfig


class RegionError(ValueError):
    pass


Pt = tuple  # (Fraction, Fraction)


def _pt(p) -> Pt:
    return (Fraction(p[0]), Fraction(p[1]))


@dataclass(frozen=True)
class Hyperplane:
    kind: str  # "V" (x = n + 1/2) or "H" (y = n + 1/2)
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


@dataclass
class StaircaseRegion:
    x_max: int = 64
    squares: frozenset = field(init=False)

    def __post_init__(self):
        if self.x_max < 2:
            raise RegionError("x_max must be at least 2")
        self.squares = frozenset(
            (i, j) for i in range(1, self.x_max) for j in range(isqrt(i))
        )

    @staticmethod
    def from_config(cfg: StaircaseConfig) -> "StaircaseRegion":
        return StaircaseRegion(cfg.x_max)

    # ---------------------------------------------------------- geometry
    @property
    def top_height(self) -> int:
        return isqrt(self.x_max - 1)

    def height(self, x) -> int:
        """Largest y with (x, y) in the region, for 1 <= x <= x_max."""
        return min(isqrt(math.floor(x)), self.top_height)

    def contains(self, p) -> bool:
        x, y = _pt(p)
        if y < 0 or x < 0 or x > self.x_max:
            return False
        if x < 1:
            return y == 0
        return y <= self.height(x)

    def vertices(self) -> set:
        out = {(0, 0), (1, 0)}
        for i, j in self.squares:
            out.update({(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)})
        return out

    def boundary_polygon(self) -> list:
        """Corners of the square part, counter-clockwise from (1, 0)."""
        pts = [(1, 0), (self.x_max, 0), (self.x_max, self.top_height)]
        for k in range(self.top_height, 0, -1):
            pts += [(k * k, k), (k * k, k - 1)]
        return pts[:-1]

    def reflex_corners(self) -> list:
        return [(k * k, k - 1) for k in range(2, self.top_height + 1)]

    # ------------------------------------------------------- hyperplanes
    def hyperplanes(self) -> dict:
        """Each hyperplane with the segment where it meets the region."""
        out = {}
        for n in range(self.x_max):
            x = Fraction(2 * n + 1, 2)
            out[Hyperplane("V", n)] = ((x, Fraction(0)), (x, Fraction(self.height(x) if n else 0)))
        for m in range(self.top_height):
            y = Fraction(2 * m + 1, 2)
            out[Hyperplane("H", m)] = ((Fraction((m + 1) ** 2), y), (Fraction(self.x_max), y))
        return out

    def positive_side(self, h: Hyperplane, v) -> bool:
        """Membership of a lattice vertex in the half-space away from the origin."""
        x, y = v
        return x > h.index + Fraction(1, 2) if h.kind == "V" else y > h.index + Fraction(1, 2)

    def half_space(self, h: Hyperplane) -> frozenset:
        return frozenset(v for v in self.vertices() if self.positive_side(h, v))

    def successor(self, h: Hyperplane) -> Hyperplane | None:
        nxt = Hyperplane(h.kind, h.index + 1)
        return nxt if nxt in self.hyperplanes() else None


# ------------------------------------------------------------------ posets


def below(h1: Hyperplane, h2: Hyperplane) -> bool:
    """Closed form of ``h1 <= h2``, i.e. ``h2+`` inside ``h1+``."""
    if h1.kind == h2.kind:
        return h1.index <= h2.index
    if h1.kind == "V":
        return (h2.index + 1) ** 2 >= h1.index + 1
    return False


def below_brute(region: StaircaseRegion, h1: Hyperplane, h2: Hyperplane) -> bool:
    return region.half_space(h2) <= region.half_space(h1)


@dataclass
class ProfileVerdict:
    ok: bool
    axiom: str | None = None
    witness: tuple | None = None
    unresolved: list = field(default_factory=list)  # members whose successors lie past x_max

    def record(self) -> dict:
        return {
            "ok": self.ok,
            "axiom": self.axiom,
            "witness": [str(h) for h in self.witness] if self.witness else None,
            "unresolved_at_bound": [str(h) for h in self.unresolved],
        }


def is_profile(region: StaircaseRegion, family: Iterable[Hyperplane], brute: bool = False) -> ProfileVerdict:
    """Check the three profile axioms inside the truncated region.

    Members whose only larger hyperplanes fall outside the truncation are
    listed as unresolved rather than counted as maximal.
    """
    fam = set(family)
    every = list(region.hyperplanes())
    if not fam <= set(every):
        raise RegionError("family contains hyperplanes outside the region")

    def le(a, b):
        return below_brute(region, a, b) if brute else below(a, b)

    common = set(region.vertices())
    for h in sorted(fam, key=lambda h: (h.kind, h.index)):
        common &= region.half_space(h)
        if not common:
            return ProfileVerdict(False, "i", (h,))
    unresolved = []
    for h in sorted(fam, key=lambda h: (h.kind, h.index)):
        if any(g != h and le(h, g) for g in fam):
            continue
        if region.successor(h) is None:
            unresolved.append(h)
            continue
        return ProfileVerdict(False, "ii", (h,))
    for h1 in sorted(fam, key=lambda h: (h.kind, h.index)):
        for h2 in every:
            if h2 not in fam and le(h2, h1):
                return ProfileVerdict(False, "iii", (h2, h1), unresolved)
    return ProfileVerdict(True, None, None, unresolved)


def verticals(region: StaircaseRegion) -> list:
    return [h for h in region.hyperplanes() if h.kind == "V"]


def horizontals(region: StaircaseRegion) -> list:
    return [h for h in region.hyperplanes() if h.kind == "H"]


# --------------------------------------------------------------- geodesics


def segment_inside(region: StaircaseRegion, p, q) -> bool:
    """Exact test that the closed segment ``pq`` stays in the square part."""
    (x0, y0), (x1, y1) = _pt(p), _pt(q)
    if not (region.contains((x0, y0)) and region.contains((x1, y1))):
        return False
    if min(x0, x1) < 1:
        return y0 == 0 and y1 == 0
    if x0 == x1:
        return True
    if x0 > x1:
        x0, y0, x1, y1 = x1, y1, x0, y0
    slope = (y1 - y0) / (x1 - x0)
    k = region.height(x0)
    while True:
        start = max(x0, Fraction(k * k))
        nxt = (k + 1) ** 2 if k < region.top_height else region.x_max + 1
        end = min(x1, Fraction(nxt))
        for x in (start, end):
            if y0 + slope * (x - x0) > k:
                return False
        if end >= x1:
            return True
        k += 1


def _length(path) -> float:
    return sum(math.dist(a, b) for a, b in zip(path, path[1:]))


def _simplify(path) -> list:
    out = [path[0]]
    for p in path[1:]:
        if p == out[-1]:
            continue
        if len(out) >= 2:
            a, b = out[-2], out[-1]
            if (b[0] - a[0]) * (p[1] - a[1]) == (b[1] - a[1]) * (p[0] - a[0]):
                out[-1] = p
                continue
        out.append(p)
    return out


def polygon_geodesic(region: StaircaseRegion, p, q) -> tuple[float, list]:
    """Shortest path: Dijkstra over the visibility graph of reflex corners."""
    p, q = _pt(p), _pt(q)
    for z in (p, q):
        if not region.contains(z):
            raise RegionError(f"point {tuple(map(str, z))} outside the region")
    if p[0] > q[0]:
        length, path = polygon_geodesic(region, q, p)
        return length, path[::-1]
    if q[0] < 1 or (p[1] == 0 and q[1] == 0):
        return float(q[0] - p[0]), [p, q]
    prefix = []
    if p[0] < 1:
        prefix, p = [p], (Fraction(1), Fraction(0))
    nodes = [p, q] + [_pt(c) for c in region.reflex_corners()]
    nodes = list(dict.fromkeys(nodes))
    dist = {p: 0.0}
    prev = {}
    heap = [(0.0, 0, p)]
    seen = set()
    tick = 1
    while heap:
        d, _, a = heapq.heappop(heap)
        if a in seen:
            continue
        seen.add(a)
        if a == q:
            break
        for b in nodes:
            if b in seen or not segment_inside(region, a, b):
                continue
            nd = d + math.dist(a, b)
            if nd < dist.get(b, math.inf) - 1e-15:
                dist[b] = nd
                prev[b] = a
                heapq.heappush(heap, (nd, tick, b))
                tick += 1
    path = [q]
    while path[-1] != p:
        path.append(prev[path[-1]])
    path = _simplify(prefix + path[::-1])
    return _length(path), path


def boundary_path_length(p, q) -> float:
    """Length of the path down to the x-axis, along it, and back up."""
    p, q = _pt(p), _pt(q)
    return float(p[1] + abs(p[0] - q[0]) + q[1])


def is_extension(short: list, long: list) -> bool:
    """Whether the polyline ``long`` starts with the whole of ``short``."""
    a, b = _simplify(list(map(_pt, short))), _simplify(list(map(_pt, long)))
    m = len(a) - 1
    if m == 0:
        return a[0] == b[0]
    if len(b) <= m - 1 or a[:m] != b[:m]:
        return False
    if len(b) == m:
        return False
    u, v, z = b[m - 1], b[m], a[m]
    cross = (v[0] - u[0]) * (z[1] - u[1]) - (v[1] - u[1]) * (z[0] - u[0])
    inside = min(u[0], v[0]) <= z[0] <= max(u[0], v[0]) and min(u[1], v[1]) <= z[1] <= max(u[1], v[1])
    return cross == 0 and inside


def classify_vertex(region: StaircaseRegion, v) -> str:
    x, y = _pt(v)
    if y == 0:
        return "axis"
    if y == region.height(x) or (x.denominator == 1 and isqrt(int(x)) ** 2 == x and y == isqrt(int(x)) - 1):
        return "staircase"
    return "interior"


@dataclass
class RayEvidence:
    axis_nested: bool
    corner_pairs_extend: dict  # (k, l) -> bool, k < l
    corner_touch: dict  # k -> bool
    paths: dict

    @property
    def ok(self) -> bool:
        return self.axis_nested and not any(self.corner_pairs_extend.values()) and all(self.corner_touch.values())

    def record(self) -> dict:
        return {
            "ok": self.ok,
            "axis_nested": self.axis_nested,
            "corner_pairs_extend": {f"{k},{l}": v for (k, l), v in self.corner_pairs_extend.items()},
            "corner_touch": {str(k): v for k, v in self.corner_touch.items()},
            "paths": {k: [[str(c) for c in pt] for pt in path] for k, path in self.paths.items()},
        }


def ray_uniqueness_evidence(region: StaircaseRegion, count: int) -> RayEvidence:
    """Axis geodesics nest; geodesics to the corners (k^2, k) never extend each other."""
    if count < 2:
        raise RegionError("need at least two geodesics to compare")
    if count * count > region.x_max or count > region.top_height:
        raise RegionError("corners beyond the truncation; raise x_max")
    origin = (0, 0)
    axis = [polygon_geodesic(region, origin, (k * k, 0))[1] for k in range(1, count + 1)]
    nested = all(is_extension(a, b) for a, b in zip(axis, axis[1:]))
    corner = {k: polygon_geodesic(region, origin, (k * k, k))[1] for k in range(1, count + 1)}
    pairs = {(k, l): is_extension(corner[k], corner[l]) for k in corner for l in corner if k < l}
    touch = {
        k: any(classify_vertex(region, v) == "staircase" for v in path[1:]) for k, path in corner.items()
    }
    return RayEvidence(nested, pairs, touch, {f"corner{k}": p for k, p in corner.items()})

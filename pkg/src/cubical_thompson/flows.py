"""Flows on the dyadic tree: boundary points of the tree subcomplex.

A flow stores exact masses on a finite frontier tree; below each frontier leaf
one of three tail rules extends it: all mass down the leftmost path, all mass
down the rightmost path, or halving at every step.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .diagrams import Diagram, reduce
from .dyadic import format_dyadic, parse_dyadic
from .points import tree_point
from .tree_metric import tree_distance
from .trees import (
    ROOT,
    ClosedTree,
    LongSnake,
    Tree,
    address_of,
    left_child,
    parent,
    pos_of_address,
    relocate,
    right_child,
)

DIRAC_LEFT = "DIRAC_LEFT"
DIRAC_RIGHT = "DIRAC_RIGHT"
UNIFORM = "UNIFORM"
POLICIES = (DIRAC_LEFT, DIRAC_RIGHT, UNIFORM)


class FlowError(ValueError):
    pass


def _mass(x):
    if isinstance(x, str):
        return parse_dyadic(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class Flow:
    frontier: Tree
    values: Mapping  # position -> mass, for every caret and every leaf of the frontier
    tails: Mapping  # leaf position -> policy

    def __init__(self, frontier: Tree, values: Mapping, tails: Mapping, *, tol: float = 1e-12):
        vals = {tuple(p): _mass(v) for p, v in values.items()}
        tls = {tuple(p): t for p, t in tails.items()}
        leaves = frontier.leaves()
        nodes = set(frontier.carets) | set(leaves)
        missing = nodes - set(vals)
        if missing:
            raise FlowError(f"missing values at {sorted(missing)[:3]}")
        extra = set(vals) - nodes
        if extra:
            raise FlowError(f"values outside the frontier at {sorted(extra)[:3]}")
        if set(tls) != set(leaves):
            raise FlowError("need exactly one tail policy per frontier leaf")
        for t in tls.values():
            if t not in POLICIES:
                raise FlowError(f"unknown tail policy {t!r}")

        def close(a, b):
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                return a == b
            return abs(a - b) <= tol

        if not close(vals[ROOT], Fraction(1)):
            raise FlowError("root mass must be 1")
        for p, v in vals.items():
            if v < 0 or v > 1 + tol:
                raise FlowError(f"mass {v} at {p} outside [0,1]")
        for p in frontier.carets:
            if not close(vals[p], vals[left_child(p)] + vals[right_child(p)]):
                raise FlowError(f"conservation fails at {p}")
        object.__setattr__(self, "frontier", frontier)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "tails", tls)

    # ------------------------------------------------------------ lookup
    def frontier_leaf_above(self, p) -> tuple:
        q = tuple(p)
        while q not in self.values:
            q = parent(q)
        return q

    def eval(self, p) -> Fraction:
        """Mass of the standard dyadic interval at position ``p``."""
        p = tuple(p)
        v = self.values.get(p)
        if v is not None:
            return v
        q = self.frontier_leaf_above(p)
        mass = self.values[q]
        if q in self.frontier.carets:
            # ancestor is a caret whose child subtree is not stored: impossible for valid frontiers
            raise FlowError("inconsistent frontier")
        d = p[0] - q[0]
        rel = p[1] - ((q[1] - 1) << d)
        policy = self.tails[q]
        if policy == DIRAC_LEFT:
            return mass if rel == 1 else mass * 0
        if policy == DIRAC_RIGHT:
            return mass if rel == 1 << d else mass * 0
        return mass / (1 << d) if isinstance(mass, Fraction) else mass / 2.0**d

    def eval_interval(self, depth: int, index: int):
        return self.eval((depth, index))

    def refine(self, bigger: Tree) -> "Flow":
        """Same flow stored on a larger frontier."""
        if not self.frontier <= bigger:
            raise FlowError("refinement must contain the current frontier")
        vals = {}
        tls = {}
        for p in list(bigger.carets) + bigger.leaves():
            vals[p] = self.eval(p)
        for p in bigger.leaves():
            tls[p] = self.tails[self.frontier_leaf_above(p)]
        return Flow(bigger, vals, tls)

    def support_tree(self) -> ClosedTree:
        """Closed tree of positions with positive mass."""
        return ClosedTree.from_predicate(lambda p: self.eval(p) > 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Flow):
            return NotImplemented
        common = self.frontier | other.frontier
        a, b = self.refine(common), other.refine(common)
        for p in a.values:
            if a.values[p] != b.values[p]:
                return False
        for p in common.leaves():
            if a.values[p] > 0 and a.tails[p] != b.tails[p]:
                return False
        return True

    def __hash__(self) -> int:
        return hash(self.values.get(ROOT))

    # ------------------------------------------------------------ record
    def record(self) -> dict:
        def fmt(v):
            return format_dyadic(v) if isinstance(v, Fraction) else v

        return {
            "values": {address_of(p): fmt(v) for p, v in sorted(self.values.items())},
            "tails": {address_of(p): t for p, t in sorted(self.tails.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.record(), indent=1, sort_keys=True)


def flow_from_record(rec: Mapping) -> Flow:
    if "values" not in rec or "tails" not in rec:
        raise FlowError("flow record needs 'values' and 'tails'")
    vals = {pos_of_address(a): _mass(v) for a, v in rec["values"].items()}
    tls = {pos_of_address(a): t for a, t in rec["tails"].items()}
    carets = [p for p in vals if p not in tls]
    return Flow(Tree(carets), vals, tls)


def load_flow(path: str) -> Flow:
    with open(path) as fh:
        return flow_from_record(json.load(fh))


def leaf_flow(policy: str) -> Flow:
    return Flow(Tree(), {ROOT: Fraction(1)}, {ROOT: policy})


LEBESGUE = leaf_flow(UNIFORM)
DIRAC_L = leaf_flow(DIRAC_LEFT)
DIRAC_R = leaf_flow(DIRAC_RIGHT)


def two_ends_flow(alpha) -> Flow:
    """Mass ``alpha`` down the leftmost path and ``1 - alpha`` down the rightmost."""
    a = _mass(alpha)
    return Flow(
        Tree([ROOT]),
        {ROOT: Fraction(1), (1, 1): a, (1, 2): 1 - a},
        {(1, 1): DIRAC_LEFT, (1, 2): DIRAC_RIGHT},
    )


HALF_HALF = two_ends_flow(Fraction(1, 2))

NAMED_FLOWS = {"lebesgue": LEBESGUE, "diracL": DIRAC_L, "diracR": DIRAC_R, "half_half": HALF_HALF}


# -------------------------------------------------------- orthant points


def _divergence_depth(a: LongSnake, b: LongSnake, limit: int = 4096) -> int:
    for k in range(limit):
        if a.caret(k) != b.caret(k):
            return k
    raise FlowError("snakes do not diverge")


def orthant_point(phi: Mapping[LongSnake, float], tol: float = 1e-12) -> Flow:
    """Flow sending mass ``phi(s)**2`` down each long snake ``s``."""
    snakes = list(phi)
    if not snakes:
        raise FlowError("empty orthant vector")
    for s in snakes:
        if not s.eventually_constant():
            raise FlowError(f"snake {s} is not eventually constant: outside the flow class")
        if phi[s] <= 0:
            raise FlowError("orthant weights must be positive")
    sq = {s: (phi[s] ** 2 if not isinstance(phi[s], Fraction) else phi[s] ** 2) for s in snakes}
    total = sum(sq.values())
    if abs(float(total) - 1) > tol:
        raise FlowError(f"orthant vector has squared norm {float(total)}, expected 1")
    depth = max(len(s.prefix) for s in snakes) + 1
    for a in range(len(snakes)):
        for b in range(a + 1, len(snakes)):
            depth = max(depth, _divergence_depth(snakes[a], snakes[b]) + 1)
    carets = set()
    for s in snakes:
        carets.update(s.carets(depth))
    frontier = Tree(carets, validate=False)
    vals = {p: 0 * total for p in list(carets) + frontier.leaves()}
    tails = {p: UNIFORM for p in frontier.leaves()}
    for s in snakes:
        for k in range(depth + 1):
            vals[s.caret(k)] += sq[s]
        tails[s.caret(depth)] = DIRAC_LEFT if s.period == "L" else DIRAC_RIGHT
    if isinstance(total, Fraction):
        vals[ROOT] = Fraction(1)
    else:
        vals[ROOT] = 1.0 if abs(vals[ROOT] - 1) <= tol else vals[ROOT]
    return Flow(frontier, vals, tails, tol=max(tol, 1e-12))


def special_point(sigma: LongSnake) -> Flow:
    return orthant_point({sigma: Fraction(1)})


# ---------------------------------------------------------------- angles


def _tail_factor(tv: str, tw: str) -> int:
    if tv == tw:
        return 1
    return 0


def y_value(v: Flow, w: Flow, frontier: Tree) -> float:
    """Sum of sqrt(V(P) W(P)) over the leaves of a frontier."""
    return sum(math.sqrt(float(v.eval(p)) * float(w.eval(p))) for p in frontier.leaves())


def tits_cosine(v: Flow, w: Flow) -> float:
    """Limit of the refined sums, finished in closed form on the tails."""
    common = v.frontier | w.frontier
    a, b = v.refine(common), w.refine(common)
    total = 0.0
    for p in common.leaves():
        x, y = a.values[p], b.values[p]
        if x == 0 or y == 0:
            continue
        total += _tail_factor(a.tails[p], b.tails[p]) * math.sqrt(float(x) * float(y))
    return total


def tits_angle(v: Flow, w: Flow) -> float:
    c = tits_cosine(v, w)
    return math.acos(max(-1.0, min(1.0, c)))


# ----------------------------------------------------------------- action


def _subtree_nodes(frontier: Tree, top) -> tuple[list, list]:
    carets, leaves = [], []
    stack = [top]
    while stack:
        q = stack.pop()
        if q in frontier.carets:
            carets.append(q)
            stack += [left_child(q), right_child(q)]
        else:
            leaves.append(q)
    return carets, leaves


def act_on_flow(g: Diagram, v: Flow) -> Flow:
    """Push a flow forward: (gV)(P) = V(g(P))."""
    g = reduce(g)
    if g.degree != 1:
        raise FlowError("needs a degree-1 element")
    a_tree, b_tree = g.head, g.parts[0]
    rv = v.refine(v.frontier | b_tree)
    carets = set(a_tree.carets)
    vals = {}
    tails = {}
    for a, b in zip(a_tree.leaves(), b_tree.leaves()):
        cs, ls = _subtree_nodes(rv.frontier, b)
        for q in cs:
            np_ = relocate(q, b, a)
            carets.add(np_)
            vals[np_] = rv.values[q]
        for q in ls:
            np_ = relocate(q, b, a)
            vals[np_] = rv.values[q]
            tails[np_] = rv.tails[q]
    for p in sorted(a_tree.carets, key=lambda p: -p[0]):
        vals[p] = vals[left_child(p)] + vals[right_child(p)]
    return Flow(Tree(carets, validate=False), vals, tails)


def fixed_by(g: Diagram, v: Flow) -> bool:
    return act_on_flow(g, v) == v


def fixed_by_generators(v: Flow) -> bool:
    from .diagrams import X0, X1_STANDARD

    return fixed_by(X0, v) and fixed_by(X1_STANDARD, v)


# -------------------------------------------------------------- profiles


def profile_of_flow(v: Flow) -> ClosedTree:
    """Closed tree of carets carrying positive mass."""
    if all(t != UNIFORM or v.values[p] == 0 for p, t in v.tails.items()):
        snakes = []
        for p, t in v.tails.items():
            if v.values[p] > 0:
                word = format(p[1] - 1, "b").zfill(p[0]) if p[0] else ""
                prefix = word.replace("0", "L").replace("1", "R")
                snakes.append(LongSnake(prefix, "L" if t == DIRAC_LEFT else "R"))
        return ClosedTree.union_of(snakes)
    deleted = []
    for p in list(v.frontier.carets) + v.frontier.leaves():
        if v.values[p] == 0 and (p == ROOT or v.values[parent(p)] > 0):
            deleted.append(p)
    if all(t == UNIFORM or v.values[p] == 0 for p, t in v.tails.items()):
        return ClosedTree.full_minus(deleted)
    return v.support_tree()


@dataclass
class ProfileReport:
    ok: bool
    depth: int
    family_size: int
    violations: list

    def record(self) -> dict:
        return {"ok": self.ok, "depth": self.depth, "family_size": self.family_size,
                "violations": [list(map(str, v)) for v in self.violations]}


def profile_check(tau: ClosedTree, depth: int = 12) -> ProfileReport:
    """Check the three profile axioms for the snakes of ``tau`` up to ``depth``.

    The family consists of finite snakes inside ``tau``; a snake is identified
    with its free caret. (i) any finite subfamily has a common tree (the union);
    (ii) each member extends to a larger member; (iii) each member's shorter
    initial snakes are members.
    """
    fam = tau.truncate(depth)
    violations = []
    if fam.carets and (0, 1) not in fam.carets:
        violations.append(("i", "family has no common root"))
    for p in sorted(fam.carets):
        if p[0] + 1 < depth and left_child(p) not in fam.carets and right_child(p) not in fam.carets:
            violations.append(("ii", p))
        if p[0] > 0 and parent(p) not in fam.carets:
            violations.append(("iii", parent(p), p))
    return ProfileReport(not violations, depth, len(fam.carets), violations)


def raw_family_check(members: Iterable, depth: int) -> ProfileReport:
    """Axiom check for an arbitrary set of caret positions (not necessarily closed)."""
    ms = set(map(tuple, members))
    violations = []
    for p in sorted(ms):
        if p[0] + 1 < depth and left_child(p) not in ms and right_child(p) not in ms:
            violations.append(("ii", p))
        if p[0] > 0 and parent(p) not in ms:
            violations.append(("iii", parent(p), p))
    return ProfileReport(not violations, depth, len(ms), violations)


# ------------------------------------------------------------- random flows


def random_full_support_flow(rng, size: int = 6) -> Flow:
    """Random flow with positive mass everywhere (uniform tails)."""
    from .sampling import random_tree

    t = random_tree(size, rng)
    vals = {ROOT: Fraction(1)}
    stack = [ROOT]
    while stack:
        p = stack.pop()
        if p in t.carets:
            share = Fraction(rng.randint(1, 7), 8)
            vals[left_child(p)] = vals[p] * share
            vals[right_child(p)] = vals[p] * (1 - share)
            stack += [left_child(p), right_child(p)]
    return Flow(t, vals, {p: UNIFORM for p in t.leaves()})


def random_flow(rng, size: int = 5) -> Flow:
    """Random flow with random tails and some zero masses."""
    from .sampling import random_tree

    t = random_tree(size, rng)
    vals = {ROOT: Fraction(1)}
    stack = [ROOT]
    while stack:
        p = stack.pop()
        if p in t.carets:
            share = Fraction(rng.randint(0, 4), 4)
            vals[left_child(p)] = vals[p] * share
            vals[right_child(p)] = vals[p] * (1 - share)
            stack += [left_child(p), right_child(p)]
    return Flow(t, vals, {p: rng.choice(POLICIES) for p in t.leaves()})



# ------------------------------------------------------------------- rays

WeightFn = Callable[[tuple], float]


@dataclass
class RayTrace:
    """Corners of a piecewise linear ray in the tree subcomplex.

    ``mothers[n]`` and ``coords[n]`` describe the corner point ``x_n``;
    ``directions[n]`` is the unit direction of the segment leaving it, one
    entry per leaf of ``mothers[n]``.
    """

    mothers: list
    coords: list
    directions: list
    corner_times: list

    @property
    def corner_points(self) -> list:
        return [tree_point(t, c) for t, c in zip(self.mothers, self.coords)]

    def __len__(self) -> int:
        return len(self.corner_times)

    def at(self, t: float):
        """Point of the ray at time ``t`` (within the traced range)."""
        times = self.corner_times
        if t < times[0] - 1e-15 or t > times[-1] + 1e-15:
            raise FlowError(f"time {t} outside the traced range [{times[0]}, {times[-1]}]")
        n = bisect.bisect_right(times, t) - 1
        if n >= len(self.directions):
            return tree_point(self.mothers[-1], self.coords[-1])
        dt = t - times[n]
        cs = [min(c + dt * u, 1.0) for c, u in zip(self.coords[n], self.directions[n])]
        return tree_point(self.mothers[n], cs)

    def is_drawing(self) -> bool:
        """Mothers grow strictly, each new caret sitting on a leaf of the previous mother."""
        for a, b in zip(self.mothers, self.mothers[1:]):
            if not a < b:
                return False
            if not b.carets <= a.carets | set(a.leaves()):
                return False
        return all(x < y for x, y in zip(self.corner_times, self.corner_times[1:]))


def _leaf_directions(t: Tree, weight: WeightFn) -> list:
    u = [math.sqrt(max(float(weight(p)), 0.0)) for p in t.leaves()]
    norm = math.sqrt(sum(x * x for x in u))
    if norm == 0:
        raise FlowError("direction vanishes on every leaf")
    return [x / norm for x in u]


def trace_ray(
    weight: WeightFn,
    steps: int,
    start: tuple | None = None,
    until: float | None = None,
    tie: float = 1e-12,
) -> RayTrace:
    """Follow straight segments through mother cubes with direction cosines ``sqrt(weight)``.

    Stops after ``steps`` corners, or earlier once the time passes ``until``.
    """
    if steps < 1:
        raise FlowError("steps must be at least 1")
    tree, coords = start if start is not None else (Tree(), (0.0,))
    coords = [float(c) for c in coords]
    mothers, cs, dirs, times = [tree], [tuple(coords)], [], [0.0]
    for _ in range(steps):
        if until is not None and times[-1] >= until:
            break
        leaves = tree.leaves()
        u = _leaf_directions(tree, weight)
        s = min((1 - c) / x for c, x in zip(coords, u) if x > 0)
        moved = [c + s * x for c, x in zip(coords, u)]
        hit = [p for p, c, x in zip(leaves, moved, u) if x > 0 and c >= 1 - tie]
        lookup = dict(zip(leaves, moved))
        tree = Tree(set(tree.carets) | set(hit), validate=False)
        coords = [lookup.get(q, 0.0) if q not in hit else 0.0 for q in tree.leaves()]
        dirs.append(tuple(u))
        mothers.append(tree)
        cs.append(tuple(coords))
        times.append(times[-1] + s)
    return RayTrace(mothers, cs, dirs, times)


def ray_from_flow(v: Flow, steps: int) -> RayTrace:
    return trace_ray(v.eval, steps)


def asymptotic_ray(v: Flow, x, steps: int, until: float | None = None) -> RayTrace:
    """Same construction started at a point ``x`` of the tree subcomplex."""
    if not x.in_trees():
        raise FlowError("start point must lie in the tree subcomplex")
    return trace_ray(v.eval, steps, (x.head, x.coords), until)


def asymptotic_gaps(v: Flow, x, times, steps: int = 10**4) -> list:
    """``d(c_V(t), c_{V,x}(t))`` at the given times."""
    times = sorted(times)
    c1 = trace_ray(v.eval, steps, until=times[-1])
    c2 = asymptotic_ray(v, x, steps, until=times[-1])
    return [tree_distance(c1.at(t), c2.at(t)) for t in times]


def extracted_masses(trace: RayTrace) -> dict:
    """Squared direction cosines read off consecutive corner points."""
    out = {}
    for n in range(len(trace) - 1):
        a, b = trace.mothers[n], trace.mothers[n + 1]
        ca = dict(zip(a.leaves(), trace.coords[n]))
        cb = dict(zip(b.leaves(), trace.coords[n + 1]))
        delta = {p: (1.0 if p in b.carets else cb[p]) - ca[p] for p in a.leaves()}
        norm = math.sqrt(sum(d * d for d in delta.values()))
        for p, d in delta.items():
            out.setdefault(p, (d / norm) ** 2)
    return out


def local_geodesic_check(trace: RayTrace, n: int, eps: float) -> float:
    """``|d(c(t+eps), c(t-eps)) - 2 eps|`` at the corner time ``t_n``."""
    if not 0 < n < len(trace) - 1:
        raise FlowError("corner index must be interior to the trace")
    t = trace.corner_times[n]
    if eps >= min(t - trace.corner_times[n - 1], trace.corner_times[n + 1] - t):
        raise FlowError("eps exceeds an adjacent segment length")
    return abs(tree_distance(trace.at(t + eps), trace.at(t - eps)) - 2 * eps)


def perturbed_weight(v: Flow, depth: int, factor: float = 0.6) -> WeightFn:
    """Left-half masses below ``depth`` scaled by ``factor``: a negative control.

    Children no longer add up to their parent across the scaling boundary, so
    the ray bends at the corner where it first meets those leaves.
    """

    def weight(p):
        m = float(v.eval(p))
        if p[0] > depth and p[1] <= 1 << (p[0] - 1):
            return factor * m
        return m

    return weight


def lebesgue_corner_times(n: int) -> list:
    """``0, 1, 1 + sqrt 2, ...``: corner times of the Lebesgue ray."""
    out = [0.0]
    for k in range(n):
        out.append(out[-1] + math.sqrt(2.0**k))
    return out

"""Translation lengths, displacement searches and flats for the action of F."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from dataclasses import dataclass, field
from itertools import combinations

from .bracket import DistanceBracket, distance_bracket
from .complex import act, ball
from .config import BracketConfig, SearchConfig
from .diagrams import (
    Diagram,
    DiagramError,
    compose,
    end_slopes,
    identity,
    invert,
    is_irreducible,
    powers_at,
    reduce,
    support_end_slopes,
    to_pl,
    tree_vertex,
)
from .points import Point, tree_point
from .tree_metric import tree_distance, tree_distance_trees
from .trees import Tree, full_tree, glue, is_snake, right_spine, wings


# ---------------------------------------------------------------- rotations


def _free_leaf_pair(s: Tree) -> int:
    if not is_snake(s):
        raise DiagramError("rotation needs a snake (exactly one free caret)")
    free = s.free_carets()[0]
    leaves = s.leaves()
    return leaves.index((free[0] + 1, 2 * free[1] - 1)) + 1


def rotation(s: Tree) -> Diagram:
    k = _free_leaf_pair(s)
    return Diagram(glue(s, [k]), (glue(s, [k + 1]),))


def rotation_witness(s: Tree) -> Tree:
    k = _free_leaf_pair(s)
    return glue(s, [k, k + 1])


# ------------------------------------------------------ translation lengths


def translation_length_formula(g: Diagram) -> tuple[float, bool]:
    """``(value, exact)``: the end-slope formula, exact for irreducible elements."""
    g = reduce(g)
    if g.is_identity():
        return 0.0, True
    if is_irreducible(g):
        a, b = end_slopes(g)
        return math.hypot(a, b), True
    a, b = support_end_slopes(g)
    return math.hypot(a, b), False


@dataclass
class TranslationBracket:
    lower: float
    upper: float
    formula: float
    formula_exact: bool
    samples: list = field(default_factory=list)  # (n, upper_n, wing_ratio_n)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 1e-12) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def record(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "width": self.width,
            "formula": self.formula,
            "formula_exact": self.formula_exact,
        }


def sample_exponents(n_max: int) -> list[int]:
    ns = []
    n = 1
    while n <= n_max:
        ns.append(n)
        n *= 2
    if ns[-1] != n_max:
        ns.append(n_max)
    return ns


def translation_length_bracket(g: Diagram, n_max: int = 10**4) -> TranslationBracket:
    """Enclosure of ``|g|`` from iterates.

    Upper: for ``g^n = (A_n, B_n)`` the vertex ``B_n`` is moved to ``A_n`` inside
    the tree subcomplex, so ``d(A_n, B_n)/n`` bounds ``|g|`` from above.
    Lower: the end-slope formula, a proven lower bound (for reducible elements
    the support-end version, flagged as not verified exact).
    """
    g = reduce(g)
    formula, exact = translation_length_formula(g)
    if g.is_identity():
        return TranslationBracket(0.0, 0.0, 0.0, True, [])
    samples = []
    upper = math.inf
    for n, gn in sorted(powers_at(g, sample_exponents(n_max)).items()):
        a, b = gn.head, gn.parts[0]
        up = tree_distance_trees(a, b) / n
        upper = min(upper, up)
        ratio = math.hypot(wings(a)[0], wings(b)[1]) / n
        samples.append((n, up, ratio))
    if formula - 1e-12 <= upper < formula:
        upper = formula  # float rounding when the bound is attained
    return TranslationBracket(formula, upper, formula, exact, samples)


# ------------------------------------------------------------ displacement


def displacement(g: Diagram, x: Point, cfg: BracketConfig | None = None) -> DistanceBracket:
    return distance_bracket(act(g, x), x, cfg)


def _displace_vertex(args):
    g, v, bcfg = args
    return displacement(g, Point(v), bcfg)


def min_vertex_displacement(
    g: Diagram, cfg: SearchConfig | None = None, center: Diagram | None = None
) -> tuple[Point, DistanceBracket, dict]:
    """Search a combinatorial ball for the vertex with the smallest displacement upper bound.

    With ``cfg.jobs > 1`` the brackets are computed in a process pool.
    """
    cfg = cfg or SearchConfig()
    g = reduce(g)
    if center is None:
        center = tree_vertex(g.parts[0])
    bcfg = BracketConfig(tol=cfg.tol, budget=cfg.budget, refine=False)
    verts = list(ball(center, cfg.radius, cfg.budget))
    tasks = [(g, v, bcfg) for v in verts]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            brackets = list(pool.map(_displace_vertex, tasks, chunksize=8))
    else:
        brackets = [_displace_vertex(t) for t in tasks]
    best = None
    report = {}
    for v, br in zip(verts, brackets):
        report[v] = br
        if best is None or br.upper < best[1].upper - 1e-15:
            best = (Point(v), br)
    return best[0], best[1], report


# ------------------------------------------------------------------ flats


@dataclass
class FlatRecord:
    n: int
    base: Point
    rotations: list
    displacements: list
    pair_distances: dict
    commute: bool

    @property
    def ok(self) -> bool:
        return (
            all(abs(d - math.sqrt(2)) <= 1e-12 for d in self.displacements)
            and all(abs(d - 2) <= 1e-12 for d in self.pair_distances.values())
            and self.commute
        )


def build_flat(n: int) -> FlatRecord:
    if n < 1:
        raise DiagramError("flat exponent must be at least 1")
    t = full_tree(n)
    m = 1 << (n - 1)
    rots = [Diagram(glue(t, [2 * j - 1]), (glue(t, [2 * j]),)) for j in range(1, m + 1)]
    base = tree_point(glue(t, range(2, 2 * m + 1, 2)))
    moved = [act(f, base) for f in rots]
    disp = [tree_distance(y, base) for y in moved]
    pairs = {(i + 1, j + 1): tree_distance(moved[i], moved[j]) for i, j in combinations(range(m), 2)}
    commute = all(
        to_pl(compose(a, b)) == to_pl(compose(b, a)) for a, b in combinations(rots, 2)
    )
    return FlatRecord(n, base, rots, disp, pairs, commute)


# --------------------------------------------------------------- classify


@dataclass
class IsometryReport:
    element: Diagram
    alpha: int | None
    beta: int | None
    formula_length: float
    formula_exact: bool
    bracket: TranslationBracket | None
    classification: str
    witness: Point | None = None

    def record(self) -> dict:
        return {
            "element": str(self.element),
            "alpha": self.alpha,
            "beta": self.beta,
            "formula_length": self.formula_length,
            "bracket": self.bracket.record() if self.bracket else None,
            "classification": self.classification,
            "witness": str(self.witness) if self.witness is not None else None,
        }


def find_axis_witness(g: Diagram, target: float, radius: int = 2, tol: float = 1e-9) -> Point | None:
    """A vertex near either tree of ``g`` whose displacement is certified to equal ``target``."""
    bcfg = BracketConfig(tol=tol, refine=False)
    for center in (tree_vertex(g.parts[0]), tree_vertex(g.head)):
        for v in ball(center, radius):
            x = Point(v)
            br = displacement(g, x, bcfg)
            if br.upper <= target + tol and br.lower >= target - tol:
                return x
    return None


def classify(g: Diagram, effort: int = 2, n_max: int = 256) -> IsometryReport:
    g = reduce(g)
    if g.is_identity():
        return IsometryReport(g, 0, 0, 0.0, True, None, "Identity")
    formula, exact = translation_length_formula(g)
    alpha, beta = end_slopes(g)
    br = translation_length_bracket(g, n_max) if n_max else None
    if is_irreducible(g) and alpha + beta != 0:
        return IsometryReport(g, alpha, beta, formula, exact, br, "ParabolicProven")
    w = find_axis_witness(g, formula, effort)
    if w is not None:
        return IsometryReport(g, alpha, beta, formula, exact, br, "Hyperbolic", w)
    return IsometryReport(g, alpha, beta, formula, exact, br, "Unknown")


def approach_point(n: int) -> Point:
    """``(R_{n+2} ⊕^2)`` with coordinates (n-1)/n, ..., 1/n on leaves 4 .. n+2."""
    t = glue(right_spine(n + 2), [2])
    coords = [0, 0, 0] + [Fraction(n - k, n) for k in range(1, n)] + [0, 0]
    return tree_point(t, coords)


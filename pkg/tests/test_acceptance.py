"""The twelve acceptance criteria, one test each.

Run directly (``python3 tests/test_acceptance.py``) or under pytest; either way
one PASS/FAIL line per criterion is printed at the end.
"""

import math
import random
import sys
import time
from collections import deque
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cubical_thompson.complex import act, bfs_distance
from cubical_thompson.config import BracketConfig
from cubical_thompson.diagrams import (
    G_PARABOLIC,
    X0,
    X1_STANDARD,
    compose,
    end_slopes,
    invert,
    is_irreducible,
    tree_vertex,
)
from cubical_thompson.flows import (
    DIRAC_L,
    LEBESGUE,
    act_on_flow,
    asymptotic_gaps,
    lebesgue_corner_times,
    fixed_by,
    fixed_by_generators,
    local_geodesic_check,
    orthant_point,
    random_flow,
    random_full_support_flow,
    ray_from_flow,
    special_point,
    tits_angle,
    tits_cosine,
    two_ends_flow,
    y_value,
)
from cubical_thompson.isometry import (
    build_flat,
    displacement,
    rotation,
    rotation_witness,
    translation_length_bracket,
    translation_length_formula,
)
from cubical_thompson.points import tree_point
from cubical_thompson.sampling import random_element, random_point, random_tree
from cubical_thompson.staircase import (
    Hyperplane,
    StaircaseRegion,
    below_brute,
    horizontals,
    is_profile,
    ray_uniqueness_evidence,
    verticals,
)
from cubical_thompson.tree_metric import lantern_distance, lantern_factors
from cubical_thompson.trees import (
    LEFT_INF,
    RIGHT_INF,
    LongSnake,
    Tree,
    enumerate_snakes,
    enumerate_trees,
    glue,
    left_spine,
    right_spine,
)

RESULTS: dict[int, tuple[bool, str]] = {}
SQRT2, SQRT5 = math.sqrt(2), math.sqrt(5)


def _tree_neighbors(t, max_size):
    for p in t.free_carets():
        yield Tree(t.carets - {p}, validate=False)
    if len(t) < max_size:
        for k in range(1, t.n_leaves + 1):
            yield glue(t, [k])


def criterion_1():
    """Every edge changes one caret, so |T Δ S| is a lower bound in any graph;
    a BFS confined to small trees is an upper bound. Equality pins the value.
    The unconfined lazy BFS in the whole complex covers all pairs at distance <= 2."""
    start = time.perf_counter()
    trees = [t for n in range(7) for t in enumerate_trees(n)]
    mismatches = 0
    for src in trees:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in _tree_neighbors(u, 6):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        mismatches += sum(dist[s] != len(src.carets ^ s.carets) for s in trees)
    full = 0
    for a in trees:
        for b in trees:
            d = len(a.carets ^ b.carets)
            if d <= 2:
                full += 1
                mismatches += bfs_distance(tree_vertex(a), tree_vertex(b)) != d
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    return ok, f"{len(trees) ** 2} pairs, {full} also in the full complex, {mismatches} mismatches, {elapsed:.1f}s"


def criterion_2():
    worst = 0.0
    snakes = enumerate_snakes(5)
    for s in snakes:
        g = rotation(s)
        x = tree_point(rotation_witness(s))
        gx, gix = act(g, x), act(invert(g), x)
        fx, fgx, fgix = (lantern_factors(s, p) for p in (x, gx, gix))
        worst = max(worst, abs(lantern_distance(s, fgx, fx) - SQRT2),
                    abs(lantern_distance(s, fgx, fgix) - 2 * SQRT2))
    return worst <= 1e-12, f"{len(snakes)} snakes, max error {worst:.1e}"


def criterion_3():
    start = time.perf_counter()
    formula = translation_length_formula(G_PARABOLIC)[0]
    w = tree_point(glue(right_spine(3), [2]))
    disp = displacement(G_PARABOLIC, w, BracketConfig(tol=1e-3))
    br = translation_length_bracket(G_PARABOLIC, 10**4)
    elapsed = time.perf_counter() - start
    ok = (formula == SQRT5 and disp.contains(math.sqrt(6)) and disp.width <= 1e-3
          and br.contains(SQRT5) and br.width <= 0.01 and elapsed < 300)
    return ok, (f"formula {formula:.12f}, displacement [{disp.lower:.12f}, {disp.upper:.12f}], "
                f"bracket width {br.width:.2e}, {elapsed:.1f}s")


def irreducible_pool(seed=2024):
    rng = random.Random(seed)
    base = [X0, invert(X0), G_PARABOLIC, invert(G_PARABOLIC)]
    pool = list(base)
    while len(pool) < 10:
        h = random_element(rng.randint(1, 3), rng)
        g = rng.choice(base)
        if rng.random() < 0.6:
            c = compose(compose(invert(h), g), h)
        else:
            c = compose(g, rng.choice(base))
        if not c.is_identity() and is_irreducible(c) and c not in pool:
            pool.append(c)
    return pool


def criterion_4():
    widths = []
    ok = True
    for g in irreducible_pool():
        a, b = end_slopes(g)
        br = translation_length_bracket(g, 10**4)
        widths.append(br.width)
        ok &= br.contains(math.hypot(a, b)) and br.width <= 0.02
    return ok, f"10 elements, max width {max(widths):.2e}"


def criterion_5():
    rng = random.Random(5)
    pool = []
    while len(pool) < 30:
        g = random_element(rng.randint(1, 5), rng)
        if not g.is_identity():
            pool.append(g)
    values = [translation_length_formula(g)[0] for g in pool]
    ok = min(values) >= SQRT2 - 1e-12 and translation_length_formula(X0)[0] == SQRT2
    return ok, f"min over pool {min(values):.12f}, x0 gives {translation_length_formula(X0)[0]:.12f}"


def criterion_6():
    rng = random.Random(6)
    margin = math.inf
    for i in range(50):
        x = random_point(1 + i % 4, rng)
        br = displacement(G_PARABOLIC, x, BracketConfig(refine=False))
        margin = min(margin, br.lower - SQRT5)
    return margin > 1e-6, f"50 points, smallest lower-bound margin {margin:.4f}"


def criterion_7():
    records = [build_flat(n) for n in (1, 2, 3)]
    ok = all(r.ok for r in records)
    dims = ", ".join(f"n={r.n}: {len(r.rotations)} rotations" for r in records)
    return ok, dims


def criterion_8():
    trace = ray_from_flow(LEBESGUE, 12)
    residual = max(local_geodesic_check(trace, k, 1e-3) for k in range(1, 11))
    timing = max(abs(a - b) for a, b in zip(trace.corner_times, lebesgue_corner_times(11)))
    return residual <= 1e-12 and timing <= 1e-12, f"max residual {residual:.1e}, max time error {timing:.1e}"


def criterion_9():
    snakes = [LEFT_INF, RIGHT_INF, LongSnake("LR", "L"), LongSnake("RL", "R"), LongSnake("L", "R"),
              LongSnake("RRL", "L")]
    special = all(tits_angle(special_point(a), special_point(b)) == math.pi / 2
                  for a in snakes for b in snakes if a != b)
    rng = random.Random(9)
    worst = 0.0
    for _ in range(20):
        phi = _unit({s: rng.random() + 0.05 for s in rng.sample(snakes, 3)})
        psi = _unit({s: rng.random() + 0.05 for s in rng.sample(snakes, 3)})
        inner = sum(phi[s] * psi.get(s, 0.0) for s in phi)
        worst = max(worst, abs(tits_angle(orthant_point(phi), orthant_point(psi)) - math.acos(min(1.0, inner))))
    monotone = 0
    for _ in range(100):
        v, w = random_flow(rng), random_flow(rng)
        coarse = v.frontier | w.frontier | random_tree(rng.randint(0, 4), rng)
        fine = coarse | random_tree(rng.randint(1, 6), rng)
        monotone += y_value(v, w, fine) <= y_value(v, w, coarse) + 1e-12 and tits_cosine(v, w) <= y_value(v, w, fine) + 1e-12
    ok = special and worst <= 1e-9 and monotone == 100
    return ok, f"special points orthogonal: {special}, orthant error {worst:.1e}, monotone {monotone}/100"


def _unit(d):
    n = math.sqrt(sum(x * x for x in d.values()))
    return {k: x / n for k, x in d.items()}


def criterion_10():
    x = tree_point(left_spine(5) | right_spine(3))
    gaps_a = asymptotic_gaps(DIRAC_L, x, [5, 5.25, 6, 7.5, 10, 20, 40])
    err_a = max(abs(g - math.sqrt(29)) for g in gaps_a)
    base = ray_from_flow(LEBESGUE, 12)
    gaps_b = asymptotic_gaps(LEBESGUE, tree_point(left_spine(2)), base.corner_times[1:])
    err_b = max(abs(g - math.sqrt(2 + SQRT2)) for g in gaps_b)
    return max(err_a, err_b) <= 1e-9, f"case a error {err_a:.1e}, case b error {err_b:.1e} over {len(gaps_b)} corners"


def criterion_11():
    fixed = all(fixed_by_generators(two_ends_flow(a)) for a in (0, Fraction(1, 4), Fraction(1, 2), 1))
    moved = act_on_flow(invert(X0), LEBESGUE)
    witness = moved.eval((1, 1)) == Fraction(1, 4) and not fixed_by(X0, LEBESGUE)
    rng = random.Random(11)
    failing = sum(not fixed_by_generators(random_full_support_flow(rng)) for _ in range(10))
    ok = fixed and witness and failing == 10
    return ok, f"two-ends flows fixed: {fixed}, Lebesgue witness {moved.eval((1, 1))}, {failing}/10 random flows moved"


def criterion_12():
    region = StaircaseRegion(64)
    vs, hs = verticals(region), horizontals(region)
    v_ok = is_profile(region, vs)
    h_bad = is_profile(region, hs)
    u_ok = is_profile(region, vs + hs)
    witness_ok = (not h_bad.ok and h_bad.axiom == "iii" and h_bad.witness[0].kind == "V"
                  and h_bad.witness[1].kind == "H" and below_brute(region, *h_bad.witness))
    ev = ray_uniqueness_evidence(region, 6)
    ok = v_ok.ok and witness_ok and u_ok.ok and ev.axis_nested and not any(ev.corner_pairs_extend.values())
    w = tuple(map(str, h_bad.witness)) if h_bad.witness else None
    return ok, f"V passes, H fails axiom {h_bad.axiom} with {w}, union passes: {u_ok.ok}, geodesic evidence ok: {ev.ok}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 13)}
TITLES = {
    1: "median formula vs lazy BFS",
    2: "rotation constants",
    3: "headline numbers for the parabolic example",
    4: "formula vs power bracket",
    5: "lower bound root two",
    6: "strict parabolic displacement",
    7: "flats",
    8: "Lebesgue ray corners",
    9: "Tits angles",
    10: "asymptotic rays",
    11: "fixed arc",
    12: "staircase complex",
}


def evaluate(n):
    try:
        ok, detail = CRITERIA[n]()
    except Exception as exc:  # a crash is a failure, reported with its message
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    RESULTS[n] = (ok, detail)
    return ok, detail


def summary_lines():
    return [f"{'PASS' if ok else 'FAIL'} criterion {n:2d} ({TITLES[n]}): {detail}"
            for n, (ok, detail) in sorted(RESULTS.items())]


@pytest.mark.parametrize("n", range(1, 13))
def test_criterion(n):
    ok, detail = evaluate(n)
    assert ok, detail


if __name__ == "__main__":
    for n in CRITERIA:
        evaluate(n)
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)

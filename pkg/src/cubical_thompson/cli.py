"""Command line entry point ``cat0``."""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field

import jsonschema

from . import flows as fl
from . import staircase as st
from .bracket import distance_bracket, distance_to_trees
from .complex import BudgetExceeded, median_distance
from .config import BracketConfig, SearchConfig
from .diagrams import (
    compose,
    cut,
    element,
    end_slopes,
    format_diagram,
    invert,
    is_irreducible,
    reduce,
    to_pl,
)
from .isometry import (
    build_flat,
    classify,
    displacement,
    min_vertex_displacement,
    translation_length_bracket,
    translation_length_formula,
)
from .points import Point, format_point, parse_point, tree_point
from .schemas import schema_for
from .tree_metric import median as tree_median
from .tree_metric import project_to_snake, tree_distance
from .trees import ClosedTree, ParseError, parse_snake, parse_tree

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


def fmt(x: float) -> str:
    return f"{x:.12f}"


@dataclass
class CommandResult:
    status: str
    command: str
    payload: dict = field(default_factory=dict)
    human_text: str = ""
    position: int | None = None

    def record(self) -> dict:
        if self.status == "ok":
            return {"status": "ok", "command": self.command, "result": self.payload}
        return {"status": self.status, "command": self.command, "error": self.human_text,
                "position": self.position}

    @property
    def exit_code(self) -> int:
        if self.status == "ok":
            return EXIT_OK
        if self.status == "budget_exceeded":
            return EXIT_BUDGET
        return EXIT_PARSE if self.position is not None else EXIT_DOMAIN


# ------------------------------------------------------------ argument types


def _point(text: str) -> Point:
    text = text.strip()
    if text.startswith("["):
        return parse_point(text)
    if text in ("origin", "*"):
        return tree_point(parse_tree("*"))
    try:
        return Point(element(text))
    except ParseError:
        return tree_point(parse_tree(text))


def _flow(text: str) -> fl.Flow:
    name = text[:-5] if text.endswith(".flow") else text
    if os.path.exists(text):
        return fl.load_flow(text)
    if name in fl.NAMED_FLOWS:
        return fl.NAMED_FLOWS[name]
    if name.startswith("special:"):
        return fl.special_point(parse_snake(name[len("special:"):]))
    if name.startswith("ends:"):
        return fl.two_ends_flow(name[len("ends:"):])
    raise fl.FlowError(f"unknown flow {text!r}: use a file or one of {sorted(fl.NAMED_FLOWS)}")


def _indices(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError("indices must be comma-separated integers", 0) from None


# ----------------------------------------------------------------- commands


def cmd_reduce(a):
    d = reduce(element(a.diagram))
    return {"diagram": format_diagram(d)}, format_diagram(d)


def cmd_compose(a):
    d = compose(element(a.first), element(a.second))
    return {"diagram": format_diagram(d)}, format_diagram(d)


def cmd_invert(a):
    d = reduce(invert(element(a.element)))
    return {"diagram": format_diagram(d)}, format_diagram(d)


def cmd_cut(a):
    d = cut(element(a.diagram), _indices(a.indices))
    if not a.raw:
        d = reduce(d)
    return {"diagram": format_diagram(d)}, format_diagram(d)


def cmd_pl(a):
    g = reduce(element(a.element))
    m = to_pl(g)
    slopes = list(end_slopes(g)) if g.degree == 1 else []
    irr = g.degree == 1 and is_irreducible(g)
    text = m.text()
    if slopes:
        text += f"\nend slopes (log2): {slopes[0]} {slopes[1]}; irreducible: {irr}"
    return {"map": m.text(), "end_slopes": slopes, "irreducible": irr}, text


def cmd_distance(a):
    cfg = BracketConfig(tol=a.tol if a.tol is not None else 1e-3, budget=a.budget)
    br = distance_bracket(_point(a.x), _point(a.y), cfg)
    text = f"[{fmt(br.lower)}, {fmt(br.upper)}]" + ("" if br.converged else " (not converged)")
    if br.exact or br.lower == br.upper:
        text = fmt(br.lower)
    return {"bracket": br.record(), "exact": br.exact}, text


def cmd_median(a):
    if a.trees:
        t, s, u = (parse_tree(x) for x in a.trees)
        m = tree_median(t, s, u)
        return {"tree": str(m)}, str(m)
    d = median_distance(element(a.u), element(a.v))
    return {"distance": d}, str(d)


def cmd_project(a):
    x = _point(a.x)
    if a.snake:
        p = project_to_snake(x, parse_snake(a.snake))
        dist = tree_distance(x, p)
    else:
        p, dist = distance_to_trees(x)
    return {"point": format_point(p), "distance": dist}, f"{format_point(p)}\ndistance {fmt(dist)}"


def cmd_translen(a):
    g = element(a.element)
    value, exact = translation_length_formula(g)
    out = {"formula": value, "formula_exact": exact}
    lines = []
    if a.formula or not a.bracket:
        lines.append(fmt(value) + ("" if exact else " (lower bound; element is reducible)"))
    if a.bracket:
        br = translation_length_bracket(g, a.n_max)
        out["bracket"] = br.record()
        lines.append(f"[{fmt(br.lower)}, {fmt(br.upper)}] width {fmt(br.width)}")
    return out, "\n".join(lines)


def cmd_displace(a):
    cfg = BracketConfig(tol=a.tol if a.tol is not None else 1e-3, budget=a.budget)
    br = displacement(element(a.element), _point(a.point), cfg)
    text = fmt(br.lower) if br.exact else f"[{fmt(br.lower)}, {fmt(br.upper)}]"
    return {"bracket": br.record()}, text


def cmd_minvertex(a):
    cfg = SearchConfig(radius=a.radius, tol=a.tol if a.tol is not None else 1e-3, budget=a.budget, jobs=a.jobs)
    x, br, report = min_vertex_displacement(element(a.element), cfg)
    text = f"{format_point(x)}\n[{fmt(br.lower)}, {fmt(br.upper)}] over {len(report)} vertices"
    return {"vertex": format_point(x), "bracket": br.record(), "searched": len(report)}, text


def cmd_classify(a):
    rep = classify(element(a.element), effort=a.radius, n_max=a.n_max)
    rec = rep.record()
    return rec, f"{rep.classification} |g| = {fmt(rep.formula_length)}"


def cmd_flat(a):
    f = build_flat(a.n)
    pairs = {f"{i},{j}": d for (i, j), d in f.pair_distances.items()}
    out = {"ok": f.ok, "displacements": f.displacements, "pair_distances": pairs, "commute": f.commute}
    text = (
        f"base {format_point(f.base)}\n"
        + "displacements " + " ".join(fmt(d) for d in f.displacements) + "\n"
        + "pair distances " + " ".join(fmt(d) for d in pairs.values()) + "\n"
        + f"commute {f.commute}; ok {f.ok}"
    )
    return out, text


def cmd_ray(a):
    v = _flow(a.flow)
    if a.start:
        tr = fl.asymptotic_ray(v, _point(a.start), a.steps)
    else:
        tr = fl.ray_from_flow(v, a.steps)
    corners = [str(m) for m in tr.mothers]
    out = {"corner_times": tr.corner_times, "corners": corners}
    lines = [f"{n:3d} {fmt(t)} {c}" for n, (t, c) in enumerate(zip(tr.corner_times, corners))]
    if a.check is not None:
        res = [fl.local_geodesic_check(tr, n, a.check) for n in range(1, len(tr) - 1)]
        out["residuals"] = res
        lines.append("max local residual " + (f"{max(res):.3e}" if res else "n/a"))
    return out, "\n".join(lines)


def cmd_angle(a):
    v, w = _flow(a.a), _flow(a.b)
    c = fl.tits_cosine(v, w)
    ang = fl.tits_angle(v, w)
    return {"angle": ang, "cosine": c}, fmt(ang)


def cmd_act_flow(a):
    g, v = element(a.element), _flow(a.flow)
    gv = fl.act_on_flow(g, v)
    fixed = gv == v
    return {"flow": gv.record(), "fixed": fixed}, gv.dumps() + f"\nfixed: {fixed}"


def cmd_fixed(a):
    ok = fl.fixed_by_generators(_flow(a.flow))
    return {"fixed": ok}, str(ok)


def cmd_eval(a):
    from .dyadic import format_dyadic
    from .trees import pos_of_address

    v = _flow(a.flow).eval(pos_of_address(a.address))
    s = format_dyadic(v) if not isinstance(v, float) else fmt(v)
    return {"value": s}, s


def cmd_profile(a):
    if a.flow:
        tau = fl.profile_of_flow(_flow(a.flow))
    else:
        tau = ClosedTree.union_of([parse_snake(s) for s in a.snakes.split(",")])
    rep = fl.profile_check(tau, a.depth)
    text = f"profile axioms {'hold' if rep.ok else 'fail'} to depth {rep.depth} ({rep.family_size} snakes)"
    for v in rep.violations:
        text += f"\n  axiom {v[0]}: {v[1:]}"
    return rep.record(), text


def cmd_appendix(a):
    region = st.StaircaseRegion(a.x_max)
    if a.task == "profiles":
        vs, hs = st.verticals(region), st.horizontals(region)
        out = {name: st.is_profile(region, fam).record()
               for name, fam in (("verticals", vs), ("horizontals", hs), ("union", vs + hs))}
        lines = []
        for name, r in out.items():
            w = f" witness {tuple(r['witness'])}" if r["witness"] else ""
            lines.append(f"{name}: {'profile' if r['ok'] else 'not a profile'}"
                         + (f" (axiom {r['axiom']} fails){w}" if not r["ok"] else ""))
        return out, "\n".join(lines)
    if a.task == "geodesic":
        p = tuple(float(c) if "." in c else int(c) for c in a.p.split(","))
        q = tuple(float(c) if "." in c else int(c) for c in a.q.split(","))
        length, path = st.polygon_geodesic(region, p, q)
        poly = [[str(c) for c in v] for v in path]
        return {"length": length, "path": poly}, fmt(length) + "\n" + " -> ".join(f"({x},{y})" for x, y in poly)
    ev = st.ray_uniqueness_evidence(region, a.count)
    rec = ev.record()
    text = (f"axis geodesics nested: {ev.axis_nested}\n"
            f"corner geodesics extending one another: {sum(ev.corner_pairs_extend.values())}"
            f" of {len(ev.corner_pairs_extend)} pairs\n"
            f"all corner geodesics touch the staircase: {all(ev.corner_touch.values())}")
    return rec, text


def cmd_schema(a):
    s = schema_for(a.target)
    return s, json.dumps(s, indent=1)


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="bracket tolerance (default 1e-3)")
    common.add_argument("--budget", type=int, default=10**6, help="search budget in vertices")
    common.add_argument("--n-max", dest="n_max", type=int, default=10**4, help="largest power for translation brackets")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="cat0", description="Thompson group F acting on its CAT(0) cube complex.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, **kw):
        sp = sub.add_parser(name, parents=[common], help=help_, **kw)
        sp.set_defaults(func=func, command_name=name)
        return sp

    sp = add("reduce", cmd_reduce, "reduce a diagram")
    sp.add_argument("diagram")
    sp = add("compose", cmd_compose, "product FIRST * SECOND (apply FIRST, then SECOND)")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("invert", cmd_invert, "inverse of a degree-1 element")
    sp.add_argument("element")
    sp = add("cut", cmd_cut, "cut the listed right trees at their roots")
    sp.add_argument("diagram")
    sp.add_argument("--indices", required=True, help="1-based, comma separated")
    sp.add_argument("--raw", action="store_true", help="skip the final reduction")
    sp = add("pl", cmd_pl, "piecewise linear map of a diagram")
    sp.add_argument("element")
    sp = add("distance", cmd_distance, "CAT(0) distance bracket between two points")
    sp.add_argument("x")
    sp.add_argument("y")
    sp = add("median", cmd_median, "combinatorial distance between vertices, or the median of three trees")
    sp.add_argument("u", nargs="?")
    sp.add_argument("v", nargs="?")
    sp.add_argument("--trees", nargs=3, metavar="TREE")
    sp = add("project", cmd_project, "nearest point in the tree subcomplex or on a snake ray")
    sp.add_argument("x")
    sp.add_argument("--snake")
    sp = add("translen", cmd_translen, "translation length: end-slope formula and/or power bracket")
    sp.add_argument("--element", required=True)
    sp.add_argument("--formula", action="store_true")
    sp.add_argument("--bracket", action="store_true")
    sp = add("displace", cmd_displace, "displacement bracket d(gx, x)")
    sp.add_argument("--element", required=True)
    sp.add_argument("--point", required=True)
    sp = add("minvertex", cmd_minvertex, "vertex with least displacement in a ball")
    sp.add_argument("--element", required=True)
    sp.add_argument("--radius", type=int, default=2)
    sp = add("classify", cmd_classify, "isometry type of an element")
    sp.add_argument("--element", required=True)
    sp.add_argument("--radius", type=int, default=2)
    sp = add("flat", cmd_flat, "flat spanned by commuting rotations")
    sp.add_argument("--n", type=int, required=True)

    def flow_commands(container, prefix=""):
        def fadd(name, func, help_):
            sp = container.add_parser(name, parents=[common], help=help_)
            sp.set_defaults(func=func, command_name=name)
            return sp

        sp = fadd("ray", cmd_ray, "geodesic ray of a flow")
        sp.add_argument("--flow", required=True)
        sp.add_argument("--steps", type=int, default=8)
        sp.add_argument("--start", help="start point in the tree subcomplex")
        sp.add_argument("--check", type=float, help="local geodesic residuals with this epsilon")
        sp = fadd("angle", cmd_angle, "Tits angle between two flows")
        sp.add_argument("--a", required=True)
        sp.add_argument("--b", required=True)
        sp = fadd("act-flow", cmd_act_flow, "push a flow forward by an element")
        sp.add_argument("--element", required=True)
        sp.add_argument("--flow", required=True)
        sp = fadd("fixed", cmd_fixed, "is the flow fixed by both generators")
        sp.add_argument("--flow", required=True)
        sp = fadd("eval", cmd_eval, "mass of a dyadic interval given by its binary address")
        sp.add_argument("--flow", required=True)
        sp.add_argument("--address", default="")
        sp = fadd("profile", cmd_profile, "profile axioms for a flow or a union of long snakes")
        sp.add_argument("--flow")
        sp.add_argument("--snakes", default="L*,R*")
        sp.add_argument("--depth", type=int, default=12)

    flow_commands(sub)
    fp = sub.add_parser("flow", parents=[common], help="flow commands (same as the top-level ones)")
    flow_commands(fp.add_subparsers(dest="flow_command", required=True))

    sp = add("appendix", cmd_appendix, "staircase complex: profiles, geodesics, ray evidence")
    sp.add_argument("task", choices=["profiles", "geodesic", "evidence"])
    sp.add_argument("--x-max", dest="x_max", type=int, default=64)
    sp.add_argument("--p", default="0,0")
    sp.add_argument("--q", default="4,2")
    sp.add_argument("--count", type=int, default=6)
    sp = add("schema", cmd_schema, "print the JSON schema of a command's output")
    sp.add_argument("target")
    return p


def run(argv: list[str]) -> CommandResult:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    name = args.command_name
    if name == "median" and not args.trees and not (args.u and args.v):
        return CommandResult("error", name, human_text="median needs two vertices or --trees", position=0)
    try:
        payload, text = args.func(args)
    except ParseError as exc:
        return CommandResult("error", name, human_text=str(exc), position=max(exc.position, 0))
    except BudgetExceeded as exc:
        return CommandResult("budget_exceeded", name, human_text=str(exc))
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        return CommandResult("error", name, human_text=str(exc))
    payload = json.loads(json.dumps(payload, default=_jsonable))
    return CommandResult("ok", name, payload, text)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return str(x)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    res = run(argv)
    as_json = "--json" in argv
    if as_json:
        rec = res.record()
        if res.status == "ok" and res.command != "schema":
            jsonschema.validate(rec, schema_for(res.command))
        print(json.dumps(rec, indent=1, default=_jsonable))
    elif res.status == "ok":
        print(res.human_text)
    else:
        print(f"error: {res.human_text}", file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())

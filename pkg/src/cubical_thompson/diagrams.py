"""Tree-list diagrams: reduction, composition, cutting/gluing and the PL view."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dyadic import DyadicError, PLMap, log2_exact
from .trees import (
    CARET,
    EMPTY,
    ROOT,
    ParseError,
    Tree,
    TreeError,
    from_leaves,
    glue,
    interval_of,
    join,
    left_child,
    left_spine,
    parse_tree,
    relocate,
    right_child,
    right_spine,
    wings,
)


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Diagram:
    head: Tree
    parts: tuple

    def __init__(self, head: Tree, parts: Iterable[Tree] | Tree):
        if isinstance(parts, Tree):
            parts = (parts,)
        parts = tuple(parts)
        if not parts:
            raise DiagramError("a diagram needs at least one right-hand tree")
        if head.n_leaves != sum(p.n_leaves for p in parts):
            raise DiagramError(
                f"leaf counts differ: head has {head.n_leaves}, parts have "
                f"{sum(p.n_leaves for p in parts)}"
            )
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "parts", parts)

    @property
    def degree(self) -> int:
        return len(self.parts)

    def is_identity(self) -> bool:
        r = reduce(self)
        return r.degree == 1 and r.head.is_empty() and r.parts[0].is_empty()

    def is_reduced(self) -> bool:
        return reduce(self) == self

    def in_trees(self) -> bool:
        """True when every right-hand tree is empty (a vertex of the tree subcomplex)."""
        return all(p.is_empty() for p in self.parts)

    def __str__(self) -> str:
        return format_diagram(self)

    def __repr__(self) -> str:
        if len(self.head) <= 40:
            return f"Diagram({format_diagram(self)!r})"
        return f"Diagram(<{len(self.head)} head carets, degree {self.degree}>)"


def identity() -> Diagram:
    return Diagram(EMPTY, (EMPTY,))


def tree_vertex(t: Tree) -> Diagram:
    """The vertex ``(T; *, ..., *)`` of the tree subcomplex."""
    return Diagram(t, (EMPTY,) * t.n_leaves)


def pair(t: Tree, s: Tree) -> Diagram:
    return Diagram(t, (s,))


# ------------------------------------------------------------------ reduce


def _slots(d: Diagram):
    heads = d.head.leaves()
    rights = [(j, p) for j, part in enumerate(d.parts) for p in part.leaves()]
    return heads, rights


def _rebuild(heads, rights, degree: int) -> Diagram:
    by_part: list[list] = [[] for _ in range(degree)]
    for j, p in rights:
        by_part[j].append(p)
    return Diagram(from_leaves(heads), [from_leaves(ls) for ls in by_part])


def reduce(d: Diagram) -> Diagram:
    """Cancel common carets until none remain (linear-time worklist)."""
    heads, rights = _slots(d)
    n = len(heads)
    if n == 1:
        return d
    nxt = list(range(1, n + 1))
    prv = list(range(-1, n - 1))
    alive = [True] * n
    stack = list(range(n - 2, -1, -1))
    changed = False
    while stack:
        s = stack.pop()
        if not alive[s]:
            continue
        t = nxt[s]
        if t >= n:
            continue
        h1, h2 = heads[s], heads[t]
        if h1[0] != h2[0] or not h1[1] & 1 or h2[1] != h1[1] + 1:
            continue
        (j1, r1), (j2, r2) = rights[s], rights[t]
        if j1 != j2 or r1[0] != r2[0] or not r1[1] & 1 or r2[1] != r1[1] + 1:
            continue
        changed = True
        heads[s] = (h1[0] - 1, (h1[1] + 1) >> 1)
        rights[s] = (j1, (r1[0] - 1, (r1[1] + 1) >> 1))
        alive[t] = False
        nxt[s] = nxt[t]
        if nxt[t] < n:
            prv[nxt[t]] = s
        stack.append(s)
        if prv[s] >= 0:
            stack.append(prv[s])
    if not changed:
        return d
    idx = [s for s in range(n) if alive[s]]
    return _rebuild([heads[s] for s in idx], [rights[s] for s in idx], d.degree)


# ----------------------------------------------------------------- compose


def _grow(src_leaves: Sequence, union: frozenset | set, targets: Sequence, out: list[set]):
    """Copy the carets of ``union`` hanging below each source leaf onto its target."""
    for a, (j, b) in zip(src_leaves, targets):
        if a not in union:
            continue
        stack = [a]
        dest = out[j]
        while stack:
            c = stack.pop()
            dest.add(relocate(c, a, b))
            for ch in (left_child(c), right_child(c)):
                if ch in union:
                    stack.append(ch)


def compose(f: Diagram, g: Diagram, *, reduced: bool = True) -> Diagram:
    """Diagram of ``g ∘ f`` for ``f`` of degree 1 (pad the middle trees to their union)."""
    if f.degree != 1:
        raise DiagramError("first argument must have degree 1")
    s = f.parts[0]
    h = g.head
    union = s.carets | h.carets
    # f side: S-leaves -> T-leaves
    t_new = [set(f.head.carets)]
    _grow(s.leaves(), union - s.carets, [(0, b) for b in f.head.leaves()], t_new)
    parts_new = [set(p.carets) for p in g.parts]
    rights = [(j, p) for j, part in enumerate(g.parts) for p in part.leaves()]
    _grow(h.leaves(), union - h.carets, rights, parts_new)
    out = Diagram(Tree(t_new[0], validate=False), [Tree(c, validate=False) for c in parts_new])
    return reduce(out) if reduced else out


def multiply(*gs: Diagram) -> Diagram:
    """Product in diagram order: ``multiply(a, b)`` pads then stacks ``a`` above ``b``."""
    out = gs[0]
    for g in gs[1:]:
        out = compose(out, g)
    return out


def invert(f: Diagram) -> Diagram:
    if f.degree != 1:
        raise DiagramError("only degree-1 diagrams are invertible")
    return Diagram(f.parts[0], (f.head,))


def power(g: Diagram, n: int) -> Diagram:
    if g.degree != 1:
        raise DiagramError("power needs a degree-1 diagram")
    if n < 0:
        return power(invert(g), -n)
    result = identity()
    base = reduce(g)
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def powers_at(g: Diagram, ns: Iterable[int]) -> dict[int, Diagram]:
    """Reduced powers at each requested exponent, sharing the squaring chain."""
    wanted = sorted(set(ns))
    if not wanted:
        return {}
    squares = [reduce(g)]
    while (1 << len(squares)) <= wanted[-1]:
        squares.append(compose(squares[-1], squares[-1]))
    out = {}
    for n in wanted:
        acc = identity()
        b = 0
        m = n
        while m:
            if m & 1:
                acc = compose(acc, squares[b])
            m >>= 1
            b += 1
        out[n] = acc
    return out


def power_unreduced(g: Diagram, n: int) -> Diagram:
    """``g^n`` by stacking copies without cancelling carets."""
    result = identity()
    for _ in range(n):
        result = compose(result, g, reduced=False)
    return result


# ------------------------------------------------------- cutting and gluing


def cut_lists(head: Tree, parts: Sequence[Tree], cut: Iterable[int]) -> tuple[Tree, list[Tree]]:
    """The cutting move on raw lists (no leaf-balance check)."""
    cut = sorted(set(cut))
    for j in cut:
        if not 1 <= j <= len(parts):
            raise DiagramError(f"cut index {j} out of range 1..{len(parts)}")
    head_leaves = head.leaves()
    offsets = []
    acc = 0
    for p in parts:
        offsets.append(acc)
        acc += p.n_leaves
    new_parts: list[Tree] = []
    grow = []
    for j, p in enumerate(parts, start=1):
        if j not in cut:
            new_parts.append(p)
        elif p.is_empty():
            new_parts.extend((EMPTY, EMPTY))
            grow.append(offsets[j - 1] + 1)
        else:
            new_parts.extend(p.split())
    if grow:
        if max(grow) > len(head_leaves):
            raise DiagramError("head has too few leaves for the requested cut")
        head = glue(head, grow)
    return head, new_parts


def cut(d: Diagram, indices: Iterable[int]) -> Diagram:
    head, parts = cut_lists(d.head, d.parts, indices)
    return Diagram(head, parts)


def glue_parts(d: Diagram, k: int) -> Diagram:
    """Merge right-hand trees ``k`` and ``k+1`` under a new caret."""
    if not 1 <= k < d.degree:
        raise DiagramError(f"glue index {k} out of range 1..{d.degree - 1}")
    ps = list(d.parts)
    merged = join(ps[k - 1], ps[k])
    return Diagram(d.head, ps[: k - 1] + [merged] + ps[k + 1 :])


# ---------------------------------------------------------------- PL view


def to_pl(d: Diagram) -> PLMap:
    heads, rights = _slots(d)
    xs = [Fraction(0)] + [interval_of(p)[1] for p in heads]
    ys = [Fraction(0)] + [j + interval_of(p)[1] for j, p in rights]
    return PLMap(xs, ys)


def end_slopes(d: Diagram) -> tuple[int, int]:
    """Base-2 logs of the slopes at 0 and at the right end."""
    lw_h, rw_h = wings(d.head)
    return lw_h - wings(d.parts[0])[0], rw_h - wings(d.parts[-1])[1]


def support_end_slopes(d: Diagram) -> tuple[int, int] | None:
    """Log-slopes at the left and right ends of the support; None for the identity."""
    if d.degree != 1:
        raise DiagramError("needs degree 1")
    segs = list(to_pl(d).segments())
    moving = [s for s in segs if not (s[2] == 1 and s[3] == 0)]
    if not moving:
        return None
    return log2_exact(moving[0][2]), log2_exact(moving[-1][2])


def diagram_from_pl(m: PLMap) -> Diagram:
    """Split standard intervals until each maps linearly onto a standard interval."""
    m.validate_thompson_like()
    if m.domain_end != 1:
        raise DyadicError("domain must be [0,1]")
    n = m.range_end
    if n.denominator != 1:
        raise DyadicError("range end must be an integer")
    n = int(n)
    bps = set(m.breakpoints)
    heads = []
    rights = []
    stack = [ROOT]
    while stack:
        p = stack.pop()
        a, b = interval_of(p)
        ok = not any(a < x < b for x in bps)
        if ok:
            ya, yb = m(a), m(b)
            length = yb - ya
            j = int(ya)  # part 0-based
            ok = False
            if length.numerator == 1 and yb <= j + 1:
                try:
                    k = log2_exact(1 / length)
                except DyadicError:
                    k = -1
                if k >= 0:
                    q = (ya - j) / length
                    if q.denominator == 1:
                        ok = True
                        heads.append(p)
                        rights.append((j, (k, int(q) + 1)))
        if not ok:
            if p[0] > 4096:
                raise DyadicError("interval splitting did not terminate")
            stack.append(right_child(p))
            stack.append(left_child(p))
    return _rebuild(heads, rights, n)


def is_irreducible(f: Diagram) -> bool:
    """True iff the map has no fixed point strictly between 0 and 1."""
    if f.degree != 1:
        raise DiagramError("needs degree 1")
    for x0, x1, a, c in to_pl(f).segments():
        if a == 1:
            if c == 0:
                return False
            continue
        x = c / (1 - a)
        if x0 <= x <= x1 and 0 < x < 1:
            return False
    return True


def norms(d: Diagram) -> tuple[int, int, int]:
    if not d.is_reduced():
        raise DiagramError("norms need a reduced diagram")
    left = len(d.head)
    right = sum(len(p) for p in d.parts)
    return left + right, left, right


def caret_count_holds(d: Diagram) -> bool:
    """|head| = (n-1) + sum |parts| for n parts."""
    return len(d.head) == d.degree - 1 + sum(len(p) for p in d.parts)


# ------------------------------------------------------------------- text


def parse_diagram(text: str) -> Diagram:
    s = text
    lb = s.find("[")
    rb = s.rfind("]")
    if lb < 0 or rb < lb:
        raise ParseError("diagram must be enclosed in [ ]", max(lb, 0))
    if s[:lb].strip() or s[rb + 1 :].strip():
        raise ParseError("unexpected text outside [ ]", 0 if s[:lb].strip() else rb + 1)
    body = s[lb + 1 : rb]
    bar = body.find("|")
    if bar < 0:
        raise ParseError("missing '|' between head and parts", lb + 1)
    chunks = [(lb + 1, body[:bar])]
    pos = lb + 1 + bar + 1
    for piece in body[bar + 1 :].split(","):
        chunks.append((pos, piece))
        pos += len(piece) + 1
    trees = []
    for off, piece in chunks:
        try:
            trees.append(parse_tree(piece))
        except ParseError as exc:
            raise ParseError(str(exc).split(" at position")[0], off + max(exc.position, 0)) from None
    try:
        return Diagram(trees[0], trees[1:])
    except DiagramError as exc:
        raise ParseError(str(exc), lb) from None


def format_diagram(d: Diagram) -> str:
    return f"[ {d.head} | " + " , ".join(str(p) for p in d.parts) + " ]"


# --------------------------------------------------------- named elements

X0 = Diagram(left_spine(2), (right_spine(2),))
X1_EXAMPLE = Diagram(left_spine(3), (glue(left_spine(2), [2]),))
X1_STANDARD = Diagram(glue(right_spine(2), [2]), (right_spine(3),))
G_PARABOLIC = Diagram(left_spine(3), (glue(right_spine(2), [2]),))

NAMED_ELEMENTS = {
    "identity": identity(),
    "x0": X0,
    "x1": X1_STANDARD,
    "x1_example": X1_EXAMPLE,
    "g_sec22": G_PARABOLIC,
    "parabolic": G_PARABOLIC,
}


def element(text: str) -> Diagram:
    """Named element, its inverse via a trailing ``^-1``, or a diagram literal."""
    t = text.strip()
    if t in NAMED_ELEMENTS:
        return NAMED_ELEMENTS[t]
    if t.endswith("^-1") and t[:-3] in NAMED_ELEMENTS:
        return invert(NAMED_ELEMENTS[t[:-3]])
    return parse_diagram(t)


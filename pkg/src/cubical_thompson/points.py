"""Points of the cube complex: a diagram plus one coordinate per right-hand tree."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .diagrams import Diagram, DiagramError, cut, format_diagram, parse_diagram, reduce, tree_vertex
from .dyadic import parse_dyadic
from .trees import EMPTY, ParseError, Tree


class PointError(ValueError):
    pass


def _coord(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class Point:
    """Normal form: reduced diagram and every coordinate in [0, 1)."""

    diagram: Diagram
    coords: tuple

    def __init__(self, diagram: Diagram, coords: Iterable | None = None):
        cs = tuple(_coord(c) for c in coords) if coords is not None else (Fraction(0),) * diagram.degree
        if len(cs) != diagram.degree:
            raise PointError(f"expected {diagram.degree} coordinates, got {len(cs)}")
        if any(c < 0 or c > 1 for c in cs):
            raise PointError("coordinates must lie in [0, 1]")
        promote = [j + 1 for j, c in enumerate(cs) if c == 1]
        if promote:
            diagram = cut(diagram, promote)
            new = []
            for j, c in enumerate(cs, start=1):
                new.extend((Fraction(0), Fraction(0)) if j in promote else (c,))
            cs = tuple(new)
        object.__setattr__(self, "diagram", reduce(diagram))
        object.__setattr__(self, "coords", cs)

    @property
    def degree(self) -> int:
        return self.diagram.degree

    @property
    def head(self) -> Tree:
        return self.diagram.head

    def is_vertex(self) -> bool:
        return all(c == 0 for c in self.coords)

    def in_trees(self) -> bool:
        return self.diagram.in_trees()

    def support(self) -> list[int]:
        """1-based slots with a positive coordinate."""
        return [j + 1 for j, c in enumerate(self.coords) if c > 0]

    def vertex(self) -> "Point":
        """The mother vertex (all coordinates dropped)."""
        return Point(self.diagram)

    def __str__(self) -> str:
        return format_point(self)

    def __repr__(self) -> str:
        return f"Point({format_point(self)!r})" if len(self.diagram.head) <= 40 else "Point(<large>)"


def tree_point(t: Tree, coords: Sequence | None = None) -> Point:
    return Point(tree_vertex(t), coords)


def vertex(d: Diagram) -> Point:
    return Point(d)


ORIGIN = tree_point(EMPTY)


def _fmt(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return repr(float(c))


def format_point(x: Point) -> str:
    return format_diagram(x.diagram) + " [ " + ", ".join(_fmt(c) for c in x.coords) + " ]"


_TAIL = re.compile(r"\[([^\[\]|]*)\]\s*$")


def parse_coord(text: str):
    t = text.strip()
    try:
        return parse_dyadic(t)
    except ValueError:
        return float(t)


def parse_point(text: str) -> Point:
    """``DIAGRAM [ t1, ... ]``; a bare diagram means the vertex."""
    s = text.rstrip()
    m = _TAIL.search(s)
    if m and s[: m.start()].rstrip().endswith("]"):
        dtext = s[: m.start()]
        try:
            coords = [parse_coord(c) for c in m.group(1).split(",") if c.strip()]
        except ValueError:
            raise ParseError("bad coordinate", m.start()) from None
    else:
        dtext, coords = s, None
    d = parse_diagram(dtext)
    try:
        return Point(d, coords)
    except (PointError, DiagramError) as exc:
        raise ParseError(str(exc), m.start() if m else 0) from None

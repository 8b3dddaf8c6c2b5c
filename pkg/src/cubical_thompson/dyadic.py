"""Exact dyadic rationals (via ``Fraction``) and piecewise-linear maps."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DyadicError(ValueError):
    pass


def is_dyadic(x: Fraction) -> bool:
    d = Fraction(x).denominator
    return d & (d - 1) == 0


def dyadic(x) -> Fraction:
    """Coerce to an exact dyadic ``Fraction`` (accepts 'k/2^e' strings)."""
    if isinstance(x, str):
        x = parse_dyadic(x)
    f = Fraction(x)
    if not is_dyadic(f):
        raise DyadicError(f"{x} is not dyadic")
    return f


_DY = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(?:2\s*\^\s*(\d+)|(\d+)))?\s*$")


def parse_dyadic(text: str) -> Fraction:
    m = _DY.match(text)
    if not m:
        try:
            return Fraction(text.strip())
        except ValueError as exc:
            raise DyadicError(f"cannot parse {text!r}") from exc
    num = int(m.group(1))
    if m.group(2) is not None:
        return Fraction(num, 1 << int(m.group(2)))
    if m.group(3) is not None:
        return Fraction(num, int(m.group(3)))
    return Fraction(num)


def format_dyadic(x: Fraction) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    e = f.denominator.bit_length() - 1
    if 1 << e != f.denominator:
        return str(f)
    return f"{f.numerator}/2^{e}"


def log2_exact(x: Fraction) -> int:
    """Exponent of a power of two."""
    f = Fraction(x)
    n, d = f.numerator, f.denominator
    if n <= 0 or n & (n - 1) or d & (d - 1):
        raise DyadicError(f"{x} is not a power of two")
    return n.bit_length() - d.bit_length()


@dataclass(frozen=True)
class PLMap:
    """Increasing PL homeomorphism ``[0, a] -> [0, b]`` given by its corner points."""

    breakpoints: tuple
    images: tuple

    def __init__(self, breakpoints: Iterable, images: Iterable):
        bs = tuple(Fraction(x) for x in breakpoints)
        ims = tuple(Fraction(x) for x in images)
        if len(bs) != len(ims) or len(bs) < 2:
            raise DyadicError("need matching breakpoint/image lists of length >= 2")
        if bs[0] != 0 or ims[0] != 0:
            raise DyadicError("map must send 0 to 0")
        for s in range(1, len(bs)):
            if bs[s] <= bs[s - 1] or ims[s] <= ims[s - 1]:
                raise DyadicError("breakpoints and images must strictly increase")
        # drop corners where the slope does not change
        keep_b, keep_i = [bs[0]], [ims[0]]
        for s in range(1, len(bs)):
            if len(keep_b) >= 2 and s < len(bs):
                prev = (keep_i[-1] - keep_i[-2]) / (keep_b[-1] - keep_b[-2])
                cur = (ims[s] - keep_i[-1]) / (bs[s] - keep_b[-1])
                if prev == cur:
                    keep_b[-1], keep_i[-1] = bs[s], ims[s]
                    continue
            keep_b.append(bs[s])
            keep_i.append(ims[s])
        object.__setattr__(self, "breakpoints", tuple(keep_b))
        object.__setattr__(self, "images", tuple(keep_i))

    @property
    def domain_end(self) -> Fraction:
        return self.breakpoints[-1]

    @property
    def range_end(self) -> Fraction:
        return self.images[-1]

    def segments(self):
        """Yield ``(x0, x1, slope, intercept)`` with f(x) = slope*x + intercept."""
        b, m = self.breakpoints, self.images
        for s in range(len(b) - 1):
            a = (m[s + 1] - m[s]) / (b[s + 1] - b[s])
            yield b[s], b[s + 1], a, m[s] - a * b[s]

    def slopes(self) -> list[Fraction]:
        return [a for _, _, a, _ in self.segments()]

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if x < 0 or x > self.domain_end:
            raise DyadicError(f"{x} outside the domain")
        for x0, x1, a, c in self.segments():
            if x <= x1:
                return a * x + c
        raise AssertionError("unreachable")

    def inverse(self) -> "PLMap":
        return PLMap(self.images, self.breakpoints)

    def compose(self, inner: "PLMap") -> "PLMap":
        """``self ∘ inner``."""
        if inner.range_end != self.domain_end:
            raise DyadicError("range of inner map does not match domain")
        pts = set(inner.breakpoints)
        inv = inner.inverse()
        pts.update(inv(b) for b in self.breakpoints)
        xs = sorted(pts)
        return PLMap(xs, [self(inner(x)) for x in xs])

    def is_thompson_like(self) -> bool:
        if any(not is_dyadic(x) for x in self.breakpoints + self.images):
            return False
        for a in self.slopes():
            try:
                log2_exact(a)
            except DyadicError:
                return False
        return True

    def validate_thompson_like(self) -> None:
        for x in self.breakpoints + self.images:
            if not is_dyadic(x):
                raise DyadicError(f"non-dyadic breakpoint {x}")
        for a in self.slopes():
            log2_exact(a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.images))

    def text(self) -> str:
        return " ".join(f"({format_dyadic(b)}, {format_dyadic(m)})" for b, m in zip(self.breakpoints, self.images))


def identity_map(n: int = 1) -> PLMap:
    return PLMap([0, n], [0, n])


def slope_doubler(n: int, cut: Iterable[int]) -> PLMap:
    """PL map ``[0,n] -> [0,n+|J|]`` with slope 2 on [j-1,j] for j in J, else 1."""
    cut = set(cut)
    xs, ys = [Fraction(0)], [Fraction(0)]
    for j in range(1, n + 1):
        xs.append(Fraction(j))
        ys.append(ys[-1] + (2 if j in cut else 1))
    return PLMap(xs, ys)


def parse_plmap(pairs: Sequence) -> PLMap:
    return PLMap([parse_dyadic(a) if isinstance(a, str) else a for a, _ in pairs],
                 [parse_dyadic(b) if isinstance(b, str) else b for _, b in pairs])

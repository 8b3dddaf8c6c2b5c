"""Finite rooted binary trees encoded as sets of caret positions.

A position is a pair ``(depth, index)`` with ``1 <= index <= 2**depth``. The
caret at ``(k, i)`` has children ``(k+1, 2i-1)`` and ``(k+1, 2i)``. All walks are
iterative so trees with depth in the tens of thousands are fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

Pos = tuple  # (depth, index); plain tuples are used internally for speed

ROOT = (0, 1)


class CaretPosition(NamedTuple):
    depth: int
    index: int


class TreeError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, position: int = -1):
        super().__init__(message if position < 0 else f"{message} at position {position}")
        self.position = position


def parent(p: Pos) -> Pos:
    return (p[0] - 1, (p[1] + 1) >> 1)


def left_child(p: Pos) -> Pos:
    return (p[0] + 1, 2 * p[1] - 1)


def right_child(p: Pos) -> Pos:
    return (p[0] + 1, 2 * p[1])


def sibling(p: Pos) -> Pos:
    return (p[0], p[1] + 1 if p[1] & 1 else p[1] - 1)


def relocate(p: Pos, anchor: Pos, target: Pos) -> Pos:
    """Move ``p`` (a descendant of ``anchor``) to the same relative spot under ``target``."""
    d = p[0] - anchor[0]
    offset = p[1] - ((anchor[1] - 1) << d)
    return (target[0] + d, ((target[1] - 1) << d) + offset)


def address_of(p: Pos) -> str:
    """Binary address string: '' for the root, '0' = left, '1' = right."""
    k, i = p
    return format(i - 1, "b").zfill(k) if k else ""


def pos_of_address(addr: str) -> Pos:
    if any(c not in "01" for c in addr):
        raise TreeError(f"bad address {addr!r}")
    return (len(addr), (int(addr, 2) if addr else 0) + 1)


def interval_of(p: Pos) -> tuple[Fraction, Fraction]:
    k, i = p
    return Fraction(i - 1, 1 << k), Fraction(i, 1 << k)


def _check_pos(p) -> Pos:
    k, i = p
    if k < 0 or i < 1 or i > (1 << k):
        raise TreeError(f"invalid caret position {p}")
    return (k, i)


@dataclass(frozen=True)
class Tree:
    """A finite tree; equality is equality of caret sets."""

    carets: frozenset

    def __init__(self, carets: Iterable = (), *, validate: bool = True):
        cs = frozenset(carets)
        if validate:
            cs = frozenset(_check_pos(p) for p in cs)
            for p in cs:
                if p[0] > 0 and parent(p) not in cs:
                    raise TreeError(f"caret {p} has no parent caret")
            if cs and ROOT not in cs:
                raise TreeError("non-empty tree without root caret")
        object.__setattr__(self, "carets", cs)

    # basic counts
    def __len__(self) -> int:
        return len(self.carets)

    @property
    def size(self) -> int:
        return len(self.carets)

    @property
    def n_leaves(self) -> int:
        return len(self.carets) + 1

    def __contains__(self, p) -> bool:
        return tuple(p) in self.carets

    def __iter__(self) -> Iterator[Pos]:
        return iter(sorted(self.carets))

    def is_empty(self) -> bool:
        return not self.carets

    def leaves(self) -> list:
        """Leaf positions left to right."""
        cs = self.carets
        if not cs:
            return [ROOT]
        out = []
        stack = [ROOT]
        while stack:
            p = stack.pop()
            if p in cs:
                k, i = p
                stack.append((k + 1, 2 * i))
                stack.append((k + 1, 2 * i - 1))
            else:
                out.append(p)
        return out

    def leaf_index(self) -> dict:
        """Map leaf position -> 1-based leaf label."""
        return {p: n + 1 for n, p in enumerate(self.leaves())}

    def free_carets(self) -> list:
        cs = self.carets
        return sorted(p for p in cs if left_child(p) not in cs and right_child(p) not in cs)

    def blocked_carets(self) -> list:
        cs = self.carets
        return sorted(p for p in cs if left_child(p) in cs and right_child(p) in cs)

    def depth(self) -> int:
        return 1 + max((p[0] for p in self.carets), default=-1)

    # set-like operations
    def __or__(self, other: "Tree") -> "Tree":
        return Tree(self.carets | other.carets, validate=False)

    def __and__(self, other: "Tree") -> "Tree":
        return Tree(self.carets & other.carets, validate=False)

    def __le__(self, other: "Tree") -> bool:
        return self.carets <= other.carets

    def __lt__(self, other: "Tree") -> bool:
        return self.carets < other.carets

    def symmetric_difference_size(self, other: "Tree") -> int:
        return len(self.carets ^ other.carets)

    def split(self) -> tuple["Tree", "Tree"]:
        """Left and right subtrees below the root caret (both re-rooted)."""
        if not self.carets:
            raise TreeError("cannot split the empty tree")
        return self.subtree((1, 1)), self.subtree((1, 2))

    def subtree(self, p: Pos) -> "Tree":
        """Carets below and including ``p``, re-rooted at ``ROOT``."""
        cs = self.carets
        out = []
        stack = [p] if p in cs else []
        while stack:
            q = stack.pop()
            out.append(relocate(q, p, ROOT))
            for c in (left_child(q), right_child(q)):
                if c in cs:
                    stack.append(c)
        return Tree(out, validate=False)

    def __str__(self) -> str:
        return format_tree(self)

    def __repr__(self) -> str:
        if len(self.carets) <= 40:
            return f"Tree({format_tree(self)!r})"
        return f"Tree(<{len(self.carets)} carets>)"


EMPTY = Tree()
CARET = Tree([ROOT])


def from_leaves(leaves: Iterable[Pos]) -> Tree:
    """Tree whose leaf set is the given standard partition (ancestor closure)."""
    cs = set()
    for p in leaves:
        while p[0] > 0:
            p = parent(p)
            if p in cs:
                break
            cs.add(p)
    return Tree(cs, validate=False)


def left_spine(n: int) -> Tree:
    return Tree(((k, 1) for k in range(n)), validate=False)


def right_spine(n: int) -> Tree:
    return Tree(((k, 1 << k) for k in range(n)), validate=False)


def full_tree(n: int) -> Tree:
    return Tree(((k, i) for k in range(n) for i in range(1, (1 << k) + 1)), validate=False)


def glue(a: Tree, indices: Iterable[int], bs: Sequence[Tree] | Tree | None = None) -> Tree:
    """Attach ``bs[j]`` at the ``indices[j]``-th leaf of ``a`` (1-based, simultaneously).

    ``bs`` may be a single tree used at every index; the default is one caret.
    """
    idx = list(indices)
    if bs is None:
        bs = CARET
    if isinstance(bs, Tree):
        bs = [bs] * len(idx)
    if len(bs) != len(idx):
        raise TreeError("need one tree per index")
    leaves = a.leaves()
    if len(set(idx)) != len(idx):
        raise TreeError("repeated leaf index")
    cs = set(a.carets)
    for j, b in zip(idx, bs):
        if not 1 <= j <= len(leaves):
            raise TreeError(f"leaf index {j} out of range 1..{len(leaves)}")
        target = leaves[j - 1]
        cs.update(relocate(p, ROOT, target) for p in b.carets)
    return Tree(cs, validate=False)


def glue_all(a: Tree, b: Tree = CARET) -> Tree:
    """``a`` with ``b`` attached at every leaf."""
    return glue(a, range(1, a.n_leaves + 1), b)


def attach_forest(a: Tree, bs: Sequence[Tree]) -> Tree:
    """``a`` with ``bs[k]`` hung at leaf ``k+1``; needs one tree per leaf."""
    if len(bs) != a.n_leaves:
        raise TreeError("need one tree per leaf")
    return glue(a, range(1, a.n_leaves + 1), list(bs))


def join(l: Tree, r: Tree) -> Tree:
    """The tree with a root caret whose subtrees are ``l`` and ``r``."""
    cs = {ROOT}
    cs.update(relocate(p, ROOT, (1, 1)) for p in l.carets)
    cs.update(relocate(p, ROOT, (1, 2)) for p in r.carets)
    return Tree(cs, validate=False)


def wings(t: Tree) -> tuple[int, int]:
    cs = t.carets
    lw = 0
    while (lw, 1) in cs:
        lw += 1
    rw = 0
    while (rw, 1 << rw) in cs:
        rw += 1
    return lw, rw


# ---------------------------------------------------------------- text form


def parse_tree(text: str) -> Tree:
    """Parse ``*`` / ``(T T)``; whitespace is ignored."""
    cs = set()
    # each stack frame: [position, children_done]
    stack: list = []
    pending = [ROOT]  # positions waiting to be filled, next one last
    done = False
    for n, ch in enumerate(text):
        if ch.isspace():
            continue
        if done:
            raise ParseError("trailing input", n)
        if ch not in "*()":
            raise ParseError(f"unexpected character {ch!r}", n)
        if ch == ")":
            if not stack or stack[-1][1] != 2:
                raise ParseError("unbalanced ')'", n)
            stack.pop()
            if not stack and not pending:
                done = True
            continue
        if not pending:
            raise ParseError("too many subtrees in caret", n)
        p = pending.pop()
        if stack:
            stack[-1][1] += 1
        if ch == "*":
            if not stack:
                done = True
            continue
        cs.add(p)
        stack.append([p, 0])
        pending.append(right_child(p))
        pending.append(left_child(p))
    if not done:
        raise ParseError("incomplete tree", len(text))
    return Tree(cs, validate=False)


def format_tree(t: Tree) -> str:
    cs = t.carets
    out = []
    stack = [ROOT]
    while stack:
        p = stack.pop()
        if p == ")":
            out.append(")")
        elif p in cs:
            out.append("(")
            stack.append(")")
            stack.append(right_child(p))
            stack.append(left_child(p))
        else:
            out.append("*")
    return "".join(out)


# ---------------------------------------------------------- infinite trees


def _primitive_root(w: str) -> str:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


@dataclass(frozen=True)
class LongSnake:
    """Infinite path of carets from the root: ``prefix`` then ``period`` repeated."""

    prefix: str
    period: str

    def __init__(self, prefix: str, period: str):
        if not period:
            raise TreeError("long snake needs a non-empty period")
        if any(c not in "LR" for c in prefix + period):
            raise TreeError("long snake words use only L and R")
        period = _primitive_root(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    def letter(self, k: int) -> str:
        """Direction taken from the depth-k caret to the depth-(k+1) caret."""
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def caret(self, k: int) -> Pos:
        """Position of the caret at depth ``k``."""
        i = 1
        for d in range(k):
            i = 2 * i - 1 if self.letter(d) == "L" else 2 * i
        return (k, i)

    def carets(self, k: int) -> list:
        out = [ROOT]
        for d in range(k - 1):
            kk, i = out[-1]
            out.append((kk + 1, 2 * i - 1 if self.letter(d) == "L" else 2 * i))
        return out[:k]

    def contains(self, p: Pos) -> bool:
        return self.caret(p[0]) == tuple(p)

    def truncate(self, k: int) -> Tree:
        return Tree(self.carets(k), validate=False)

    def drop_head(self, k: int) -> "LongSnake":
        word = self.prefix
        if k <= len(word):
            return LongSnake(word[k:], self.period)
        r = (k - len(word)) % len(self.period)
        return LongSnake("", self.period[r:] + self.period[:r])

    def eventually_constant(self) -> bool:
        return len(self.period) == 1

    def __str__(self) -> str:
        if len(self.period) == 1:
            return f"{self.prefix}{self.period}*"
        return f"{self.prefix}({self.period})*"


LEFT_INF = LongSnake("", "L")
RIGHT_INF = LongSnake("", "R")


def parse_snake(text: str) -> LongSnake:
    s = text.strip()
    if s.endswith(")*"):
        open_at = s.rfind("(")
        if open_at < 0:
            raise ParseError("unbalanced ')' in long snake", len(s) - 2)
        prefix, period = s[:open_at], s[open_at + 1 : -2]
    elif s.endswith("*") and len(s) >= 2:
        prefix, period = s[:-2], s[-2]
    else:
        raise ParseError("long snake must end with a starred period", len(s))
    for n, c in enumerate(prefix + period):
        if c not in "LR":
            raise ParseError(f"unexpected character {c!r} in long snake", n)
    return LongSnake(prefix, period)


def snake_of_tree(s: Tree) -> str:
    """Direction word of a finite snake (a tree that is a single root path)."""
    cs = s.carets
    word = []
    p = ROOT
    if not cs:
        return ""
    while True:
        l, r = left_child(p), right_child(p)
        if l in cs and r in cs:
            raise TreeError("not a snake: branching caret")
        if l in cs:
            word.append("L")
            p = l
        elif r in cs:
            word.append("R")
            p = r
        else:
            break
    if len(word) + 1 != len(cs):
        raise TreeError("not a snake")
    return "".join(word)


def is_snake(t: Tree) -> bool:
    try:
        snake_of_tree(t)
    except TreeError:
        return False
    return not t.is_empty()


def snake_from_word(word: str) -> Tree:
    """Finite snake with ``len(word)+1`` carets following ``word``."""
    p = ROOT
    cs = [p]
    for c in word:
        p = left_child(p) if c == "L" else right_child(p)
        cs.append(p)
    return Tree(cs, validate=False)


@dataclass(frozen=True)
class ClosedTree:
    """An infinite tree without free carets, given by a finite description.

    kind ``snakes``: union of long snakes. kind ``complement``: the full tree
    minus the subtrees rooted at ``deleted``. kind ``predicate``: membership
    supplied by a callable (used for flow supports).
    """

    kind: str
    snakes: tuple = ()
    deleted: frozenset = frozenset()
    predicate: Callable | None = None

    @staticmethod
    def union_of(snakes: Iterable[LongSnake]) -> "ClosedTree":
        ss = tuple(dict.fromkeys(snakes))
        if not ss:
            raise TreeError("need at least one long snake")
        return ClosedTree("snakes", snakes=ss)

    @staticmethod
    def full_minus(deleted: Iterable, *, validate: bool = True) -> "ClosedTree":
        d = frozenset(_check_pos(p) for p in deleted)
        if validate:
            if ROOT in d:
                raise TreeError("root cannot be deleted")
            for p in d:
                if sibling(p) in d:
                    raise TreeError(f"both children of {parent(p)} deleted: caret would be free")
        return ClosedTree("complement", deleted=d)

    @staticmethod
    def from_predicate(pred: Callable) -> "ClosedTree":
        return ClosedTree("predicate", predicate=pred)

    def contains(self, p: Pos) -> bool:
        p = tuple(p)
        if self.kind == "snakes":
            return any(s.contains(p) for s in self.snakes)
        if self.kind == "complement":
            q = p
            while True:
                if q in self.deleted:
                    return False
                if q[0] == 0:
                    return True
                q = parent(q)
        return bool(self.predicate(p))

    def truncate(self, k: int) -> Tree:
        if self.kind == "snakes":
            cs = set()
            for s in self.snakes:
                cs.update(s.carets(k))
            return Tree(cs, validate=False)
        cs = set()
        stack = [ROOT] if k > 0 and self.contains(ROOT) else []
        while stack:
            p = stack.pop()
            cs.add(p)
            if p[0] + 1 < k:
                for c in (left_child(p), right_child(p)):
                    if self.contains(c):
                        stack.append(c)
        return Tree(cs, validate=False)

    def has_free_caret(self, depth: int) -> Pos | None:
        """First caret above ``depth`` with no child caret, if any."""
        t = self.truncate(depth + 1)
        for p in sorted(t.carets):
            if p[0] < depth and left_child(p) not in t.carets and right_child(p) not in t.carets:
                return p
        return None


FULL_TREE = ClosedTree.full_minus(())


def truncate(obj, k: int) -> Tree:
    if k < 0:
        raise TreeError("depth must be non-negative")
    if isinstance(obj, Tree):
        return Tree((p for p in obj.carets if p[0] < k), validate=False)
    return obj.truncate(k)


# ------------------------------------------------------------ partitions


def tree_to_partition(t: Tree) -> list[Fraction]:
    leaves = t.leaves()
    return [Fraction(0)] + [interval_of(p)[1] for p in leaves]


def partition_to_tree(points: Sequence) -> Tree:
    pts = [Fraction(x) for x in points]
    if len(pts) < 2 or pts[0] != 0 or pts[-1] != 1:
        raise TreeError("partition must run from 0 to 1")
    leaves = []
    ptr = 0
    stack = [ROOT]
    while stack:
        p = stack.pop()
        a, b = interval_of(p)
        if pts[ptr] != a:
            raise TreeError("not a standard dyadic partition")
        nxt = pts[ptr + 1] if ptr + 1 < len(pts) else None
        if nxt is None or nxt > b:
            raise TreeError("not a standard dyadic partition")
        if nxt == b:
            leaves.append(p)
            ptr += 1
        else:
            stack.append(right_child(p))
            stack.append(left_child(p))
    if ptr != len(pts) - 1:
        raise TreeError("not a standard dyadic partition")
    return from_leaves(leaves)


def termination(seq: Sequence[Tree]) -> list[Tree]:
    """Replace the forest by carets exactly where two adjacent leaves are siblings."""
    out: list[Tree] = []
    for t in seq:
        leaves = t.leaves()
        n = 0
        while n < len(leaves):
            p = leaves[n]
            if t.carets and n + 1 < len(leaves) and p[1] & 1 and leaves[n + 1] == sibling(p):
                out.append(CARET)
                n += 2
            else:
                out.append(EMPTY)
                n += 1
    return out


def _approximation(t: Tree, start: Tree) -> list[Tree]:
    chain = [start]
    cur = start
    while cur != t:
        add = [p for p in cur.leaves() if p in t.carets]
        if not add:
            raise TreeError("start tree is not contained in the target")
        cur = Tree(cur.carets | set(add), validate=False)
        chain.append(cur)
    return chain


def left_approximation(t: Tree) -> tuple[list[Tree], int]:
    chain = _approximation(t, left_spine(wings(t)[0]))
    return chain, len(chain)


def right_approximation(t: Tree) -> tuple[list[Tree], int]:
    chain = _approximation(t, right_spine(wings(t)[1]))
    return chain, len(chain)


def enumerate_trees(n: int) -> list[Tree]:
    """All trees with exactly ``n`` carets."""
    table: list[list[frozenset]] = [[frozenset()]]
    for m in range(1, n + 1):
        row = []
        for a in range(m):
            for lt in table[a]:
                lcs = [relocate(p, ROOT, (1, 1)) for p in lt]
                for rt in table[m - 1 - a]:
                    rcs = [relocate(p, ROOT, (1, 2)) for p in rt]
                    row.append(frozenset([ROOT, *lcs, *rcs]))
        table.append(row)
    return [Tree(cs, validate=False) for cs in table[n]]


def enumerate_snakes(max_depth: int) -> list[Tree]:
    """Finite snakes with 1..max_depth carets."""
    out = [CARET] if max_depth >= 1 else []
    words = [""]
    for _ in range(max_depth - 1):
        words = [w + c for w in words for c in "LR"]
        out.extend(snake_from_word(w) for w in words)
    return out

"""The free operad on a Sigma-free symmetric sequence, as labeled trees.

A tree is a recursive term. ``Node(r, children)`` has its incoming edges
numbered by child position, ``r`` is a chosen orbit representative of the
matching level, and free leaves carry labels. The identity is ``FreeLeaf(1)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Protocol, Sequence, Union

from . import perm as P
from .group import GroupError
from .symseq import Elem, SymmetricSequence


@dataclass(frozen=True, slots=True)
class FreeLeaf:
    label: int


@dataclass(frozen=True, slots=True)
class BoundLeaf:
    r: Elem


@dataclass(frozen=True, slots=True)
class Node:
    r: Elem
    children: tuple

    def __post_init__(self):
        if self.r.level != len(self.children) or not self.children:
            raise GroupError(f"node labelled at level {self.r.level} with {len(self.children)} children")


Tree = Union[FreeLeaf, BoundLeaf, Node]
IDENTITY = FreeLeaf(1)


def height(t: Tree) -> int:
    if isinstance(t, Node):
        return 1 + max(height(c) for c in t.children)
    return 0


def labels(t: Tree) -> list[int]:
    """Free-leaf labels in depth-first order."""
    out: list[int] = []

    def walk(u):
        if isinstance(u, FreeLeaf):
            out.append(u.label)
        elif isinstance(u, Node):
            for c in u.children:
                walk(c)

    walk(t)
    return out


def arity(t: Tree) -> int:
    return len(labels(t))


def size(t: Tree) -> int:
    if isinstance(t, Node):
        return 1 + sum(size(c) for c in t.children)
    return 1


def is_operation(t: Tree) -> bool:
    """Free-leaf labels are exactly ``1..arity``."""
    ls = labels(t)
    return sorted(ls) == list(range(1, len(ls) + 1))


def relabel(t: Tree, f) -> Tree:
    if isinstance(t, FreeLeaf):
        return FreeLeaf(f(t.label))
    if isinstance(t, Node):
        return Node(t.r, tuple(relabel(c, f) for c in t.children))
    return t


def renumber(t: Tree) -> Tree:
    """The branch with its labels replaced order-preservingly by ``1..k``."""
    rank = {x: i for i, x in enumerate(sorted(labels(t)), 1)}
    return relabel(t, rank.__getitem__)


def shape(t: Tree) -> Tree:
    """Forget leaf labels (every free leaf becomes label 0)."""
    return relabel(t, lambda _: 0)


def lex(t: Tree) -> Tree:
    """Number the free leaves ``1..n`` in depth-first order."""
    it = itertools.count(1)
    return relabel(t, lambda _: next(it))


def sigma_act(s: P.Perm, t: Tree) -> Tree:
    if len(s) != arity(t):
        raise GroupError(f"permutation of degree {len(s)} on a tree of arity {arity(t)}")
    return relabel(t, lambda j: s[j - 1])


def gamma(t: Tree, us: Sequence[Tree]) -> Tree:
    """Graft ``us[i-1]`` on the leaf labelled i, shifting its labels by the arities before it."""
    k = arity(t)
    if len(us) != k:
        raise GroupError(f"tree of arity {k} composed with {len(us)} trees")
    offsets = list(itertools.accumulate((arity(u) for u in us), initial=0))

    def graft(v):
        if isinstance(v, FreeLeaf):
            off = offsets[v.label - 1]
            return relabel(us[v.label - 1], lambda j: j + off)
        if isinstance(v, Node):
            return Node(v.r, tuple(graft(c) for c in v.children))
        return v

    return graft(t)


def delta(t: Tree, us: Sequence[Tree]) -> Tree:
    """Graft ``us[i]`` on the free leaf with the i-th smallest label, renumbering nothing."""
    ls = sorted(labels(t))
    if len(us) != len(ls):
        raise GroupError(f"branch with {len(ls)} free leaves grafted with {len(us)} trees")
    seen: set[int] = set()
    for u in us:
        lu = labels(u)
        if len(set(lu)) != len(lu) or seen & set(lu):
            raise GroupError("label collision in grafted branches")
        seen.update(lu)
    where = dict(zip(ls, us))

    def graft(v):
        if isinstance(v, FreeLeaf):
            return where[v.label]
        if isinstance(v, Node):
            return Node(v.r, tuple(graft(c) for c in v.children))
        return v

    return graft(t)


def eta(a: Elem, s: SymmetricSequence) -> Tree:
    sig, r = s.sigma_factor(a)
    if a.level == 0:
        return BoundLeaf(r)
    return Node(r, tuple(FreeLeaf(j) for j in sig))


def g_act(g: int, t: Tree, s: SymmetricSequence) -> Tree:
    """``g . Node(r, b)`` with ``g r = sigma r'`` is ``Node(r', [g b_sigma(1), ..., g b_sigma(m)])``."""
    if isinstance(t, FreeLeaf):
        return t
    if isinstance(t, BoundLeaf):
        return BoundLeaf(s.act_rep(g, t.r)[1])
    sig, r2 = s.act_rep(g, t.r)
    return Node(r2, tuple(g_act(g, t.children[j - 1], s) for j in sig))


@dataclass(frozen=True)
class StandardDecomposition:
    sigma: P.Perm
    root: Elem
    branches: tuple

    def recompose(self, s: SymmetricSequence) -> Tree:
        return sigma_act(self.sigma, gamma(eta(self.root, s), list(self.branches)))


def standard_decomposition(t: Tree) -> StandardDecomposition:
    """``t = sigma . gamma(eta(r); b_1', ..., b_m')`` with renumbered branches ``b_i'``."""
    if not isinstance(t, Node):
        raise GroupError("height-0 trees have no standard decomposition; "
                         "they are the identity or eta of a level-0 element")
    # the composite numbers branch i's leaves by offset + rank, and sigma sends that back
    sigma = []
    for c in t.children:
        sigma.extend(sorted(labels(c)))
    return StandardDecomposition(tuple(sigma), t.r, tuple(renumber(c) for c in t.children))


# ---------------------------------------------------------------------------
# maps out of the free operad

class Operad(Protocol):
    """What ``evaluate`` needs from a target operad in G-sets."""

    def identity(self): ...

    def compose(self, x, ys: Sequence): ...

    def permute(self, s: P.Perm, x): ...

    def arity(self, x) -> int: ...


class FreeOperad:
    """The free operad itself, exposed through the ``Operad`` interface."""

    def __init__(self, s: SymmetricSequence):
        self.seq = s

    def identity(self):
        return IDENTITY

    def compose(self, x, ys):
        return gamma(x, ys)

    def permute(self, s, x):
        return sigma_act(s, x)

    def arity(self, x):
        return arity(x)

    def act(self, g, x):
        return g_act(g, x, self.seq)


def evaluate(t: Tree, target: Operad, f) -> object:
    """The operad map out of the free operad extending ``f`` on generators, applied to ``t``."""
    if isinstance(t, FreeLeaf):
        if t.label != 1:
            raise GroupError("a height-0 operation must be the identity FreeLeaf(1)")
        return target.identity()
    if isinstance(t, BoundLeaf):
        return f(t.r)
    d = standard_decomposition(t)
    root = f(d.root)
    if target.arity(root) != d.root.level:
        raise GroupError(f"generator image has arity {target.arity(root)}, expected {d.root.level}")
    return target.permute(d.sigma, target.compose(root, [evaluate(b, target, f) for b in d.branches]))


# ---------------------------------------------------------------------------
# enumeration

HOLE = FreeLeaf(0)


def _shapes(s: SymmetricSequence, h: int, budget: int, memo: dict) -> list[tuple[Tree, int]]:
    """Trees of height at most h with unlabelled free leaves (label 0), paired with their arity."""
    key = (h, budget)
    if key in memo:
        return memo[key]
    out: list[tuple[Tree, int]] = [(HOLE, 1)] if budget >= 1 else []
    out += [(BoundLeaf(r), 0) for r in s.representatives(0)]
    if h > 0:
        below = _shapes(s, h - 1, budget, memo)
        for m in range(1, s.cap + 1):
            for r in s.representatives(m):
                for kids in _tuples(below, m, budget):
                    out.append((Node(r, tuple(k for k, _ in kids)), sum(a for _, a in kids)))
    memo[key] = out
    return out


def _tuples(pool, m, budget):
    if m == 0:
        yield ()
        return
    for item in pool:
        if item[1] <= budget:
            for rest in _tuples(pool, m - 1, budget - item[1]):
                yield (item,) + rest


def enumerate_trees(s: SymmetricSequence, arity_cap: int, height_cap: int,
                    lex_only: bool = False) -> Iterator[Tree]:
    """Every tree with arity and height within the caps, once each.

    ``lex_only`` keeps one tree per Sigma-orbit: the one whose leaves read
    ``1..n`` depth first.
    """
    for sh, n in _shapes(s, height_cap, arity_cap, {}):
        canonical = lex(sh)
        if lex_only:
            yield canonical
        else:
            for p in P.all_perms(n):
                yield sigma_act(p, canonical)


def random_tree(s: SymmetricSequence, rng: random.Random, max_height: int = 3,
                max_arity: int = 5, p_stop: float = 0.35) -> Tree:
    """A random well-formed tree, leaves numbered by a random permutation."""

    def build(h, budget):
        if h == 0 or s.cap < 1 or rng.random() < p_stop:
            if budget >= 1 and rng.random() < 0.7:
                return HOLE, 1
            return BoundLeaf(rng.choice(s.representatives(0))), 0
        m = rng.randint(1, s.cap)
        r = rng.choice(s.representatives(m))
        kids, total = [], 0
        for _ in range(m):
            k, a = build(h - 1, budget - total)
            kids.append(k)
            total += a
        return Node(r, tuple(kids)), total

    t, _ = build(max_height, max_arity)
    t = lex(t)
    n = arity(t)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return sigma_act(tuple(perm), t)


# ---------------------------------------------------------------------------
# serialization

def to_json(t: Tree, s: SymmetricSequence) -> dict:
    g = s.group
    if isinstance(t, FreeLeaf):
        return {"leaf": t.label}
    if isinstance(t, BoundLeaf):
        return {"bound": t.r.label(g)}
    return {"node": t.r.label(g), "children": [to_json(c, s) for c in t.children]}


def from_json(doc: dict, s: SymmetricSequence) -> Tree:
    if "leaf" in doc:
        return FreeLeaf(int(doc["leaf"]))
    if "bound" in doc:
        return BoundLeaf(_parse_rep(doc["bound"], s))
    if "node" in doc:
        return Node(_parse_rep(doc["node"], s), tuple(from_json(c, s) for c in doc["children"]))
    raise GroupError(f"tree record needs one of leaf/bound/node: {doc}")


def _parse_rep(text: str, s: SymmetricSequence) -> Elem:
    try:
        tag, orbit, name = text.split(".", 2)
        level = int(tag[1:])
        e = Elem(level, int(orbit), s.group.element(name), P.identity(level))
    except (ValueError, IndexError) as exc:
        raise GroupError(f"bad representative label {text!r}") from exc
    if level > s.cap or e.orbit >= len(s.orbits[level]) or not s.is_representative(e):
        raise GroupError(f"{text!r} is not a chosen representative")
    return e


def to_dot(t: Tree, s: SymmetricSequence, name: str = "tree") -> str:
    """Root at the top; edge labels are the edge numbers, leaves show their labels."""
    g = s.group
    lines = [f"digraph {name} {{", "  node [fontname=Helvetica];"]
    counter = itertools.count()

    def walk(u) -> str:
        v = f"v{next(counter)}"
        if isinstance(u, FreeLeaf):
            lines.append(f'  {v} [shape=plaintext, label="{u.label}"];')
        elif isinstance(u, BoundLeaf):
            lines.append(f'  {v} [shape=box, label="{u.r.label(g)}"];')
        else:
            lines.append(f'  {v} [shape=ellipse, label="{u.r.label(g)}"];')
            for i, c in enumerate(u.children, 1):
                w = walk(c)
                lines.append(f'  {w} -> {v} [label="{i}"];')
        return v

    walk(t)
    lines.append("}")
    return "\n".join(lines) + "\n"

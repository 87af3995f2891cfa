"""Finite groups as multiplication tables, subgroups, and actions on {1..n}.

Elements of a group of order ``n`` are the integers ``0..n-1``; the element
order is fixed at construction so every enumeration below is deterministic.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import perm as P
from .perm import Perm


class GroupError(ValueError):
    """Invalid group data or an operation outside its domain."""


class Group:
    """A finite group given by its full multiplication table.

    ``mul[a][b]`` is the index of the product ``a*b``.
    """

    def __init__(self, mul: Sequence[Sequence[int]], name: str = "G",
                 element_names: Sequence[str] | None = None):
        self.mul = tuple(tuple(int(x) for x in row) for row in mul)
        self.order = len(self.mul)
        self.name = name
        _validate_table(self.mul)
        self.identity = next(e for e in range(self.order)
                             if all(self.mul[e][a] == a for a in range(self.order)))
        self.inv = tuple(next(b for b in range(self.order) if self.mul[a][b] == self.identity)
                         for a in range(self.order))
        if element_names is None:
            element_names = [str(a) for a in range(self.order)]
        if len(set(element_names)) != self.order:
            raise GroupError("element names must be distinct, one per element")
        self.element_names = tuple(element_names)
        self._name_index = {s: i for i, s in enumerate(self.element_names)}
        self._hash = hash(self.mul)
        self._canon: dict = {}

    def __repr__(self):
        return f"Group({self.name}, order={self.order})"

    def __eq__(self, other):
        return self is other or (isinstance(other, Group) and self.mul == other.mul)

    def __hash__(self):
        return self._hash

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def prod(self, *xs: int) -> int:
        out = self.identity
        for x in xs:
            out = self.mul[out][x]
        return out

    def conj(self, a: int, x: int) -> int:
        """``a x a^-1``."""
        return self.mul[self.mul[a][x]][self.inv[a]]

    def element(self, name: str | int) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.order:
                raise GroupError(f"no element {name} in {self.name}")
            return name
        try:
            return self._name_index[name]
        except KeyError:
            raise GroupError(f"no element named {name!r} in {self.name}") from None

    def elem_name(self, a: int) -> str:
        return self.element_names[a]

    def span(self, gens: Iterable[int]) -> "Subgroup":
        return Subgroup(self, _closure(self, gens))

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return _build_lattice(self)

    @property
    def subgroups(self) -> list["Subgroup"]:
        return self.lattice.subgroups

    def subgroup_index(self, h: "Subgroup") -> int:
        return self.lattice.index[h]

    def to_json(self) -> dict:
        return {"order": self.order, "mul": [list(r) for r in self.mul], "name": self.name,
                "elements": list(self.element_names)}


def _validate_table(mul) -> None:
    n = len(mul)
    if n == 0:
        raise GroupError("a group needs at least one element")
    for i, row in enumerate(mul):
        if len(row) != n:
            raise GroupError(f"row {i} has length {len(row)}, expected {n}")
        if sorted(row) != list(range(n)):
            raise GroupError(f"row {i} is not a permutation of 0..{n - 1} (not a Latin square)")
    for j in range(n):
        if sorted(mul[i][j] for i in range(n)) != list(range(n)):
            raise GroupError(f"column {j} is not a permutation of 0..{n - 1} (not a Latin square)")
    ids = [e for e in range(n) if all(mul[e][a] == a and mul[a][e] == a for a in range(n))]
    if not ids:
        raise GroupError("table has no two-sided identity")
    for a in range(n):
        for b in range(n):
            ab = mul[a][b]
            for c in range(n):
                if mul[ab][c] != mul[a][mul[b][c]]:
                    raise GroupError(f"not associative at ({a}, {b}, {c}): "
                                     f"({a}*{b})*{c} = {mul[ab][c]} but {a}*({b}*{c}) = {mul[a][mul[b][c]]}")
    e = ids[0]
    for a in range(n):
        if not any(mul[a][b] == e and mul[b][a] == e for b in range(n)):
            raise GroupError(f"element {a} has no two-sided inverse")


def _closure(g: Group, gens: Iterable[int]) -> tuple[int, ...]:
    gens = sorted(set(gens))
    els = {g.identity}
    frontier = [g.identity]
    while frontier:
        new = []
        for x in frontier:
            for s in gens:
                y = g.mul[x][s]
                if y not in els:
                    els.add(y)
                    new.append(y)
        frontier = new
    return tuple(sorted(els))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup, identified by its element set (not up to conjugacy)."""

    group: Group
    elements: tuple[int, ...]

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.elements == other.elements
                and self.group == other.group)

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        names = ",".join(self.group.elem_name(x) for x in self.elements)
        return f"<{names}>"

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def position(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def key(self) -> tuple:
        return (len(self.elements), self.elements)

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def conjugate(self, a: int) -> "Subgroup":
        g = self.group
        return Subgroup(g, tuple(sorted(g.conj(a, x) for x in self.elements)))

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, tuple(sorted(self._set & other._set)))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Greedy generating set: scan elements in order, keep those not yet spanned."""
        gens: list[int] = []
        span = {self.group.identity}
        for x in self.elements:
            if x not in span:
                gens.append(x)
                span = set(_closure(self.group, gens))
        return tuple(gens)

    @cached_property
    def subgroups(self) -> list["Subgroup"]:
        return [k for k in self.group.subgroups if k.issubset(self)]

    def left_cosets(self, k: "Subgroup") -> list[tuple[int, tuple[int, ...]]]:
        """Left cosets ``xK`` of ``k`` in this subgroup as ``(rep, elements)``.

        The representative is the least element of each coset; cosets are
        listed by representative.
        """
        g = self.group
        seen: set[int] = set()
        out = []
        for x in self.elements:
            if x in seen:
                continue
            coset = tuple(sorted(g.mul[x][y] for y in k.elements))
            seen.update(coset)
            out.append((coset[0], coset))
        return out

    def index_of(self, k: "Subgroup") -> int:
        return len(self.elements) // len(k.elements)

    def canonical(self, k: "Subgroup") -> "Subgroup":
        """Canonical representative of the conjugacy class of ``k`` under this subgroup."""
        cache = self.group._canon
        key = (self.elements, k.elements)
        rep = cache.get(key)
        if rep is None:
            rep = min((k.conjugate(h) for h in self.elements), key=lambda s: s.key)
            cache[key] = rep
        return rep

    @cached_property
    def subgroup_classes(self) -> list[list["Subgroup"]]:
        """Conjugacy classes (under this subgroup) of its subgroups."""
        classes: dict[Subgroup, list[Subgroup]] = {}
        for k in self.subgroups:
            classes.setdefault(self.canonical(k), []).append(k)
        return list(classes.values())

    def is_normal_in(self, other: "Subgroup") -> bool:
        return all(self.conjugate(a) == self for a in other.elements)

    def names(self) -> list[str]:
        return [self.group.elem_name(x) for x in self.elements]


class SubgroupLattice(NamedTuple):
    subgroups: list[Subgroup]
    classes: list[list[Subgroup]]
    index: dict


def _build_lattice(g: Group) -> SubgroupLattice:
    found = {g.span([x]) for x in range(g.order)}
    frontier = list(found)
    cyclic = list(found)
    while frontier:
        new = []
        for a in frontier:
            for c in cyclic:
                j = g.span(a.elements + c.elements)
                if j not in found:
                    found.add(j)
                    new.append(j)
        frontier = new
    subs = sorted(found, key=lambda s: s.key)
    classes: dict[Subgroup, list[Subgroup]] = {}
    for s in subs:
        classes.setdefault(g.whole.canonical(s), []).append(s)
    return SubgroupLattice(subs, list(classes.values()), {s: i for i, s in enumerate(subs)})


def enumerate_subgroups(g: Group) -> SubgroupLattice:
    """All subgroups, ordered by size then element set, with their conjugacy classes."""
    return g.lattice


# ---------------------------------------------------------------------------
# presets

def cyclic(n: int) -> Group:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    return Group([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}",
                 [str(a) for a in range(n)])


def dihedral(n: int) -> Group:
    """Symmetries of the n-gon, order 2n: index k is r^k and n+k is s r^k."""
    if n < 1:
        raise GroupError("dihedral parameter must be positive")

    def mul(a, b):
        sa, ka = divmod(a, n)
        sb, kb = divmod(b, n)
        if sb == 0:
            return sa * n + (ka + kb) % n
        return (1 - sa) * n + (kb - ka) % n

    names = ["e" if k == 0 else f"r{k}" for k in range(n)] + \
            ["s" if k == 0 else f"sr{k}" for k in range(n)]
    return Group([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)], f"D{n}", names)


def symmetric(n: int) -> Group:
    els = P.all_perms(n)
    idx = {p: i for i, p in enumerate(els)}
    table = [[idx[P.compose(a, b)] for b in els] for a in els]
    names = ["".join(map(str, p)) for p in els] if n < 10 else None
    return Group(table, f"S{n}", names)


def klein4() -> Group:
    g = direct_product(cyclic(2), cyclic(2))
    return Group(g.mul, "V4", ["e", "a", "b", "c"])


def quaternion8() -> Group:
    units = ["1", "i", "j", "k"]
    # unit products: (sign, unit)
    t = {("1", u): (1, u) for u in units}
    t.update({(u, "1"): (1, u) for u in units})
    t.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
              ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
              ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    els = [(s, u) for u in units for s in (1, -1)]
    names = [("" if s == 1 else "-") + u for s, u in els]
    idx = {e: i for i, e in enumerate(els)}

    def mul(a, b):
        s, u = t[(a[1], b[1])]
        return idx[(a[0] * b[0] * s, u)]

    return Group([[mul(a, b) for b in els] for a in els], "Q8", names)


def direct_product(a: Group, b: Group) -> Group:
    n = b.order
    table = [[a.mul[x // n][y // n] * n + b.mul[x % n][y % n]
              for y in range(a.order * n)] for x in range(a.order * n)]
    names = [f"({a.elem_name(x // n)},{b.elem_name(x % n)})" for x in range(a.order * n)]
    return Group(table, f"{a.name}x{b.name}", names)


PRESETS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "V4", "C2xC2", "S3", "D4",
           "Q8", "C2xC4", "C2xC2xC2", "S4")

_FACTOR = re.compile(r"^(C|D|S)(\d+)$|^(V4|klein4|Q8|quaternion8)$")


@lru_cache(maxsize=None)
def preset(name: str) -> Group:
    factors = name.split("x")
    groups = []
    for f in factors:
        m = _FACTOR.match(f)
        if not m:
            raise GroupError(f"unknown group preset {name!r}; try one of {', '.join(PRESETS)}")
        if m.group(1):
            kind, k = m.group(1), int(m.group(2))
            groups.append({"C": cyclic, "D": dihedral, "S": symmetric}[kind](k))
        else:
            groups.append(klein4() if m.group(3) in ("V4", "klein4") else quaternion8())
    out = groups[0]
    for h in groups[1:]:
        out = direct_product(out, h)
    if len(groups) > 1:
        out.name = name
    return out


def make_group(spec) -> Group:
    """Build a group from a preset name, a table, or a ``{"order", "mul", "name"}`` mapping."""
    if isinstance(spec, Group):
        return spec
    if isinstance(spec, str):
        return preset(spec)
    if isinstance(spec, dict):
        mul = spec.get("mul")
        if mul is None:
            raise GroupError("group record needs a 'mul' table")
        if "order" in spec and spec["order"] != len(mul):
            raise GroupError(f"group record: order {spec['order']} but table has {len(mul)} rows")
        return Group(mul, spec.get("name", "G"), spec.get("elements"))
    return Group(spec)


def load_group(path: str) -> Group:
    with open(path) as fh:
        return make_group(json.load(fh))


# ---------------------------------------------------------------------------
# homomorphisms into symmetric groups

@dataclass(frozen=True)
class PermHom:
    """A homomorphism ``H -> Sigma_n``; ``images`` is parallel to ``domain.elements``."""

    domain: Subgroup
    degree: int
    images: tuple[Perm, ...]

    def __call__(self, h: int) -> Perm:
        return self.images[self.domain.position[h]]

    @property
    def group(self) -> Group:
        return self.domain.group

    def restrict(self, k: Subgroup) -> "PermHom":
        if not k.issubset(self.domain):
            raise GroupError(f"{k} is not a subgroup of {self.domain}")
        return PermHom(k, self.degree, tuple(self(x) for x in k.elements))

    def conjugate_by_perm(self, s: Perm) -> "PermHom":
        si = P.inverse(s)
        return PermHom(self.domain, self.degree,
                       tuple(P.compose(P.compose(s, p), si) for p in self.images))

    def conjugate_by(self, a: int) -> "PermHom":
        """The hom on ``aHa^-1`` sending ``a h a^-1`` to ``self(h)``."""
        g = self.group
        dom = self.domain.conjugate(a)
        ai = g.inv[a]
        return PermHom(dom, self.degree, tuple(self(g.conj(ai, x)) for x in dom.elements))

    def is_trivial(self) -> bool:
        e = P.identity(self.degree)
        return all(p == e for p in self.images)

    def check(self) -> None:
        g = self.group
        if self(g.identity) != P.identity(self.degree):
            raise GroupError("identity must map to the identity permutation")
        for a in self.domain.elements:
            for b in self.domain.elements:
                if self(g.mul[a][b]) != P.compose(self(a), self(b)):
                    raise GroupError(f"not a homomorphism at ({g.elem_name(a)}, {g.elem_name(b)})")


def trivial_hom(h: Subgroup, n: int) -> PermHom:
    e = P.identity(n)
    return PermHom(h, n, tuple(e for _ in h.elements))


def extend_hom(h: Subgroup, n: int, gen_images: dict[int, Perm]) -> PermHom | None:
    """Extend generator images to a homomorphism on ``h``; None if inconsistent."""
    g = h.group
    gens = list(gen_images)
    img = {g.identity: P.identity(n)}
    frontier = [g.identity]
    while frontier:
        new = []
        for x in frontier:
            px = img[x]
            for s in gens:
                y = g.mul[x][s]
                py = P.compose(px, gen_images[s])
                old = img.get(y)
                if old is None:
                    img[y] = py
                    new.append(y)
                elif old != py:
                    return None
        frontier = new
    if len(img) != len(h):
        return None
    return PermHom(h, n, tuple(img[x] for x in h.elements))


@lru_cache(maxsize=None)
def enumerate_perm_homs(h: Subgroup, n: int) -> tuple[PermHom, ...]:
    """Every homomorphism ``h -> Sigma_n`` exactly once, in a fixed order."""
    if n < 0:
        raise GroupError("degree must be non-negative")
    gens = h.generators
    g = h.group
    orders = []
    for s in gens:
        k, x = 1, s
        while x != g.identity:
            x = g.mul[x][s]
            k += 1
        orders.append(k)
    candidates = [P.perms_of_order_dividing(n, k) for k in orders]
    out = []
    for choice in itertools.product(*candidates):
        hom = extend_hom(h, n, dict(zip(gens, choice)))
        if hom is not None:
            out.append(hom)
    return tuple(out)


@dataclass(frozen=True)
class GraphSubgroup:
    """The subgroup ``{(h, alpha(h)) : h in H}`` of ``G x Sigma_n``."""

    hom: PermHom

    @property
    def level(self) -> int:
        return self.hom.degree

    @property
    def subgroup(self) -> Subgroup:
        return self.hom.domain

    def pairs(self) -> list[tuple[int, Perm]]:
        return list(zip(self.hom.domain.elements, self.hom.images))

    @property
    def key(self) -> tuple:
        return (self.hom.domain.key, self.hom.images)

    def conjugate(self, a: int, s: Perm) -> "GraphSubgroup":
        """Conjugate by ``(a, s)`` in ``G x Sigma_n``."""
        return GraphSubgroup(self.hom.conjugate_by(a).conjugate_by_perm(s))

    def __repr__(self):
        pairs = ", ".join(f"{self.hom.group.elem_name(h)}:{P.fmt(p)}" for h, p in self.pairs())
        return f"Graph[n={self.level}]({pairs})"


def graph(h: Subgroup, alpha: PermHom | None = None, n: int | None = None) -> GraphSubgroup:
    if alpha is None:
        alpha = trivial_hom(h, n or 0)
    return GraphSubgroup(alpha)


def subconjugate(a: GraphSubgroup, b: GraphSubgroup) -> bool:
    """Is ``a`` conjugate in ``G x Sigma_n`` to a subgroup of ``b``?

    Runs over ``g`` with ``gHg^-1 <= L`` and compares the two H-actions up to
    isomorphism, which is exactly the existence of the Sigma_n part.
    """
    if a.level != b.level:
        raise GroupError(f"level mismatch: {a.level} vs {b.level}")
    from .gsets import GSetAction, iso_class  # cycle: gsets builds on this module
    g = a.subgroup.group
    h = a.subgroup
    target = iso_class(GSetAction(a.hom))
    for x in range(g.order):
        c = h.conjugate(x)
        if not c.issubset(b.subgroup):
            continue
        pulled = b.hom.restrict(c).conjugate_by(g.inv[x])
        if iso_class(GSetAction(pulled)) == target:
            return True
    return False

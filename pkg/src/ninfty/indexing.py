"""Indexing systems stored by their admissible orbits, the closure operator, and enumeration.

An orbit is a pair ``(H, K)`` with ``K`` the canonical member of its
H-conjugacy class; it stands for the H-set ``H/K``. Closure runs over a
precomputed table of all such pairs for the group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .coefficients import CoefficientSystem, all_classes, coefficient_violations
from .group import Group, GroupError, Subgroup
from .gsets import GSetAction, IsoClass, class_size, induce_class, orbit_decompose, sort_class

Orbit = tuple  # (H, K), K canonical in H

RULES = frozenset({"trivial", "conjugation", "restriction", "self_induction"})
MAX_SUBGROUPS = 40


class Step(NamedTuple):
    """How an orbit entered the closure: ``rule`` applied to ``premises``."""

    rule: str
    premises: tuple
    detail: object = None  # conjugating element, restriction target, or seed class


class OrbitUniverse:
    """All orbits ``(H, K)`` of a group with the closure tables precomputed."""

    def __init__(self, g: Group):
        self.group = g
        self.orbits: list[Orbit] = []
        for h in g.subgroups:
            for k in sorted({h.canonical(k) for k in h.subgroups}, key=lambda s: s.key):
                self.orbits.append((h, k))
        self.index = {o: i for i, o in enumerate(self.orbits)}
        self.by_group: dict[Subgroup, list[int]] = {}
        for i, (h, _) in enumerate(self.orbits):
            self.by_group.setdefault(h, []).append(i)
        self.conj = []
        self.restr = []
        for h, k in self.orbits:
            self.conj.append({a: self.index[(h.conjugate(a), h.conjugate(a).canonical(k.conjugate(a)))]
                              for a in g})
            rs = {}
            for l in h.subgroups:
                if l != h:
                    rs[l] = sorted({self.index[(l, l.canonical(l.intersection(k.conjugate(x))))]
                                    for x in h.elements})
            self.restr.append(rs)

    def orbit(self, h: Subgroup, k: Subgroup) -> int:
        return self.index[(h, h.canonical(k))]

    def induce(self, i: int, j: int) -> int | None:
        """``(H, K)`` and ``(K, L)`` give ``(H, L)``; None if j is not over K."""
        h, k = self.orbits[i]
        k2, l = self.orbits[j]
        if k2 != k:
            return None
        return self.index[(h, h.canonical(l))]


@lru_cache(maxsize=None)
def universe(g: Group) -> OrbitUniverse:
    return OrbitUniverse(g)


@dataclass(frozen=True, eq=False)
class IndexingSystem:
    group: Group
    orbits: frozenset[Orbit]
    trace: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, IndexingSystem) and self.group == other.group and self.orbits == other.orbits

    def __hash__(self):
        return hash(self.orbits)

    def __le__(self, other: "IndexingSystem") -> bool:
        return self.orbits <= other.orbits

    def __lt__(self, other: "IndexingSystem") -> bool:
        return self.orbits < other.orbits

    def __contains__(self, o: Orbit) -> bool:
        h, k = o
        return (h, h.canonical(k)) in self.orbits

    def __len__(self):
        return len(self.orbits)

    def nontrivial(self) -> list[Orbit]:
        return [o for o in self.sorted_orbits() if o[0] != o[1]]

    def sorted_orbits(self) -> list[Orbit]:
        u = universe(self.group)
        return sorted(self.orbits, key=u.index.__getitem__)

    def key(self) -> tuple:
        u = universe(self.group)
        return (len(self.orbits), sorted(u.index[o] for o in self.orbits))

    def admits_class(self, h: Subgroup, cls: IsoClass) -> bool:
        return all((h, k) in self.orbits for k in cls)

    def membership(self, x: GSetAction) -> bool:
        if x.group.group != self.group:
            raise GroupError("H-set over a different group")
        return all((t.group, t.stabilizer) in self.orbits for t in orbit_decompose(x))

    def intersection(self, other: "IndexingSystem") -> "IndexingSystem":
        return IndexingSystem(self.group, self.orbits & other.orbits)

    def to_coefficients(self, cap: int) -> CoefficientSystem:
        """Every H-set of size at most ``cap`` whose orbits are all admissible."""
        adm = {h: frozenset(c for c in all_classes(h, cap) if self.admits_class(h, c))
               for h in self.group.subgroups}
        return CoefficientSystem(self.group, cap, adm)

    def closure_violations(self) -> list[str]:
        """Failures of conjugation, restriction and self-induction at the orbit level."""
        u = universe(self.group)
        present = {u.index[o] for o in self.orbits}
        out = []
        for h in self.group.subgroups:
            if (h, h) not in self.orbits:
                out.append(f"trivial orbit {h}/{h} absent")
        for i in sorted(present):
            h, k = u.orbits[i]
            for a, j in u.conj[i].items():
                if j not in present:
                    out.append(f"conjugate of {h}/{k} by {self.group.elem_name(a)} absent")
                    break
            for l, js in u.restr[i].items():
                for j in js:
                    if j not in present:
                        out.append(f"restriction of {h}/{k} to {l} lacks {u.orbits[j][0]}/{u.orbits[j][1]}")
            for j in u.by_group.get(k, ()):
                if j in present:
                    z = u.induce(i, j)
                    if z not in present:
                        out.append(f"self-induction of {h}/{k} with {k}/{u.orbits[j][1]} absent")
        return out


def _closure(u: OrbitUniverse, present: set[int], todo: list[int], trace: dict | None,
             rules: frozenset) -> set[int]:
    """Worklist closure: every pair of present orbits is examined when the later one is popped."""

    def add(j: int, step: Step):
        if j not in present:
            present.add(j)
            todo.append(j)
            if trace is not None:
                trace[u.orbits[j]] = step

    while todo:
        i = todo.pop()
        h, k = u.orbits[i]
        o = u.orbits[i]
        if "conjugation" in rules:
            for a, j in u.conj[i].items():
                add(j, Step("conjugation", (o,), a))
        if "restriction" in rules:
            for l, js in u.restr[i].items():
                for j in js:
                    add(j, Step("restriction", (o,), l))
        if "self_induction" in rules:
            # i as the outer orbit H/K, with K/L present
            for j in u.by_group.get(k, ()):
                if j in present:
                    add(u.induce(i, j), Step("self_induction", (o, u.orbits[j])))
            # i as the inner orbit K/L, with H/K present for K = h
            for j in list(present):
                if u.orbits[j][1] == h:
                    add(u.induce(j, i), Step("self_induction", (u.orbits[j], o)))
    return present


def generate(c: CoefficientSystem | IndexingSystem | Iterable[Orbit], g: Group | None = None,
             rules: Iterable[str] = RULES) -> IndexingSystem:
    """Least indexing system containing every orbit of every set in ``c``.

    ``rules`` may drop closure rules; this exists only for mutation testing.
    """
    rules = frozenset(rules)
    if not rules <= RULES:
        raise ValueError(f"unknown rules: {sorted(rules - RULES)}")
    seeds: list[tuple[Orbit, Step]] = []
    if isinstance(c, CoefficientSystem):
        g = c.group
        for h, cs in c.items():
            for cls in sorted(cs, key=lambda x: (len(x), [k.key for k in x])):
                for k in cls:
                    seeds.append(((h, k), Step("seed", (), (h, cls))))
    elif isinstance(c, IndexingSystem):
        g = c.group
        seeds = [(o, Step("seed", (), (o[0], (o[1],)))) for o in c.sorted_orbits()]
    else:
        if g is None:
            raise GroupError("generate from raw orbits needs the group")
        for h, k in c:
            seeds.append(((h, h.canonical(k)), Step("seed", (), (h, (h.canonical(k),)))))
    u = universe(g)
    trace: dict = {}
    present: set[int] = set()
    todo: list[int] = []
    if "trivial" in rules:
        for h in g.subgroups:
            j = u.index[(h, h)]
            present.add(j)
            todo.append(j)
            trace[(h, h)] = Step("trivial", ())
    for o, step in seeds:
        j = u.index[o]
        if j not in present:
            present.add(j)
            todo.append(j)
            trace[o] = step
    _closure(u, present, todo, trace, rules)
    return IndexingSystem(g, frozenset(u.orbits[j] for j in present), trace)


def trivial_system(g: Group) -> IndexingSystem:
    return generate((), g)


def complete_system(g: Group) -> IndexingSystem:
    return IndexingSystem(g, frozenset(universe(g).orbits))


def is_indexing_system(c: CoefficientSystem) -> tuple[bool, list[str]]:
    """Whether ``c`` is closed under subobjects, coproducts and self-induction inside its cap."""
    g = c.group
    if c.cap < g.order:
        raise GroupError(f"cap {c.cap} is below |G| = {g.order}; orbits could be missed")
    out = coefficient_violations(c)
    for h, cs in c.items():
        for cls in cs:
            for i in range(len(cls)):
                sub = cls[:i] + cls[i + 1:]
                if sub not in cs:
                    out.append(f"{h}: subobject {sub} of {cls} absent")
        ordered = sorted(cs, key=lambda x: (len(x), [k.key for k in x]))
        for a in ordered:
            for b in ordered:
                if class_size(h, a) + class_size(h, b) <= c.cap:
                    if sort_class(a + b) not in cs:
                        out.append(f"{h}: coproduct of {a} and {b} absent")
        for cls in cs:
            if len(cls) != 1 or cls[0] == h:
                continue
            k = cls[0]
            for t in c[k]:
                if len(h) // len(k) * class_size(k, t) <= c.cap:
                    if induce_class(k, t, h) not in cs:
                        out.append(f"{h}: induction of {t} along {h}/{k} absent")
    return not out, out


def _rule_tables(u: OrbitUniverse, rules: frozenset) -> tuple[list[int], list[list[tuple[int, int]]]]:
    """Bitmask form of the closure rules: one-premise masks and two-premise (partner, result) lists."""
    n = len(u.orbits)
    single = [0] * n
    pairs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in range(n):
        if "conjugation" in rules:
            for j in u.conj[i].values():
                single[i] |= 1 << j
        if "restriction" in rules:
            for js in u.restr[i].values():
                for j in js:
                    single[i] |= 1 << j
        if "self_induction" in rules:
            for j in u.by_group.get(u.orbits[i][1], ()):
                z = u.induce(i, j)
                pairs[i].append((j, z))
                if j != i:
                    pairs[j].append((i, z))
    return single, pairs


def _close_mask(s: int, todo: list[int], single, pairs) -> int:
    while todo:
        i = todo.pop()
        new = single[i] & ~s
        for j, z in pairs[i]:
            if s >> j & 1:
                new |= 1 << z
        new &= ~s
        s |= new
        while new:
            b = new & -new
            todo.append(b.bit_length() - 1)
            new ^= b
    return s


def iter_system_masks(g: Group, rules: Iterable[str] = RULES) -> Iterator[int]:
    """Every closed orbit set as a bitmask over ``universe(g).orbits``.

    Depth-first include/exclude over the orbits in universe order: an
    orbit is either added (and the set closed) or forbidden for the rest
    of the branch. Each closed set is reached exactly once, and the masks
    come out in increasing order when bit 0 is read as most significant.
    """
    if len(g.subgroups) > MAX_SUBGROUPS:
        raise GroupError(f"{g.name} has {len(g.subgroups)} subgroups (guard: {MAX_SUBGROUPS}); "
                         "try a smaller group")
    rules = frozenset(rules)
    u = universe(g)
    single, pairs = _rule_tables(u, rules)
    n = len(u.orbits)
    seeds = [u.index[(h, h)] for h in g.subgroups] if "trivial" in rules else []
    start = _close_mask(sum(1 << j for j in seeds), list(seeds), single, pairs)
    # up[i]: what adding i alone forces; down[j]: every i that would force j
    up = [_close_mask(start | 1 << i, [i], single, pairs) & ~start for i in range(n)]
    down = [0] * n
    for i in range(n):
        m = up[i]
        while m:
            b = m & -m
            down[b.bit_length() - 1] |= 1 << i
            m ^= b
    stack = [(start, 0, 0)]
    pop, push = stack.pop, stack.append
    while stack:
        s, forbidden, i = pop()
        done = s | forbidden
        while i < n and done >> i & 1:
            i += 1
        if i == n:
            yield s
            continue
        new = up[i] & ~s
        todo = []
        m = new
        while m:
            b = m & -m
            todo.append(b.bit_length() - 1)
            m ^= b
        t = _close_mask(s | new, todo, single, pairs)
        # pushed second so the branch without orbit i comes out first
        if not t & forbidden:
            push((t, forbidden, i + 1))
        push((s, forbidden | down[i], i + 1))


def count_all(g: Group, rules: Iterable[str] = RULES) -> int:
    return sum(1 for _ in iter_system_masks(g, rules))


def from_mask(g: Group, mask: int) -> IndexingSystem:
    u = universe(g)
    return IndexingSystem(g, frozenset(o for j, o in enumerate(u.orbits) if mask >> j & 1))


def enumerate_all(g: Group, rules: Iterable[str] = RULES) -> list[IndexingSystem]:
    """All indexing systems, smallest first."""
    systems = [from_mask(g, m) for m in iter_system_masks(g, rules)]
    return sorted(systems, key=IndexingSystem.key)


def hasse_edges(systems: list[IndexingSystem]) -> list[tuple[int, int]]:
    """Covering relations ``(i, j)`` with ``systems[i] < systems[j]``."""
    edges = []
    for j, b in enumerate(systems):
        below = [i for i, a in enumerate(systems) if a < b]
        for i in below:
            if not any(systems[i] < systems[m] for m in below if m != i):
                edges.append((i, j))
    return edges

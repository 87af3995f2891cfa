"""Families of graph subgroups, truncated coefficient systems, and admissible sets.

Everything is truncated at an arity cap ``N``: a family lists graph subgroups
at levels ``0..N`` and a coefficient system lists isomorphism classes of
H-sets of size at most ``N``. Closure conditions are read inside the cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from . import perm as P
from .group import Group, GraphSubgroup, GroupError, Subgroup, enumerate_perm_homs, trivial_hom
from .gsets import (GSetAction, IsoClass, class_size, conjugate_class, iso_class,
                    restrict_class, sort_class, trivial_class)


@dataclass(frozen=True)
class Family:
    group: Group
    cap: int
    levels: tuple[frozenset[GraphSubgroup], ...]

    def __post_init__(self):
        if len(self.levels) != self.cap + 1:
            raise GroupError(f"family with cap {self.cap} needs {self.cap + 1} levels, got {len(self.levels)}")

    def __le__(self, other: "Family") -> bool:
        _same_frame(self, other)
        return all(a <= b for a, b in zip(self.levels, other.levels))

    def __len__(self):
        return sum(len(s) for s in self.levels)

    def sorted_level(self, n: int) -> list[GraphSubgroup]:
        return sorted(self.levels[n], key=lambda x: x.key)


def _same_frame(a, b):
    # both orders only make sense at a fixed group and cap
    if a.group != b.group or a.cap != b.cap:
        raise GroupError(f"cannot compare {a.group.name} cap {a.cap} with {b.group.name} cap {b.cap}")


@dataclass(frozen=True, eq=False)
class CoefficientSystem:
    group: Group
    cap: int
    admissible: Mapping[Subgroup, frozenset[IsoClass]]

    def __eq__(self, other):
        if not isinstance(other, CoefficientSystem):
            return NotImplemented
        return (self.group == other.group and self.cap == other.cap
                and all(self[h] == other[h] for h in self.group.subgroups))

    def __le__(self, other: "CoefficientSystem") -> bool:
        _same_frame(self, other)
        return all(self[h] <= other[h] for h in self.group.subgroups)

    def __getitem__(self, h: Subgroup) -> frozenset[IsoClass]:
        return self.admissible.get(h, frozenset())

    def __contains__(self, item: tuple[Subgroup, IsoClass]) -> bool:
        h, cls = item
        return cls in self[h]

    def items(self):
        for h in self.group.subgroups:
            yield h, self[h]

    def truncate(self, cap: int) -> "CoefficientSystem":
        adm = {h: frozenset(c for c in cs if class_size(h, c) <= cap) for h, cs in self.items()}
        return CoefficientSystem(self.group, min(cap, self.cap), adm)

    def difference(self, other: "CoefficientSystem") -> list[tuple[Subgroup, IsoClass]]:
        return [(h, c) for h, cs in self.items() for c in sorted(cs, key=_class_key)
                if c not in other[h]]


def _class_key(cls: IsoClass):
    return (len(cls), [k.key for k in cls])


class Violation(NamedTuple):
    level: int
    kind: str
    offending: GraphSubgroup | None
    missing: GraphSubgroup

    def __str__(self):
        src = f" (from {self.offending})" if self.offending is not None else ""
        return f"level {self.level}: {self.kind}: missing {self.missing}{src}"


# ---------------------------------------------------------------------------
# families

def _sigma_generators(n: int) -> list[P.Perm]:
    if n < 2:
        return []
    gens = [(2, 1) + tuple(range(3, n + 1))]
    if n > 2:
        gens.append(tuple(range(2, n + 1)) + (1,))
    return gens


def _neighbours(lam: GraphSubgroup):
    """Graph subgroups one step below ``lam`` under subconjugacy.

    Restriction to each subgroup of H and conjugation by generators of G and
    of Sigma_n; closing under these gives the full subconjugacy closure.
    """
    h = lam.subgroup
    for k in h.subgroups:
        if k != h:
            yield "restriction", GraphSubgroup(lam.hom.restrict(k))
    for a in h.group.whole.generators:
        yield "conjugation", GraphSubgroup(lam.hom.conjugate_by(a))
    for s in _sigma_generators(lam.level):
        yield "conjugation", GraphSubgroup(lam.hom.conjugate_by_perm(s))


def trivial_graphs(g: Group, n: int) -> list[GraphSubgroup]:
    return [GraphSubgroup(trivial_hom(h, n)) for h in g.subgroups]


def family_closure(g: Group, cap: int, gens: Iterable[GraphSubgroup] = ()) -> Family:
    """Least family with the given graph subgroups (levels above ``cap`` ignored)."""
    levels = [set(trivial_graphs(g, n)) for n in range(cap + 1)]
    todo = [lam for lam in gens if lam.level <= cap]
    for lam in todo:
        if lam.subgroup.group != g:
            raise GroupError("graph subgroup over a different group")
    todo += [lam for s in levels for lam in s]
    while todo:
        lam = todo.pop()
        levels[lam.level].add(lam)
        for _, mu in _neighbours(lam):
            if mu not in levels[mu.level]:
                levels[mu.level].add(mu)
                todo.append(mu)
    return Family(g, cap, tuple(frozenset(s) for s in levels))


def minimal_family(g: Group, cap: int) -> Family:
    return family_closure(g, cap)


def complete_family(g: Group, cap: int) -> Family:
    levels = tuple(frozenset(GraphSubgroup(a) for h in g.subgroups for a in enumerate_perm_homs(h, n))
                   for n in range(cap + 1))
    return Family(g, cap, levels)


def validate_family(f: Family) -> list[Violation]:
    """Violations of conditions (a)-(c), one per missing graph subgroup."""
    out: list[Violation] = []
    for n, level in enumerate(f.levels):
        reported = set()
        for lam in f.sorted_level(n):
            if lam.level != n:
                out.append(Violation(n, "wrong level", None, lam))
        for mu in trivial_graphs(f.group, n):
            if mu not in level:
                out.append(Violation(n, "trivial graph H x {e} absent", None, mu))
                reported.add(mu)
        for lam in f.sorted_level(n):
            for kind, mu in _neighbours(lam):
                if mu not in level and mu not in reported:
                    out.append(Violation(n, f"not closed under subconjugacy ({kind})", lam, mu))
                    reported.add(mu)
    return out


# ---------------------------------------------------------------------------
# coefficient systems

def all_classes(h: Subgroup, cap: int) -> list[IsoClass]:
    """Every isomorphism class of H-sets of size at most ``cap``."""
    reps = sorted({h.canonical(k) for k in h.subgroups}, key=lambda k: k.key)
    out: list[IsoClass] = []

    def rec(start: int, budget: int, acc: list[Subgroup]):
        out.append(tuple(acc))
        for i in range(start, len(reps)):
            size = len(h) // len(reps[i])
            if size <= budget:
                acc.append(reps[i])
                rec(i, budget - size, acc)
                acc.pop()

    rec(0, cap, [])
    return [sort_class(c) for c in out]


def trivial_coefficients(g: Group, cap: int) -> CoefficientSystem:
    return CoefficientSystem(g, cap, {h: frozenset(trivial_class(h, n) for n in range(cap + 1))
                                      for h in g.subgroups})


def complete_coefficients(g: Group, cap: int) -> CoefficientSystem:
    return CoefficientSystem(g, cap, {h: frozenset(all_classes(h, cap)) for h in g.subgroups})


def coefficient_closure(g: Group, cap: int,
                        seeds: Iterable[tuple[Subgroup, IsoClass]]) -> CoefficientSystem:
    """Least coefficient system containing the seeds (restriction, conjugation, trivial sets)."""
    adm: dict[Subgroup, set] = {h: {trivial_class(h, n) for n in range(cap + 1)} for h in g.subgroups}
    todo = []
    for h, cls in seeds:
        cls = sort_class(h.canonical(k) for k in cls)
        if class_size(h, cls) <= cap and cls not in adm[h]:
            adm[h].add(cls)
            todo.append((h, cls))
    while todo:
        h, cls = todo.pop()
        nxt = [(l, restrict_class(h, cls, l)) for l in h.subgroups]
        nxt += [conjugate_class(a, h, cls) for a in g]
        for l, c in nxt:
            if c not in adm[l]:
                adm[l].add(c)
                todo.append((l, c))
    return CoefficientSystem(g, cap, {h: frozenset(s) for h, s in adm.items()})


def coefficient_violations(c: CoefficientSystem) -> list[str]:
    """Failures of the coefficient-system axioms (i)-(iv) inside the cap."""
    g = c.group
    out = []
    for h, cs in c.items():
        for n in range(c.cap + 1):
            if trivial_class(h, n) not in cs:
                out.append(f"{h}: trivial set of size {n} absent")
        for cls in cs:
            if class_size(h, cls) > c.cap:
                out.append(f"{h}: class {cls} exceeds cap {c.cap}")
            for l in h.subgroups:
                r = restrict_class(h, cls, l)
                if r not in c[l]:
                    out.append(f"{h}: restriction of {cls} to {l} absent")
            for a in g:
                ha, ca = conjugate_class(a, h, cls)
                if ca not in c[ha]:
                    out.append(f"{h}: conjugate of {cls} by {g.elem_name(a)} absent")
    return out


def family_to_coefficients(f: Family) -> CoefficientSystem:
    adm: dict[Subgroup, set] = {h: set() for h in f.group.subgroups}
    for level in f.levels:
        for lam in level:
            adm[lam.subgroup].add(iso_class(GSetAction(lam.hom)))
    return CoefficientSystem(f.group, f.cap, {h: frozenset(s) for h, s in adm.items()})


def coefficients_to_family(c: CoefficientSystem) -> Family:
    levels = []
    for n in range(c.cap + 1):
        level = set()
        for h in c.group.subgroups:
            allowed = c[h]
            for a in enumerate_perm_homs(h, n):
                if iso_class(GSetAction(a)) in allowed:
                    level.add(GraphSubgroup(a))
        levels.append(frozenset(level))
    return Family(c.group, c.cap, tuple(levels))


def admissible_sets(s, method: str = "stabilizers") -> CoefficientSystem:
    """Admissible sets of a symmetric sequence given as coproducts of orbits.

    ``stabilizers``: a graph subgroup has fixed points in ``(G x Sigma_n)/Lambda``
    iff it is subconjugate to ``Lambda``, so the admissibles are what the orbit
    stabilizers generate under restriction and conjugation.
    ``fixed_points``: test every graph subgroup against the explicit fixed-point
    sets (slow; for cross-checking).
    """
    g = s.group
    if method == "fixed_points":
        adm: dict[Subgroup, set] = {h: set() for h in g.subgroups}
        for n in range(s.cap + 1):
            for h in g.subgroups:
                for a in enumerate_perm_homs(h, n):
                    if s.fixed_points(n, GraphSubgroup(a)):
                        adm[h].add(iso_class(GSetAction(a)))
        return CoefficientSystem(g, s.cap, {h: frozenset(x) for h, x in adm.items()})
    if method != "stabilizers":
        raise ValueError(f"unknown method {method!r}")
    seeds = set()
    for level in s.orbits:
        for lam in level:
            seeds.add((lam.subgroup, iso_class(GSetAction(lam.hom))))
    adm = {h: set() for h in g.subgroups}
    for h, cls in seeds:
        for l in h.subgroups:
            r = restrict_class(h, cls, l)
            for a in g:
                la, ca = conjugate_class(a, l, r)
                adm[la].add(ca)
    return CoefficientSystem(g, s.cap, {h: frozenset(x) for h, x in adm.items()})

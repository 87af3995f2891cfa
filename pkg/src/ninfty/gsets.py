"""Finite H-sets on {1..n}: orbits, isomorphism, restriction, induction, conjugation.

An isomorphism class of H-sets is stored as a sorted tuple of orbit
stabilizers, each replaced by the canonical member of its H-conjugacy class.
The ``*_class`` helpers compute directly on such tuples without building
actions; the action-level functions build the sets explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import perm as P
from .group import GroupError, PermHom, Subgroup, extend_hom, trivial_hom

IsoClass = tuple  # tuple[Subgroup, ...], sorted by Subgroup.key


@dataclass(frozen=True)
class GSetAction:
    """The H-set ``{1..n}`` with ``h . i = alpha(h)(i)``."""

    hom: PermHom

    @property
    def group(self) -> Subgroup:
        return self.hom.domain

    @property
    def size(self) -> int:
        return self.hom.degree

    def act(self, h: int, i: int) -> int:
        return self.hom(h)[i - 1]

    def orbits(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for i in range(1, self.size + 1):
            if i in seen:
                continue
            orb = sorted({p[i - 1] for p in self.hom.images})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, i: int) -> Subgroup:
        h = self.group
        return Subgroup(h.group, tuple(x for x, p in zip(h.elements, self.hom.images)
                                       if p[i - 1] == i))

    def __repr__(self):
        g = self.group.group
        gens = ", ".join(f"{g.elem_name(s)}->{P.fmt(self.hom(s))}" for s in self.group.generators)
        return f"GSet({self.group}, n={self.size}, {gens})"


class OrbitType(NamedTuple):
    group: Subgroup
    stabilizer: Subgroup  # canonical representative of the H-class


def from_generators(h: Subgroup, n: int, gens: dict[int, P.Perm]) -> GSetAction:
    for s, p in gens.items():
        if len(p) != n or not P.is_perm(p):
            raise GroupError(f"image of {h.group.elem_name(s)} is not a permutation of 1..{n}")
    if set(h.group.span(gens).elements) != set(h.elements):
        raise GroupError(f"given elements do not generate {h}")
    hom = extend_hom(h, n, dict(gens))
    if hom is None:
        raise GroupError("generator images do not define a homomorphism")
    return GSetAction(hom)


def trivial_gset(h: Subgroup, n: int) -> GSetAction:
    return GSetAction(trivial_hom(h, n))


def orbit_decompose(x: GSetAction) -> tuple[OrbitType, ...]:
    h = x.group
    types = [OrbitType(h, h.canonical(x.stabilizer(orb[0]))) for orb in x.orbits()]
    return tuple(sorted(types, key=lambda t: t.stabilizer.key))


def iso_class(x: GSetAction) -> IsoClass:
    return tuple(t.stabilizer for t in orbit_decompose(x))


def are_isomorphic(x: GSetAction, y: GSetAction) -> bool:
    if x.group != y.group:
        raise GroupError(f"H-sets over different groups: {x.group} vs {y.group}")
    return x.size == y.size and iso_class(x) == iso_class(y)


def restrict(x: GSetAction, k: Subgroup) -> GSetAction:
    return GSetAction(x.hom.restrict(k))


def conjugate_action(a: int, x: GSetAction) -> GSetAction:
    """The ``aHa^-1``-set on the same points with ``(a h a^-1) . i = h . i``."""
    return GSetAction(x.hom.conjugate_by(a))


def coset_action(h: Subgroup, k: Subgroup) -> GSetAction:
    """``H/K`` with cosets numbered by their least element."""
    if not k.issubset(h):
        raise GroupError(f"{k} is not a subgroup of {h}")
    g = h.group
    cosets = h.left_cosets(k)
    where = {}
    for i, (_, els) in enumerate(cosets, 1):
        for y in els:
            where[y] = i
    images = tuple(tuple(where[g.mul[x][rep]] for rep, _ in cosets) for x in h.elements)
    return GSetAction(PermHom(h, len(cosets), images))


def coproduct(*xs: GSetAction) -> GSetAction:
    if not xs:
        raise GroupError("coproduct of nothing needs an explicit group; use trivial_gset(h, 0)")
    h = xs[0].group
    for x in xs:
        if x.group != h:
            raise GroupError("coproduct of H-sets over different groups")
    images = tuple(P.block_sum(x.hom.images[i] for x in xs) for i in range(len(h)))
    return GSetAction(PermHom(h, sum(x.size for x in xs), images))


def product(x: GSetAction, y: GSetAction) -> GSetAction:
    """Cartesian product; the pair ``(i, j)`` is point ``(i-1)*|y| + j``."""
    if x.group != y.group:
        raise GroupError("product of H-sets over different groups")
    m = y.size
    images = tuple(tuple((p[i // m] - 1) * m + q[i % m] for i in range(x.size * m))
                   for p, q in zip(x.hom.images, y.hom.images))
    return GSetAction(PermHom(x.group, x.size * m, images))


def induce(x: GSetAction, h: Subgroup) -> GSetAction:
    """``H x_K T`` for a K-set ``T``; the point ``(c_i, t)`` is ``(i-1)*|T| + t``.

    ``c_i`` runs over the least elements of the left cosets of K in H.
    """
    k = x.group
    if not k.issubset(h):
        raise GroupError(f"{k} is not a subgroup of {h}")
    g = h.group
    cosets = h.left_cosets(k)
    rep_of = {}
    for j, (rep, els) in enumerate(cosets):
        for y in els:
            rep_of[y] = j
    n = x.size
    images = []
    for a in h.elements:
        img = [0] * (len(cosets) * n)
        for i, (c, _) in enumerate(cosets):
            ac = g.mul[a][c]
            j = rep_of[ac]
            kk = g.mul[g.inv[cosets[j][0]]][ac]
            p = x.hom(kk)
            for t in range(1, n + 1):
                img[i * n + t - 1] = j * n + p[t - 1]
        images.append(tuple(img))
    return GSetAction(PermHom(h, len(cosets) * n, tuple(images)))


def product_identity_check(h: Subgroup, k: Subgroup, l: Subgroup) -> bool:
    """``H/K x H/L`` versus ``ind_K^H res^H_K H/L``."""
    hl = coset_action(h, l)
    lhs = product(coset_action(h, k), hl)
    rhs = induce(restrict(hl, k), h)
    return are_isomorphic(lhs, rhs)


# ---------------------------------------------------------------------------
# class-level arithmetic

def sort_class(stabs) -> IsoClass:
    return tuple(sorted(stabs, key=lambda s: s.key))


def class_size(h: Subgroup, cls: IsoClass) -> int:
    return sum(len(h) // len(k) for k in cls)


def trivial_class(h: Subgroup, n: int) -> IsoClass:
    return (h,) * n


def orbit_class(h: Subgroup, k: Subgroup) -> IsoClass:
    return (h.canonical(k),)


def restrict_class(h: Subgroup, cls: IsoClass, l: Subgroup) -> IsoClass:
    """Orbit types of ``res^H_L`` of the H-set with class ``cls``.

    The L-orbits on H/K are the double cosets ``L x K``; the orbit through
    ``xK`` has stabilizer ``L n xKx^-1``.
    """
    g = h.group
    out = []
    for k in cls:
        seen: set[int] = set()
        for x in h.elements:
            if x in seen:
                continue
            for a in l.elements:
                for y in k.elements:
                    seen.add(g.mul[g.mul[a][x]][y])
            out.append(l.canonical(l.intersection(k.conjugate(x))))
    return sort_class(out)


def conjugate_class(a: int, h: Subgroup, cls: IsoClass) -> tuple[Subgroup, IsoClass]:
    ha = h.conjugate(a)
    return ha, sort_class(ha.canonical(k.conjugate(a)) for k in cls)


def induce_class(k: Subgroup, cls: IsoClass, h: Subgroup) -> IsoClass:
    """``ind_K^H`` of a K-set: each orbit K/L becomes H/L."""
    return sort_class(h.canonical(l) for l in cls)


def class_action(h: Subgroup, cls: IsoClass) -> GSetAction:
    if not cls:
        return trivial_gset(h, 0)
    return coproduct(*(coset_action(h, k) for k in cls))


def is_subclass(small: IsoClass, big: IsoClass) -> bool:
    """Multiset inclusion of orbit types."""
    rest = list(big)
    for k in small:
        if k in rest:
            rest.remove(k)
        else:
            return False
    return True

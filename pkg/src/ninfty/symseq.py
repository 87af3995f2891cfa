"""Sigma-free symmetric sequences built as coproducts of orbits ``(G x Sigma_n)/Lambda``.

An element of level ``n`` is a coset ``(g, s) Lambda_{n,i}`` stored by its
least member in the order of ``G x Sigma_n`` (group index first, then the
permutation in lexicographic order). The chosen Sigma_n-orbit
representatives ``R_n`` are the cosets ``(g, id) Lambda`` with ``g`` least in
its left coset ``g H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from . import perm as P
from .coefficients import Family, validate_family
from .group import GraphSubgroup, Group, GroupError, PermHom
from .gsets import GSetAction, conjugate_class, iso_class, restrict_class


class Elem(NamedTuple):
    level: int
    orbit: int
    g: int
    sigma: P.Perm

    def label(self, group: Group) -> str:
        s = "" if self.sigma == P.identity(self.level) else "." + "".join(map(str, self.sigma))
        return f"r{self.level}.{self.orbit}.{group.elem_name(self.g)}{s}"


@dataclass(eq=False)
class SymmetricSequence:
    """Levels ``0..cap``; level ``n`` is the coproduct of ``(G x Sigma_n)/orbits[n][i]``."""

    group: Group
    cap: int
    orbits: tuple[tuple[GraphSubgroup, ...], ...]
    family: Family | None = None
    _act_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.orbits) != self.cap + 1:
            raise GroupError(f"sequence with cap {self.cap} needs {self.cap + 1} levels")
        for n, level in enumerate(self.orbits):
            for lam in level:
                if lam.level != n:
                    raise GroupError(f"orbit stabilizer {lam} placed at level {n}")
            if self.trivial_orbit(n) is None:
                raise GroupError(f"level {n} has no (G x {{e}})-fixed points: "
                                 "add the orbit (G x Sigma_n)/(G x {e})")

    def _check_level(self, n: int):
        if not 0 <= n <= self.cap:
            raise GroupError(f"level {n} is outside the modelled range 0..{self.cap}")

    def trivial_orbit(self, n: int) -> int | None:
        for i, lam in enumerate(self.orbits[n]):
            if lam.subgroup == self.group.whole and lam.hom.is_trivial():
                return i
        return None

    def canon(self, n: int, i: int, g: int, s: P.Perm) -> Elem:
        lam = self.orbits[n][i]
        mul = self.group.mul
        best = min((mul[g][h], P.compose(s, a)) for h, a in zip(lam.subgroup.elements, lam.hom.images))
        return Elem(n, i, best[0], best[1])

    def act(self, x: Elem, g: int, s: P.Perm | None = None) -> Elem:
        """``(g, s) . x``."""
        self._check_level(x.level)
        if s is None:
            s = P.identity(x.level)
        elif len(s) != x.level:
            raise GroupError(f"permutation of degree {len(s)} acting on level {x.level}")
        return self.canon(x.level, x.orbit, self.group.mul[g][x.g], P.compose(s, x.sigma))

    def elements(self, n: int) -> list[Elem]:
        self._check_level(n)
        out = set()
        for i in range(len(self.orbits[n])):
            for g in self.group:
                for s in P.all_perms(n):
                    out.add(self.canon(n, i, g, s))
        return sorted(out)

    def representatives(self, n: int) -> list[Elem]:
        self._check_level(n)
        e = P.identity(n)
        out = []
        for i, lam in enumerate(self.orbits[n]):
            for rep, _ in self.group.whole.left_cosets(lam.subgroup):
                out.append(Elem(n, i, rep, e))
        return out

    def is_representative(self, x: Elem) -> bool:
        h = self.orbits[x.level][x.orbit].subgroup
        mul = self.group.mul
        return x.sigma == P.identity(x.level) and x.g == min(mul[x.g][y] for y in h.elements)

    def sigma_factor(self, x: Elem) -> tuple[P.Perm, Elem]:
        """The unique ``(s, r)`` with ``x = s . r`` and ``r`` in ``R_n``."""
        self._check_level(x.level)
        lam = self.orbits[x.level][x.orbit]
        mul = self.group.mul
        h0, g0 = min(((y, mul[x.g][y]) for y in lam.subgroup.elements), key=lambda t: t[1])
        # (g, s) Lam = (e, s alpha(h0)^-1) (g0, id) Lam  with  g = g0 h0^-1
        h_back = self.group.inv[h0]
        s = P.compose(x.sigma, P.inverse(lam.hom(h_back)))
        return s, Elem(x.level, x.orbit, g0, P.identity(x.level))

    def act_rep(self, g: int, r: Elem) -> tuple[P.Perm, Elem]:
        """Factor ``g r = s r'``; cached because the tree G-action calls it per node."""
        key = (g, r)
        got = self._act_cache.get(key)
        if got is None:
            got = self.sigma_factor(self.act(r, g))
            self._act_cache[key] = got
        return got

    def stabilizer(self, x: Elem) -> GraphSubgroup:
        """``(g, s) Lambda (g, s)^-1``."""
        return self.orbits[x.level][x.orbit].conjugate(x.g, x.sigma)

    def fixed_points(self, n: int, lam: GraphSubgroup) -> list[Elem]:
        """Brute force over every element of level ``n``."""
        self._check_level(n)
        if lam.level != n:
            raise GroupError(f"graph subgroup of level {lam.level} tested on level {n}")
        pairs = lam.pairs()
        return [x for x in self.elements(n) if all(self.act(x, h, a) == x for h, a in pairs)]

    def fixed_element(self, n: int, lam: GraphSubgroup) -> Elem | None:
        """Some element fixed by ``lam``, found through orbit stabilizers (fast)."""
        self._check_level(n)
        h = lam.subgroup
        target = iso_class(GSetAction(lam.hom))
        for i, mu in enumerate(self.orbits[n]):
            for g in self.group:
                c = h.conjugate(self.group.inv[g])
                if not c.issubset(mu.subgroup):
                    continue
                # x = (g, id) mu is fixed by graph(H, h -> mu.alpha(g^-1 h g))
                pulled = mu.hom.restrict(c).conjugate_by(g)
                if iso_class(GSetAction(pulled)) != target:
                    continue
                x = self.canon(n, i, g, P.identity(n))
                s = _intertwiner(pulled, lam.hom)
                # (e, s) x is fixed by graph(H, s pulled s^-1) = lam
                return self.act(x, self.group.identity, s)
        return None

    def level_size(self, n: int) -> int:
        g = self.group.order
        return sum(g * len(P.all_perms(n)) // len(lam.subgroup) for lam in self.orbits[n])


def _intertwiner(a: PermHom, b: PermHom) -> P.Perm:
    """Some ``s`` with ``s a(h) s^-1 = b(h)`` for all h (the actions are isomorphic)."""
    xa, xb = GSetAction(a), GSetAction(b)
    h = a.domain
    n = a.degree
    s = [0] * n
    used: set[int] = set()
    for orb in xa.orbits():
        p = orb[0]
        stab = xa.stabilizer(p)
        q = next(q for q in range(1, n + 1) if q not in used and xb.stabilizer(q) == stab)
        for x, img in zip(h.elements, a.images):
            s[img[p - 1] - 1] = b(x)[q - 1]
        used.update(b(x)[q - 1] for x in h.elements)
    return tuple(s)


def _generated_classes(g: Group, lam: GraphSubgroup) -> set:
    """``(L, class)`` for every graph subgroup subconjugate to ``lam``."""
    h, cls = lam.subgroup, iso_class(GSetAction(lam.hom))
    out = set()
    for l in h.subgroups:
        r = restrict_class(h, cls, l)
        for a in g:
            out.add(conjugate_class(a, l, r))
    return out


def realize_family(f: Family, minimal: bool = False) -> SymmetricSequence:
    """``S_n = coproduct over Lambda in f_n of (G x Sigma_n)/Lambda``.

    With ``minimal=True`` keep one orbit per maximal subconjugacy class,
    which has the same nonempty fixed points and far fewer elements.
    """
    bad = validate_family(f)
    if bad:
        raise GroupError("invalid family:\n" + "\n".join(str(v) for v in bad))
    levels = []
    g = f.group
    for n in range(f.cap + 1):
        lams = f.sorted_level(n)
        if minimal:
            chosen: list[GraphSubgroup] = []
            covered: set = set()
            for lam in sorted(lams, key=lambda x: (-len(x.subgroup), x.key)):
                if (lam.subgroup, iso_class(GSetAction(lam.hom))) in covered:
                    continue
                chosen.append(lam)
                covered |= _generated_classes(g, lam)
            lams = chosen
        levels.append(tuple(lams))
    return SymmetricSequence(g, f.cap, tuple(levels), family=f)

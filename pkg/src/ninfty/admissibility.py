"""Leaf permutations, admissible sets of the free operad, witnesses, and the verifier.

For a tree ``t`` of arity n and ``g`` in G, ``g . t`` either leaves the
Sigma_n-orbit of ``t`` or equals ``nu . t`` for a unique ``nu``. The ``g`` of
the first kind form ``K``, and ``p(g) = nu^-1`` is the leaf action: the graph
of ``p`` restricted to ``H <= K`` is exactly the part of ``Stab(t)`` over H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from . import perm as P
from .coefficients import CoefficientSystem, admissible_sets
from .group import GraphSubgroup, GroupError, PermHom, Subgroup
from .gsets import (GSetAction, IsoClass, are_isomorphic, class_action, class_size, coproduct,
                    induce, induce_class, iso_class, sort_class, trivial_gset)
from .indexing import IndexingSystem, Orbit, generate
from .symseq import Elem, SymmetricSequence
from .trees import (BoundLeaf, FreeLeaf, Node, Tree, enumerate_trees, eta, g_act, gamma,
                    height, labels, renumber, shape, sigma_act)


# ---------------------------------------------------------------------------
# leaf permutations

@dataclass(frozen=True)
class LeafPermGroup:
    """``LP(t) = K x Sigma_n`` together with ``p`` on K."""

    tree: Tree
    k_part: Subgroup
    p_table: dict
    degree: int

    def p(self, g: int, sigma: P.Perm | None = None) -> P.Perm:
        """``p(g, sigma) = nu^-1`` where ``(g, sigma) t = nu t``."""
        if g not in self.p_table:
            raise GroupError(f"{self.k_part.group.elem_name(g)} is not a leaf permutation")
        out = self.p_table[g]
        if sigma is not None:
            out = P.compose(out, P.inverse(sigma))
        return out

    q = p  # leaves are already numbered 1..n, so conjugating by the labelling changes nothing

    def action(self, h: Subgroup | None = None) -> GSetAction:
        h = self.k_part if h is None else h
        if not h.issubset(self.k_part):
            raise GroupError(f"{h} is not contained in K = {self.k_part}")
        return GSetAction(PermHom(h, self.degree, tuple(self.p_table[x] for x in h.elements)))


def leaf_perm_group(t: Tree, s: SymmetricSequence) -> LeafPermGroup:
    g = s.group
    base_shape = shape(t)
    base_labels = labels(t)
    n = len(base_labels)
    table = {}
    for x in g:
        u = g_act(x, t, s)
        if shape(u) != base_shape:
            continue
        nu = [0] * n
        for a, b in zip(base_labels, labels(u)):
            nu[a - 1] = b
        table[x] = P.inverse(tuple(nu))
    k = Subgroup(g, tuple(sorted(table)))
    return LeafPermGroup(t, k, table, n)


def leaf_action(t: Tree, h: Subgroup, s: SymmetricSequence) -> GSetAction:
    return leaf_perm_group(t, s).action(h)


def stabilizer_graph_subgroups(t: Tree, s: SymmetricSequence) -> list[GraphSubgroup]:
    lp = leaf_perm_group(t, s)
    return [GraphSubgroup(lp.action(h).hom) for h in lp.k_part.subgroups]


def fixes(lam: GraphSubgroup, t: Tree, s: SymmetricSequence) -> bool:
    return all(sigma_act(a, g_act(h, t, s)) == t for h, a in lam.pairs())


# ---------------------------------------------------------------------------
# the inductive decomposition

@dataclass(frozen=True)
class Piece:
    """One orbit O of the root action, with base position i fixed by K."""

    positions: tuple[int, ...]
    base: int
    stabilizer: Subgroup
    phi: GraphSubgroup
    sub: "Decomposition"


@dataclass(frozen=True)
class Decomposition:
    tree: Tree
    group: Subgroup
    beta: PermHom | None  # the root action, None for a leaf
    pieces: tuple[Piece, ...] = ()

    def assemble(self) -> GSetAction:
        """Coproduct over root orbits of the induced branch actions."""
        if isinstance(self.tree, FreeLeaf):
            return trivial_gset(self.group, 1)
        if isinstance(self.tree, BoundLeaf):
            return trivial_gset(self.group, 0)
        return coproduct(*(induce(p.sub.assemble(), self.group) for p in self.pieces))

    def root_classes(self) -> Iterator[tuple[Subgroup, IsoClass]]:
        """The classes of every root action met in the recursion."""
        if self.beta is not None:
            yield self.group, iso_class(GSetAction(self.beta))
            for p in self.pieces:
                yield from p.sub.root_classes()

    def depth(self) -> int:
        return 1 + max((p.sub.depth() for p in self.pieces), default=-1)


def root_action(t: Node, h: Subgroup, s: SymmetricSequence) -> PermHom:
    """``beta`` with ``h r = beta(h)^-1 r``; defined when H fixes the root label."""
    images = []
    for x in h.elements:
        sig, r2 = s.act_rep(x, t.r)
        if r2 != t.r:
            raise GroupError(f"{s.group.elem_name(x)} moves the root label")
        images.append(P.inverse(sig))
    return PermHom(h, t.r.level, tuple(images))


def decompose_leaf_action(t: Tree, lam: GraphSubgroup, s: SymmetricSequence) -> Decomposition:
    if not fixes(lam, t, s):
        raise GroupError(f"{lam} does not fix the tree")
    return _decompose(t, lam, s)


def _decompose(t: Tree, lam: GraphSubgroup, s: SymmetricSequence) -> Decomposition:
    h = lam.subgroup
    if not isinstance(t, Node):
        return Decomposition(t, h, None)
    beta = root_action(t, h, s)
    pieces = []
    for orb in GSetAction(beta).orbits():
        i = orb[0]
        k = GSetAction(beta).stabilizer(i)
        branch = t.children[i - 1]
        ls = sorted(labels(branch))
        rank = {x: j for j, x in enumerate(ls, 1)}
        phi_images = tuple(tuple(rank[lam.hom(x)[y - 1]] for y in ls) for x in k.elements)
        phi = GraphSubgroup(PermHom(k, len(ls), phi_images))
        pieces.append(Piece(tuple(orb), i, k, phi, _decompose(renumber(branch), phi, s)))
    return Decomposition(t, h, beta, tuple(pieces))


# ---------------------------------------------------------------------------
# admissible sets of the free operad inside a finite window

@dataclass
class RootOption:
    r: Elem
    group: Subgroup
    beta: PermHom
    orbits: list[tuple[int, Subgroup, dict[int, int]]]  # (base, stabilizer, position -> moving element)


def _root_options(s: SymmetricSequence) -> list[RootOption]:
    g = s.group
    out = []
    seen = set()
    for m in range(1, s.cap + 1):
        for r in s.representatives(m):
            fix = {}
            for x in g:
                sig, r2 = s.act_rep(x, r)
                if r2 == r:
                    fix[x] = P.inverse(sig)
            kr = Subgroup(g, tuple(sorted(fix)))
            for h in kr.subgroups:
                beta = PermHom(h, m, tuple(fix[x] for x in h.elements))
                key = (h, beta.images)
                if key in seen:
                    continue
                seen.add(key)
                act = GSetAction(beta)
                orbits = []
                for orb in act.orbits():
                    mover = {}
                    for x in h.elements:
                        mover.setdefault(act.act(x, orb[0]), x)
                    orbits.append((orb[0], act.stabilizer(orb[0]), mover))
                out.append(RootOption(r, h, beta, orbits))
    return out


def _class_key(c: IsoClass):
    return (len(c), [k.key for k in c])


@dataclass
class Window:
    """Admissible classes of trees inside the caps, with one witness tree per class."""

    seq: SymmetricSequence
    arity_cap: int
    height_cap: int
    tables: list[dict]  # tables[h][H][cls] = (tree, height), cumulative in h
    built: list = field(default_factory=list)  # every tree constructed: (tree, H, predicted class)

    def system(self, h: int | None = None) -> CoefficientSystem:
        h = self.height_cap if h is None else h
        tab = self.tables[h]
        return CoefficientSystem(self.seq.group, self.arity_cap,
                                 {k: frozenset(v) for k, v in tab.items()})

    def witness(self, h: Subgroup, cls: IsoClass) -> Tree:
        return self.tables[self.height_cap][h][cls][0]


def free_window(s: SymmetricSequence, arity_cap: int, height_cap: int,
                keep_built: bool = False) -> Window:
    """Recursive computation of the admissible sets of trees within the caps.

    A tree fixed by a graph subgroup over H has its root fixed up to the root
    action beta; each beta-orbit with base stabilizer K contributes the
    induction to H of a K-admissible class of a lower branch. Running over
    every root label, every H and every choice of branch classes gives all
    classes, and each is realised by an explicit tree.
    """
    g = s.group
    r0 = s.canon(0, s.trivial_orbit(0), g.identity, ())
    table: dict[Subgroup, dict] = {k: {(): (BoundLeaf(r0), 0)} for k in g.subgroups}
    if arity_cap >= 1:
        for k in g.subgroups:
            table[k][(k,)] = (FreeLeaf(1), 0)
    tables = [{k: dict(v) for k, v in table.items()}]
    built = []
    options = _root_options(s) if height_cap > 0 else []
    for h in range(1, height_cap + 1):
        prev = tables[-1]
        new = {k: dict(v) for k, v in prev.items()}
        for opt in options:
            pools = [sorted((c for c in prev[k] if len(mover) * class_size(k, c) <= arity_cap),
                            key=_class_key) for _, k, mover in opt.orbits]
            for choice in _choices(opt, pools, arity_cap):
                cls = sort_class(c for (_, k, _), sc in zip(opt.orbits, choice)
                                 for c in induce_class(k, sc, opt.group))
                if cls in new[opt.group] and not keep_built:
                    continue
                kids = [None] * opt.r.level
                for (base, k, mover), sc in zip(opt.orbits, choice):
                    w = prev[k][sc][0]
                    for pos, x in mover.items():
                        kids[pos - 1] = g_act(x, w, s)
                sub_heights = [prev[k][sc][1] for (_, k, _), sc in zip(opt.orbits, choice)]
                t = gamma(Node(opt.r, tuple(FreeLeaf(j) for j in range(1, opt.r.level + 1))), kids)
                if keep_built:
                    built.append((t, opt.group, cls))
                if cls not in new[opt.group]:
                    new[opt.group][cls] = (t, 1 + max(sub_heights))
        tables.append(new)
    return Window(s, arity_cap, height_cap, tables, built)


def _choices(opt: RootOption, pools, budget):
    """One class per orbit with total arity within budget."""
    sizes = [len(mover) for _, _, mover in opt.orbits]
    ks = [k for _, k, _ in opt.orbits]

    def rec(i, left):
        if i == len(pools):
            yield ()
            return
        for c in pools[i]:
            a = sizes[i] * class_size(ks[i], c)
            if a <= left:
                for rest in rec(i + 1, left - a):
                    yield (c,) + rest

    return rec(0, budget)


def admissibles_of_free_operad(s: SymmetricSequence, arity_cap: int, height_cap: int,
                               method: str = "recursive") -> CoefficientSystem:
    """Classes of leaf actions of trees with arity and height inside the caps.

    ``enumerate`` runs through every Sigma-orbit of trees literally and is
    only practical for tiny caps; ``recursive`` builds the same set through
    the root decomposition.
    """
    if method == "recursive":
        return free_window(s, arity_cap, height_cap).system()
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    g = s.group
    adm: dict[Subgroup, set] = {k: set() for k in g.subgroups}
    for t in enumerate_trees(s, arity_cap, height_cap, lex_only=True):
        lp = leaf_perm_group(t, s)
        for k in lp.k_part.subgroups:
            adm[k].add(iso_class(lp.action(k)))
    return CoefficientSystem(g, arity_cap, {k: frozenset(v) for k, v in adm.items()})


# ---------------------------------------------------------------------------
# witnesses for the generated indexing system

@dataclass(frozen=True)
class Witness:
    tree: Tree
    group: Subgroup
    height: int


class WitnessBuilder:
    """Trees realising generated orbits, following the closure derivation."""

    def __init__(self, s: SymmetricSequence, system: IndexingSystem):
        if not system.trace:
            raise GroupError("witness construction needs a system produced by generate()")
        self.seq = s
        self.system = system
        g = s.group
        self.r0 = s.canon(0, s.trivial_orbit(0), g.identity, ())
        self._memo: dict[Orbit, Tree] = {}

    def _subobject(self, t: Tree, keep: set[int]) -> Tree:
        """Cap every free leaf outside ``keep`` with the G-fixed bound leaf."""

        def walk(u):
            if isinstance(u, FreeLeaf):
                return u if u.label in keep else BoundLeaf(self.r0)
            if isinstance(u, Node):
                return Node(u.r, tuple(walk(c) for c in u.children))
            return u

        return renumber(walk(t))

    def _orbit_of_type(self, t: Tree, h: Subgroup, k: Subgroup) -> Tree:
        act = leaf_action(t, h, self.seq)
        for orb in act.orbits():
            if h.canonical(act.stabilizer(orb[0])) == k:
                return self._subobject(t, set(orb))
        raise GroupError(f"no orbit of type {h}/{k} in the leaf action")

    def orbit(self, o: Orbit) -> Tree:
        if o in self._memo:
            return self._memo[o]
        h, k = o
        step = self.system.trace.get(o)
        if step is None:
            raise GroupError(f"{h}/{k} is not in the generated system")
        s = self.seq
        if step.rule == "trivial":
            t = FreeLeaf(1)
        elif step.rule == "seed":
            sh, cls = step.detail
            lam = GraphSubgroup(class_action(sh, cls).hom)
            x = s.fixed_element(lam.level, lam)
            if x is None:
                raise GroupError(f"no generator fixed by {lam}")
            t = self._orbit_of_type(eta(x, s), h, k)
        elif step.rule == "conjugation":
            t = g_act(step.detail, self.orbit(step.premises[0]), s)
        elif step.rule == "restriction":
            parent = step.premises[0]
            t = self._orbit_of_type(self.orbit(parent), h, k)
        elif step.rule == "self_induction":
            (hh, kk), inner = step.premises
            t1 = self.orbit((hh, kk))
            t2 = self.orbit(inner)
            act = leaf_action(t1, hh, s)
            j0 = next(j for j in range(1, act.size + 1) if act.stabilizer(j) == kk)
            mover = {}
            for x in hh.elements:
                mover.setdefault(act.act(x, j0), x)
            t = gamma(t1, [g_act(mover[j], t2, s) for j in range(1, act.size + 1)])
        else:
            raise GroupError(f"unknown rule {step.rule}")
        self._memo[o] = t
        return t

    def build(self, h: Subgroup, cls: IsoClass) -> Witness:
        if not self.system.admits_class(h, cls):
            raise GroupError(f"{cls} over {h} is not in the generated system")
        s = self.seq
        parts = [self.orbit((h, k)) for k in cls]
        if not parts:
            t = BoundLeaf(self.r0)
        else:
            t = parts[0]
            if len(parts) > 1:
                if s.cap < 2:
                    raise GroupError("coproducts need a G-fixed generator at level 2")
                x2 = s.canon(2, s.trivial_orbit(2), s.group.identity, (1, 2))
                for u in parts[1:]:
                    t = gamma(eta(x2, s), [t, u])
        got = leaf_action(t, h, s)
        if iso_class(got) != cls:
            raise GroupError(f"witness realises {iso_class(got)} instead of {cls}")
        return Witness(t, h, height(t))


def witness_tree(target: GSetAction, s: SymmetricSequence, system: IndexingSystem) -> Witness:
    return WitnessBuilder(s, system).build(target.group, iso_class(target))


# ---------------------------------------------------------------------------
# the verifier

@dataclass
class Report:
    group: str
    arity_cap: int
    height_cap: int
    lines: list[str] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)  # (category, message)
    witness_heights: dict = field(default_factory=dict)
    fixed_pairs: int = 0
    mismatches: int = 0
    stabilized_at: int | None = None
    equal: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, category: str, msg: str):
        if (category, msg) in self.failures:
            return
        self.failures.append((category, msg))
        self.lines.append(f"FAIL [{category}] {msg}")

    def text(self) -> str:
        head = [f"group {self.group}, arity cap {self.arity_cap}, height cap {self.height_cap}"]
        tail = [f"result: {'PASS' if self.passed else 'FAIL'}"]
        return "\n".join(head + self.lines + tail) + "\n"


def _fmt_class(h: Subgroup, cls: IsoClass) -> str:
    if not cls:
        return f"{h}: empty"
    return f"{h}: " + " + ".join(f"{h}/{k}" for k in cls)


def verify_comb(s: SymmetricSequence, arity_cap: int, height_cap: int,
                rules=None, check_trees: bool = True) -> Report:
    """Check that the window onto the free operad's admissibles equals the generated system."""
    g = s.group
    rep = Report(g.name, arity_cap, height_cap)
    base = admissible_sets(s)
    gen = generate(base) if rules is None else generate(base, rules=rules)
    expected = gen.to_coefficients(arity_cap)
    window = free_window(s, arity_cap, height_cap, keep_built=check_trees)
    got = window.system()

    # (a) the generators' admissibles appear once trees of height 1 are allowed
    if height_cap >= 1:
        short = base.truncate(arity_cap)
        missing = short.difference(got)
        for h, c in missing:
            rep.fail("bug", f"(a) generator admissible {_fmt_class(h, c)} not realised by a tree")
        if not missing:
            rep.lines.append(f"PASS (a) all {sum(len(v) for _, v in short.items())} admissibles of A realised")

    # (b) every tree's leaf action lies in the generated system
    extra = got.difference(expected)
    for h, c in extra:
        rep.fail("bug", f"(b) tree admissible {_fmt_class(h, c)} outside the generated system")
    if check_trees:
        for t, h, cls in window.built:
            lp = leaf_perm_group(t, s)
            for k in lp.k_part.subgroups:
                lam = GraphSubgroup(lp.action(k).hom)
                d = decompose_leaf_action(t, lam, s)
                rep.fixed_pairs += 1
                if not are_isomorphic(d.assemble(), lp.action(k)):
                    rep.mismatches += 1
                for hh, rc in d.root_classes():
                    if rc not in base[hh]:
                        rep.fail("bug", f"(b) root action {_fmt_class(hh, rc)} not admissible for A")
                if not gen.admits_class(k, iso_class(lp.action(k))):
                    rep.fail("bug", f"(b) tree leaf action over {k} outside the generated system")
            if iso_class(lp.action(h)) != cls:
                rep.fail("bug", f"(b) predicted class {_fmt_class(h, cls)} differs from the tree's")
        if rep.mismatches:
            rep.fail("bug", f"(b) {rep.mismatches} decompositions fail to reassemble")
        rep.lines.append(f"{'PASS' if not rep.mismatches else 'FAIL'} (b) {len(window.built)} trees, "
                         f"{rep.fixed_pairs} fixed pairs decomposed, {rep.mismatches} mismatches")
    if not extra:
        rep.lines.append("PASS (b) no admissible outside the generated system")

    # (c) witnesses for every generated orbit within the arity cap
    builder = WitnessBuilder(s, gen)
    for o in gen.sorted_orbits():
        h, k = o
        if len(h) // len(k) > arity_cap:
            continue
        try:
            w = builder.build(h, (k,))
        except GroupError as exc:
            rep.fail("bug", f"(c) witness for {h}/{k}: {exc}")
            continue
        rep.witness_heights[o] = w.height
        if w.height > height_cap:
            rep.fail("cap artifact", f"(c) witness for {h}/{k} has height {w.height} > {height_cap}")
        else:
            rep.lines.append(f"PASS (c) {h}/{k} witnessed at height {w.height}")

    missing = expected.difference(got)
    for h, c in missing:
        deep = any(rep.witness_heights.get((h, k), 0) > height_cap for k in c)
        rep.fail("cap artifact" if deep else "bug", f"generated {_fmt_class(h, c)} not reached by trees")
    rep.equal = not missing and not extra
    if rep.equal:
        total = sum(len(v) for _, v in expected.items())
        rep.lines.append(f"PASS equality: {total} classes on both sides")

    # monotonicity in the height cap and where it stops growing
    systems = [window.system(h) for h in range(height_cap + 1)]
    for a, b in zip(systems, systems[1:]):
        if not a <= b:
            rep.fail("bug", "window is not monotone in the height cap")
    for h, sy in enumerate(systems):
        if sy == systems[-1]:
            rep.stabilized_at = h
            break
    rep.lines.append(f"window stable from height {rep.stabilized_at}")
    return rep

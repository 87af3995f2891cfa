"""Shared generators for the test modules."""

import random

from ninfty.coefficients import Family, family_closure
from ninfty.group import GraphSubgroup, enumerate_perm_homs, preset
from ninfty.gsets import class_action
from ninfty.symseq import realize_family
from ninfty.trees import arity, random_tree


def random_family(g, cap: int, rng: random.Random, max_gens: int = 3) -> Family:
    """Closure of a few random graph subgroups; often minimal, sometimes complete."""
    gens = []
    for _ in range(rng.randint(0, max_gens)):
        n = rng.randint(0, cap)
        h = rng.choice(g.subgroups)
        gens.append(GraphSubgroup(rng.choice(enumerate_perm_homs(h, n))))
    return family_closure(g, cap, gens)


def regular_sequence(name: str, cap: int = 3, minimal: bool = True):
    """Generators: the regular action of the smallest nontrivial subgroup, closed to a family."""
    g = preset(name)
    h = next((x for x in g.subgroups if len(x) > 1), g.trivial)
    lam = GraphSubgroup(class_action(h, (g.trivial,)).hom)
    return realize_family(family_closure(g, max(cap, lam.level), [lam]), minimal=minimal)


def composable(s, rng: random.Random, max_arity: int = 4):
    """A tree t with trees for each of its leaves, and trees for each of theirs."""
    def pick():
        return random_tree(s, rng, max_height=2, max_arity=max_arity)

    t = pick()
    us = [pick() for _ in range(arity(t))]
    vs = [[pick() for _ in range(arity(u))] for u in us]
    return t, us, vs

"""Combinatorial N-infinity operads for a finite group."""

from .group import (Group, GroupError, GraphSubgroup, PermHom, Subgroup, enumerate_perm_homs,
                    enumerate_subgroups, graph, make_group, subconjugate)
from .gsets import GSetAction, are_isomorphic, induce, orbit_decompose, restrict
from .coefficients import (CoefficientSystem, Family, admissible_sets, coefficients_to_family, family_closure,
                           family_to_coefficients, validate_family)
from .symseq import SymmetricSequence, realize_family
from .indexing import IndexingSystem, enumerate_all, generate, is_indexing_system
from .trees import BoundLeaf, FreeLeaf, Node, eta, gamma, g_act, sigma_act
from .admissibility import (admissibles_of_free_operad, decompose_leaf_action, leaf_perm_group,
                            verify_comb, witness_tree)

__version__ = "0.1.0"

__all__ = [
    "Group",
    "GroupError",
    "GraphSubgroup",
    "PermHom",
    "Subgroup",
    "enumerate_perm_homs",
    "enumerate_subgroups",
    "graph",
    "make_group",
    "subconjugate",
    "GSetAction",
    "are_isomorphic",
    "induce",
    "orbit_decompose",
    "restrict",
    "CoefficientSystem",
    "Family",
    "admissible_sets",
    "coefficients_to_family",
    "family_closure",
    "family_to_coefficients",
    "validate_family",
    "SymmetricSequence",
    "realize_family",
    "IndexingSystem",
    "enumerate_all",
    "generate",
    "is_indexing_system",
    "BoundLeaf",
    "FreeLeaf",
    "Node",
    "eta",
    "gamma",
    "g_act",
    "sigma_act",
    "admissibles_of_free_operad",
    "decompose_leaf_action",
    "leaf_perm_group",
    "verify_comb",
    "witness_tree",
]

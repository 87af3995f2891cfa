"""JSON documents for groups, families, indexing systems and H-sets, plus DOT export.

Elements are written by name and subgroups as lists of element names, so
documents stay readable. Every loader validates against a JSON schema first.
"""

from __future__ import annotations

import json
import re
from typing import Any

import jsonschema

from . import perm as P
from .coefficients import CoefficientSystem, Family, family_closure, validate_family
from .group import GraphSubgroup, Group, GroupError, Subgroup, extend_hom, make_group
from .gsets import GSetAction, class_size
from .indexing import IndexingSystem, generate, hasse_edges
from .symseq import SymmetricSequence


class DocumentError(GroupError):
    pass


_PERM = {"type": "array", "items": {"type": "integer", "minimum": 1}}
_SUBGROUP = {"type": "array", "items": {"type": ["string", "integer"]}}
_GROUP = {
    "oneOf": [
        {"type": "string"},
        {"type": "object", "required": ["order", "mul"],
         "properties": {"order": {"type": "integer", "minimum": 1},
                        "mul": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                        "name": {"type": "string"},
                        "elements": {"type": "array", "items": {"type": "string"}}}},
    ]
}
_GRAPH = {"type": "object", "required": ["subgroup", "alpha"],
          "properties": {"subgroup": _SUBGROUP,
                         "alpha": {"type": "object", "additionalProperties": _PERM},
                         "degree": {"type": "integer", "minimum": 0}}}

SCHEMAS = {
    "family": {"type": "object", "required": ["group", "cap", "levels"],
               "properties": {"group": _GROUP, "cap": {"type": "integer", "minimum": 0},
                              "levels": {"type": "array", "items": {"type": "array", "items": _GRAPH}},
                              "close": {"type": "boolean"}}},
    "indexing": {"type": "object", "required": ["group", "orbits"],
                 "properties": {"group": _GROUP,
                                "orbits": {"type": "array", "items": {
                                    "type": "object", "required": ["H", "K_class_rep"],
                                    "properties": {"H": _SUBGROUP, "K_class_rep": _SUBGROUP}}},
                                "close": {"type": "boolean"}}},
    "gset": {"type": "object", "required": ["group", "degree", "generators"],
             "properties": {"group": _SUBGROUP, "degree": {"type": "integer", "minimum": 0},
                            "generators": {"type": "object", "additionalProperties": _PERM}}},
}


def validate(doc: Any, kind: str) -> None:
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise DocumentError(f"{kind} document, field {where}: {exc.message}") from None


_SCALAR_ARRAY = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]", re.S)


def dumps(doc: Any) -> str:
    """Indented JSON with arrays of scalars kept on one line."""
    text = json.dumps(doc, indent=2)
    return _SCALAR_ARRAY.sub(lambda m: "[" + re.sub(r"\s*\n\s*", " ", m.group(1)) + "]", text) + "\n"


# ---------------------------------------------------------------------------
# pieces

def group_doc(g: Group) -> Any:
    return g.name if _is_preset(g) else g.to_json()


def _is_preset(g: Group) -> bool:
    try:
        return make_group(g.name) == g
    except GroupError:
        return False


def subgroup_doc(h: Subgroup) -> list[str]:
    return h.names()


def parse_subgroup(g: Group, names, field: str = "subgroup") -> Subgroup:
    try:
        els = sorted({g.element(x) for x in names})
    except GroupError as exc:
        raise DocumentError(f"{field}: {exc}") from None
    h = Subgroup(g, tuple(els))
    if h not in g.lattice.index:
        raise DocumentError(f"{field}: {names} is not a subgroup of {g.name}")
    return g.subgroups[g.lattice.index[h]]


def graph_doc(lam: GraphSubgroup) -> dict:
    g = lam.subgroup.group
    return {"subgroup": subgroup_doc(lam.subgroup), "degree": lam.level,
            "alpha": {g.elem_name(x): list(lam.hom(x)) for x in lam.subgroup.generators}}


def parse_graph(g: Group, doc: dict, level: int, field: str) -> GraphSubgroup:
    h = parse_subgroup(g, doc["subgroup"], f"{field}/subgroup")
    images = {}
    for name, p in doc["alpha"].items():
        try:
            x = g.element(name)
        except GroupError as exc:
            raise DocumentError(f"{field}/alpha: {exc}") from None
        if len(p) != level or not P.is_perm(p):
            raise DocumentError(f"{field}/alpha/{name}: not a permutation of 1..{level}")
        images[x] = tuple(p)
    if not h.issubset(g.span(images)) or not g.span(images).issubset(h):
        raise DocumentError(f"{field}/alpha: the listed elements must generate the subgroup")
    hom = extend_hom(h, level, images)
    if hom is None:
        raise DocumentError(f"{field}/alpha: images do not define a homomorphism")
    return GraphSubgroup(hom)


def gset_doc(x: GSetAction) -> dict:
    g = x.group.group
    return {"group": subgroup_doc(x.group), "degree": x.size,
            "generators": {g.elem_name(s): list(x.hom(s)) for s in x.group.generators}}


def load_group_doc(doc) -> Group:
    try:
        return make_group(doc)
    except GroupError as exc:
        raise DocumentError(f"group: {exc}") from None


# ---------------------------------------------------------------------------
# families and sequences

def family_doc(f: Family) -> dict:
    return {"group": group_doc(f.group), "cap": f.cap,
            "levels": [[graph_doc(lam) for lam in f.sorted_level(n)] for n in range(f.cap + 1)]}


def parse_family(doc: dict) -> Family:
    """Read a family; with ``"close": true`` the listed graphs are only generators."""
    validate(doc, "family")
    g = load_group_doc(doc["group"])
    cap = doc["cap"]
    if len(doc["levels"]) > cap + 1:
        raise DocumentError(f"levels: {len(doc['levels'])} levels listed for cap {cap}")
    lams = [parse_graph(g, rec, n, f"levels/{n}/{i}")
            for n, level in enumerate(doc["levels"]) for i, rec in enumerate(level)]
    if doc.get("close"):
        return family_closure(g, cap, lams)
    levels = [set() for _ in range(cap + 1)]
    for lam in lams:
        levels[lam.level].add(lam)
    f = Family(g, cap, tuple(frozenset(s) for s in levels))
    bad = validate_family(f)
    if bad:
        raise DocumentError("levels: invalid family:\n  " + "\n  ".join(map(str, bad[:10])))
    return f


def sequence_doc(s: SymmetricSequence) -> dict:
    g = s.group
    levels = []
    for n in range(s.cap + 1):
        levels.append([{"orbit": i, "stabilizer": graph_doc(lam),
                        "representatives": [r.label(g) for r in s.representatives(n) if r.orbit == i]}
                       for i, lam in enumerate(s.orbits[n])])
    out = {"group": group_doc(g), "cap": s.cap, "orbits": levels}
    if s.family is not None:
        out["family"] = family_doc(s.family)
    return out


def coefficients_doc(c: CoefficientSystem) -> dict:
    out = []
    for h, cs in c.items():
        ordered = sorted(cs, key=lambda cls: (class_size(h, cls), [k.key for k in cls]))
        out.append({"H": subgroup_doc(h), "sets": [[subgroup_doc(k) for k in cls] for cls in ordered]})
    return {"group": group_doc(c.group), "cap": c.cap, "admissible": out}


# ---------------------------------------------------------------------------
# indexing systems

def indexing_doc(i: IndexingSystem) -> dict:
    return {"group": group_doc(i.group),
            "orbits": [{"H": subgroup_doc(h), "K_class_rep": subgroup_doc(k)} for h, k in i.sorted_orbits()]}


def parse_indexing(doc: dict) -> IndexingSystem:
    """Read an indexing system; with ``"close": true`` the orbits only generate it."""
    validate(doc, "indexing")
    g = load_group_doc(doc["group"])
    orbits = []
    for n, rec in enumerate(doc["orbits"]):
        h = parse_subgroup(g, rec["H"], f"orbits/{n}/H")
        k = parse_subgroup(g, rec["K_class_rep"], f"orbits/{n}/K_class_rep")
        if not k.issubset(h):
            raise DocumentError(f"orbits/{n}: K_class_rep is not inside H")
        orbits.append((h, h.canonical(k)))
    closed = generate(orbits, g)
    if doc.get("close"):
        return closed
    given = IndexingSystem(g, frozenset(orbits) | {(h, h) for h in g.subgroups})
    if given != closed:
        problems = given.closure_violations()
        raise DocumentError("orbits: not an indexing system:\n  " + "\n  ".join(problems[:10]))
    return closed


def poset_dot(systems: list[IndexingSystem], name: str = "indexing") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box, fontname=Helvetica];"]
    for n, s in enumerate(systems):
        label = "\\n".join(f"{h}/{k}" for h, k in s.nontrivial()) or "trivial"
        lines.append(f'  s{n} [label="{label}"];')
    for a, b in hasse_edges(systems):
        lines.append(f"  s{a} -> s{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"

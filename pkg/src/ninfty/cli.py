"""Command line entry point: ``ninfty <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import serialize as S
from .admissibility import WitnessBuilder, verify_comb
from .coefficients import admissible_sets, coefficients_to_family, family_closure, family_to_coefficients
from .group import PRESETS, GraphSubgroup, Group, GroupError, Subgroup, make_group
from .gsets import class_action
from .indexing import enumerate_all, generate, hasse_edges
from .symseq import SymmetricSequence, realize_family
from .trees import to_dot, to_json


def _threads() -> int:
    raw = os.environ.get("NINFTY_THREADS", "1")
    if not raw.isdigit() or int(raw) < 1:
        raise GroupError(f"NINFTY_THREADS must be a positive integer, got {raw!r}")
    return int(raw)


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise GroupError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise GroupError(f"{path}: not JSON ({exc.msg} at line {exc.lineno})") from None


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _split_top(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def parse_subgroup_arg(g: Group, text: str) -> Subgroup:
    """A lattice index like ``3`` or element names like ``<e,s>``."""
    text = text.strip()
    if text.isdigit():
        i = int(text)
        if i >= len(g.subgroups):
            raise GroupError(f"{g.name} has subgroups 0..{len(g.subgroups) - 1}, not {i}")
        return g.subgroups[i]
    m = re.fullmatch(r"<(.*)>", text)
    if not m:
        raise GroupError(f"subgroup {text!r}: give a lattice index or <name,name,...>")
    return S.parse_subgroup(g, _split_top(m.group(1)), "subgroup")


def parse_orbit_arg(g: Group, text: str) -> tuple[Subgroup, Subgroup]:
    depth, cut = 0, None
    for i, ch in enumerate(text):
        depth += ch in "<("
        depth -= ch in ">)"
        if ch == "/" and depth == 0:
            cut = i
    if cut is None:
        raise GroupError(f"orbit {text!r}: expected H/K")
    h, k = parse_subgroup_arg(g, text[:cut]), parse_subgroup_arg(g, text[cut + 1:])
    if not k.issubset(h):
        raise GroupError(f"orbit {text!r}: K is not inside H")
    return h, h.canonical(k)


def _generators(args) -> SymmetricSequence:
    """The symmetric sequence A chosen by --in, --indexing or --regular."""
    if args.input:
        f = S.parse_family(_read_json(args.input))
        return realize_family(f, minimal=args.minimal)
    g = make_group(args.group)
    if args.indexing:
        ind = S.parse_indexing(_read_json(args.indexing))
        if ind.group != g:
            raise GroupError("--indexing document is over a different group")
        cap = args.generator_cap or g.order
        f = coefficients_to_family(ind.to_coefficients(cap))
        return realize_family(f, minimal=True)
    h = parse_subgroup_arg(g, args.regular) if args.regular else next(
        (x for x in g.subgroups if len(x) > 1), g.trivial)
    lam = GraphSubgroup(class_action(h, (g.trivial,)).hom)
    cap = max(2, lam.level, args.generator_cap or 0)
    return realize_family(family_closure(g, cap, [lam]), minimal=args.minimal)


# ---------------------------------------------------------------------------
# commands

def cmd_groups(args) -> int:
    if args.action == "list":
        if args.format == "table":
            rows = []
            for name in PRESETS:
                g = make_group(name)
                rows.append(f"{name:<10} order {g.order:>3}  subgroups {len(g.subgroups):>3}")
            _emit(args, "\n".join(rows) + "\n")
        else:
            _emit(args, S.dumps([{"name": n, "order": make_group(n).order} for n in PRESETS]))
        return 0
    g = make_group(args.group)
    doc = {"group": S.group_doc(g), "order": g.order, "elements": list(g.element_names),
           "subgroups": [{"index": i, "elements": S.subgroup_doc(h)} for i, h in enumerate(g.subgroups)],
           "classes": [[g.subgroup_index(h) for h in cls] for cls in g.lattice.classes]}
    _emit(args, S.dumps(doc))
    return 0


def cmd_indexing(args) -> int:
    g = make_group(args.group)
    systems = enumerate_all(g)
    if args.format == "dot":
        _emit(args, S.poset_dot(systems, name=re.sub(r"\W", "_", g.name)))
    elif args.format == "table":
        lines = [f"{len(systems)} indexing systems of {g.name}"]
        for n, s in enumerate(systems):
            lines.append(f"{n:>4}: " + (", ".join(f"{h}/{k}" for h, k in s.nontrivial()) or "trivial"))
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, S.dumps({"group": S.group_doc(g), "count": len(systems),
                             "systems": [S.indexing_doc(s)["orbits"] for s in systems],
                             "hasse": [list(e) for e in hasse_edges(systems)]}))
    return 0


def cmd_closure(args) -> int:
    f = S.parse_family(_read_json(args.input))
    ind = generate(family_to_coefficients(f))
    if args.format == "table":
        _emit(args, "\n".join(f"{h}/{k}" for h, k in ind.sorted_orbits()) + "\n")
    else:
        _emit(args, S.dumps(S.indexing_doc(ind)))
    return 0


def cmd_realize(args) -> int:
    ind = S.parse_indexing(_read_json(args.input))
    cap = args.cap if args.cap is not None else ind.group.order
    f = coefficients_to_family(ind.to_coefficients(cap))
    s = realize_family(f, minimal=args.minimal)
    _emit(args, S.dumps({"family": S.family_doc(f), "sequence": S.sequence_doc(s)}))
    return 0


def cmd_verify(args) -> int:
    _threads()
    s = _generators(args)
    report = verify_comb(s, args.arity_cap, args.height_cap)
    if args.format == "json":
        _emit(args, S.dumps({"group": S.group_doc(s.group), "arity_cap": args.arity_cap,
                             "height_cap": args.height_cap, "passed": report.passed,
                             "equal": report.equal, "stabilized_at": report.stabilized_at,
                             "fixed_pairs": report.fixed_pairs, "mismatches": report.mismatches,
                             "witness_heights": [{"orbit": f"{h}/{k}", "height": v}
                                                 for (h, k), v in report.witness_heights.items()],
                             "failures": [{"category": c, "message": m} for c, m in report.failures]}))
    else:
        _emit(args, report.text())
    return 0 if report.passed else 1


def cmd_witness(args) -> int:
    s = _generators(args)
    g = s.group
    h, k = parse_orbit_arg(g, args.orbit)
    ind = generate(admissible_sets(s))
    w = WitnessBuilder(s, ind).build(h, (k,))
    if args.format == "dot":
        _emit(args, to_dot(w.tree, s, name="witness"))
    else:
        _emit(args, S.dumps({"orbit": f"{h}/{k}", "height": w.height, "tree": to_json(w.tree, s)}))
    return 0


def _common_source(p):
    p.add_argument("--group", default="C2", help="preset name, e.g. C4, S3, C2xC2")
    p.add_argument("--in", dest="input", help="family JSON giving the generators")
    p.add_argument("--indexing", help="indexing-system JSON; generators realise it")
    p.add_argument("--regular", help="subgroup whose regular action generates (default: smallest nontrivial)")
    p.add_argument("--generator-cap", type=int, help="top level of the generating sequence")
    p.add_argument("--minimal", action="store_true",
                   help="realise with one orbit per maximal class instead of every graph subgroup")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ninfty", description="Indexing systems and free G-operads.")
    ap.add_argument("--out", help="write output here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("groups", help="list presets or show one group")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("--group", default="C2")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("indexing", help="enumerate all indexing systems")
    p.add_argument("action", choices=["enumerate"])
    p.add_argument("--group", required=True)
    p.add_argument("--format", choices=["json", "dot", "table"], default="json")
    p.set_defaults(func=cmd_indexing)

    p = sub.add_parser("closure", help="indexing system generated by a family's admissibles")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("realize", help="family and symmetric sequence realising an indexing system")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cap", type=int)
    p.add_argument("--minimal", action="store_true")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify-comb", help="compare free-operad admissibles with the generated system")
    _common_source(p)
    p.add_argument("--arity-cap", type=int, default=4)
    p.add_argument("--height-cap", type=int, default=3)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="a tree whose leaf action is the orbit H/K")
    _common_source(p)
    p.add_argument("--orbit", required=True, help="H/K as lattice indices (3/0) or names (<e,s>/<e>)")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.set_defaults(func=cmd_witness)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    for cap in ("arity_cap", "height_cap"):
        if getattr(args, cap, 0) is not None and getattr(args, cap, 0) < 0:
            ap.error(f"--{cap.replace('_', '-')} must be non-negative")
    try:
        return args.func(args)
    except GroupError as exc:
        print(f"ninfty: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

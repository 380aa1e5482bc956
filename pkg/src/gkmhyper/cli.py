"""The ``gkm`` command line.

Exit codes: 0 success (for ``obstruct``: a witness was found), 1 no witness
or a failed check, 2 invalid parameters, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Sequence

from . import serialize
from .families import FAMILIES, InvalidParams, reproduce_thm12, reproduce_thm13
from .toric import (CharPair, InvalidPolytope, MinorNotUnimodular, charpair_presets,
                    check_external_monodromy, gkm_from_charpair, obstruction_search, replay_witness,
                    vertex_label)
from .weightgraph import GKMError, fmt_weight, validate_axial, validate_connection

NOT_TORIC = "NOT TORIC (obstruction found)"
NO_WITNESS = "no obstruction found (consistent with toric)"

ARITY = {"bf": 1, "br": 2, "r": 2, "h": 2}


class Usage(Exception):
    """Bad parameters detected before any computation."""


def _params(fam: str, nums: Sequence[int]) -> tuple[int, ...]:
    if fam not in FAMILIES:
        raise Usage(f"unknown family {fam!r}; choose from {', '.join(sorted(FAMILIES))}")
    if len(nums) != ARITY[fam]:
        raise Usage(f"family {fam} takes {ARITY[fam]} parameter(s)")
    if any(n < 0 for n in nums):
        raise Usage("parameters must be nonnegative")
    return tuple(nums)


def _graph(args):
    params = _params(args.family, args.params)
    return FAMILIES[args.family](*params)


def _graph_text(g) -> list[str]:
    out = [f"name: {g.name}", f"rank: {g.rank}", f"valence: {g.valence}",
           f"vertices: {len(g.vertices)}"]
    for v in g.vertices:
        items = []
        for h in g.star(v):
            tgt = h.end if h.dim == 1 else "{" + ",".join(h.vertices) + "}"
            dim = "" if h.dim == 1 else f" dim {h.dim}"
            items.append(f"{tgt} {fmt_weight(h.weight)}{dim}")
        out.append(f"{v}: " + "; ".join(items))
    return out


# --- subcommands ----------------------------------------------------------------

def cmd_family(args, out) -> int:
    g = _graph(args)
    if args.format == "json":
        out(serialize.dumps(serialize.graph_to_dict(g)))
    elif args.format == "dot":
        out(serialize.graph_to_dot(g))
    else:
        out("\n".join(_graph_text(g)) + "\n")
    return 0


cmd_export = cmd_family


def cmd_obstruct(args, out) -> int:
    g = _graph(args)
    if args.max_cycle_len < 3 or args.max_growth < 1:
        raise Usage("--max-cycle-len must be >= 3 and --max-growth >= 1")
    w, stats = obstruction_search(g, args.max_cycle_len, args.max_growth)
    if w is not None and not replay_witness(g, w):
        raise AssertionError("witness does not replay")
    verdict = NOT_TORIC if w is not None else NO_WITNESS
    if args.format == "json":
        out(serialize.dumps({"graph": g.name, "verdict": verdict,
                             "witness": None if w is None else w.to_dict(),
                             "seeds": stats.seeds, "inconclusive": stats.inconclusive,
                             "safe_edges": stats.safe_edges,
                             "max_cycle_len": args.max_cycle_len, "max_growth": args.max_growth}))
    else:
        lines = [f"graph: {g.name}"]
        if w is not None:
            lines += w.lines()
        lines.append(f"searched {stats.seeds} face seeds, {stats.inconclusive} inconclusive")
        lines.append(verdict)
        out("\n".join(lines) + "\n")
    return 0 if w is not None else 1


def _ring_args(args) -> tuple[str, int, int]:
    if args.family not in ("br", "r"):
        raise Usage("cohomology is available for families br and r")
    i, j = _params(args.family, args.params)
    return args.family, i, j


def cmd_cohomology(args, out) -> int:
    from .cohomology import presentation

    fam, i, j = _ring_args(args)
    p = presentation(fam, i, j)
    ring = p.ring
    if args.format == "json":
        d = {"family": fam, "i": i, "j": j, "graded_ranks": ring.graded_ranks(),
             "ring": ring.to_dict()}
        if args.relations:
            d["presentation"] = p.relation_lines()
        out(serialize.dumps(d))
        return 0
    lines = [f"{fam.upper()}_{{{i},{j}}}: rank {ring.rank}",
             "graded ranks: " + " ".join(str(r) for r in ring.graded_ranks()),
             "basis: " + ", ".join(ring.names)]
    if args.relations:
        lines += p.relation_lines()
    out("\n".join(lines) + "\n")
    return 0


def cmd_betti(args, out) -> int:
    from .cohomology import hd

    if args.family not in ("bf", "br", "r"):
        raise Usage("Betti numbers are available for families bf, br and r")
    params = _params(args.family, args.params)
    i, j = (params[0], 0) if args.family == "bf" else params
    b = list(hd(args.family, i, j))
    if args.format == "json":
        out(serialize.dumps({"family": args.family, "params": list(params), "betti": b,
                             "euler": sum(b)}))
    else:
        out(" ".join(str(x) for x in b) + "\n")
    return 0


def _load_charpair(args) -> CharPair:
    if args.preset:
        presets = charpair_presets()
        if args.preset not in presets:
            raise Usage(f"unknown preset {args.preset!r}; choose from {', '.join(sorted(presets))}")
        return presets[args.preset]
    if not args.file:
        raise Usage("give a JSON file or --preset")
    try:
        return CharPair.from_dict(serialize.load_json(args.file))
    except (InvalidPolytope, MinorNotUnimodular, serialize.FormatError) as exc:
        raise Usage(str(exc)) from None


def cmd_toric(args, out) -> int:
    cp = _load_charpair(args)
    report: dict = {"unimodular": cp.is_unimodular()}
    lines = [f"vertex minors unimodular: {'yes' if report['unimodular'] else 'no'}"]
    if not report["unimodular"]:
        report["valid"] = False
        lines.append("characteristic pair rejected")
        out(serialize.dumps(report) if args.format == "json" else "\n".join(lines) + "\n")
        return 1
    g, c = gkm_from_charpair(cp)
    axial = validate_axial(g)
    conn = validate_connection(g, c)
    bad_faces = []
    faces = [fs for fs in cp.polytope.faces() if 0 < len(fs) < cp.polytope.dim]
    for fs in faces:
        verts = [vertex_label(v) for v in cp.polytope.face_vertices(fs)]
        if not check_external_monodromy(g, c, verts, args.max_cycle_len):
            bad_faces.append(sorted(fs))
    report.update({"vertices": len(g.vertices), "valence": g.valence,
                   "axial_violations": [str(v) for v in axial],
                   "connection_violations": [str(v) for v in conn.violations],
                   "faces_checked": len(faces), "faces_failing": bad_faces})
    report["valid"] = not (axial or conn.violations or bad_faces)
    lines += [f"GKM graph: {len(g.vertices)} vertices, valence {g.valence}",
              f"axial function: {'ok' if not axial else f'{len(axial)} violation(s)'}",
              f"connection: {'ok' if not conn.violations else f'{len(conn.violations)} violation(s)'}",
              f"external-edge monodromy on {len(faces)} proper faces (cycles <= {args.max_cycle_len}): "
              + ("identity" if not bad_faces else f"fails on {len(bad_faces)}")]
    if args.format == "json":
        out(serialize.dumps(report))
    else:
        out("\n".join(lines) + "\n")
    if not report["valid"]:
        # a unimodular pair always yields a valid graph; anything else is a bug
        print("invariant violation: unimodular characteristic pair failed validation", file=sys.stderr)
        return 3
    return 0


def cmd_reproduce(args, out) -> int:
    if len(args.params) != 2:
        raise Usage("reproduce takes two parameters i j")
    i, j = args.params
    if not i > j >= 2:
        raise Usage("needs i > j >= 2")
    if args.argument == "thm1.2":
        w = reproduce_thm12(i, j, args.k)
        g = FAMILIES["br"](i, j)
    else:
        w = reproduce_thm13(i, j)
        g = FAMILIES["r"](i, j)
    replayed = replay_witness(g, w)
    if not replayed:
        raise AssertionError("reproduced witness does not replay")
    if args.format == "json":
        out(serialize.dumps({"argument": args.argument, "graph": g.name, "verdict": NOT_TORIC,
                             "witness": w.to_dict(), "replayed": replayed}))
    else:
        out("\n".join([f"graph: {g.name}"] + w.lines() + ["forced steps replayed: yes", NOT_TORIC]) + "\n")
    return 0


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gkm", description="Weight hypergraphs, toric obstructions and "
                                "cohomology of the BF, BR and R families.")
    sub = p.add_subparsers(dest="command", required=True)

    def fam(sp, formats=("text", "json")):
        sp.add_argument("family", help="bf, br, r or h")
        sp.add_argument("params", nargs="+", type=int)
        sp.add_argument("--format", choices=formats, default=formats[0])

    fam(sub.add_parser("family", help="build and print a family's weight hypergraph"),
        ("text", "json", "dot"))
    fam(sub.add_parser("export", help="write a weight hypergraph as JSON or DOT"), ("json", "dot"))
    ob = sub.add_parser("obstruct", help="search for a monodromy obstruction")
    fam(ob)
    ob.add_argument("--max-cycle-len", type=int, default=6)
    ob.add_argument("--max-growth", type=int, default=64)
    co = sub.add_parser("cohomology", help="integral cohomology ring as an annihilator quotient")
    fam(co)
    co.add_argument("--relations", action="store_true")
    fam(sub.add_parser("betti", help="even Betti numbers"))
    to = sub.add_parser("toric", help="characteristic pair checks")
    to.add_argument("action", choices=["check"])
    to.add_argument("file", nargs="?")
    to.add_argument("--preset", help="one of br21, br22, r22, r13")
    to.add_argument("--max-cycle-len", type=int, default=8)
    to.add_argument("--format", choices=("text", "json"), default="text")
    re = sub.add_parser("reproduce", help="replay a non-toricity argument step by step")
    re.add_argument("argument", choices=["thm1.2", "thm1.3"])
    re.add_argument("params", nargs=2, type=int)
    re.add_argument("--k", type=int, default=0, help="triangle offset (thm1.2 only)")
    re.add_argument("--format", choices=("text", "json"), default="text")
    return p


COMMANDS: dict[str, Callable] = {"family": cmd_family, "export": cmd_export, "obstruct": cmd_obstruct,
                                 "cohomology": cmd_cohomology, "betti": cmd_betti, "toric": cmd_toric,
                                 "reproduce": cmd_reproduce}


def run(argv: Sequence[str] | None = None, out: Callable[[str], object] | None = None) -> int:
    out = out or sys.stdout.write
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (Usage, InvalidParams) as exc:
        print(f"gkm: {exc}", file=sys.stderr)
        return 2
    except (GKMError, AssertionError) as exc:
        print(f"gkm: invariant violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())

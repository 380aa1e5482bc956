"""JSON and DOT forms of weight hypergraphs; JSON loading."""

from __future__ import annotations

import json
from typing import Any

from .weightgraph import GKMError, WeightHypergraph


class FormatError(GKMError):
    pass


def graph_to_dict(g: WeightHypergraph) -> dict[str, Any]:
    hyper = [{"vertices": list(vs), "dim": dim, "weight": list(w)} for vs, dim, w in g.hyperedge_classes()]
    pairs = [{"from": e.origin, "to": e.end, "weight": list(e.weight)} for e in g.directed_edges()]
    d = {"name": g.name, "rank": g.rank, "valence": g.valence, "vertices": list(g.vertices),
         "hyperedges": hyper, "directed_pairs": pairs}
    if g.has_tangent:
        d["tangent"] = {v: [list(w) for w in g.tangent_weights(v)] for v in g.vertices}
    return d


def graph_from_dict(d: dict[str, Any]) -> WeightHypergraph:
    try:
        edges = [(p["from"], p["to"], tuple(int(x) for x in p["weight"])) for p in d.get("directed_pairs", [])]
        hyper = [(h["vertices"], int(h["dim"]), tuple(int(x) for x in h["weight"]))
                 for h in d["hyperedges"] if int(h["dim"]) >= 2]
        tangent = d.get("tangent")
        if tangent is not None:
            tangent = {v: [tuple(w) for w in ws] for v, ws in tangent.items()}
        return WeightHypergraph.from_parts(int(d["rank"]), [str(v) for v in d["vertices"]], edges, hyper,
                                           valence=int(d["valence"]), tangent=tangent,
                                           name=str(d.get("name", "")))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed weight hypergraph: {exc}") from None


def fmt_vec(w) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


def graph_to_dot(g: WeightHypergraph) -> str:
    """Undirected edge graph; labels are weights seen from the first endpoint."""
    lines = [f'graph "{g.name or "G"}" {{']
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for vs, dim, w in g.hyperedge_classes():
        if dim == 1:
            lines.append(f'  "{vs[0]}" -- "{vs[1]}" [label="{fmt_vec(w)}"];')
    for vs, dim, w in g.hyperedge_classes():
        if dim >= 2:
            lines.append(f"  // hyperedge dim={dim} weight={fmt_vec(w)} on " + " ".join(vs))
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None

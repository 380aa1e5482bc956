import json

import pytest

from gkmhyper.families import br_graph, hij_graph, r_graph
from gkmhyper.serialize import FormatError, graph_from_dict, graph_to_dict, graph_to_dot, load_json
from gkmhyper.weightgraph import validate_axial

from conftest import scope_graphs


def _same(a, b):
    assert a.rank == b.rank and a.valence == b.valence and a.vertices == b.vertices
    for v in a.vertices:
        assert a.star(v) == b.star(v)
        assert a.tangent_weights(v) == b.tangent_weights(v)


def test_json_round_trip(small_graphs):
    for g in small_graphs:
        d = graph_to_dict(g)
        back = graph_from_dict(json.loads(json.dumps(d)))
        _same(g, back)
        assert validate_axial(back) == []


def test_hyperedges_listed_once():
    d = graph_to_dict(br_graph(3, 2))
    keys = [tuple(h["vertices"]) for h in d["hyperedges"]]
    assert len(keys) == len(set(keys))
    assert len(d["directed_pairs"]) == 2 * sum(1 for h in d["hyperedges"] if h["dim"] == 1)


def test_malformed_json():
    with pytest.raises(FormatError):
        graph_from_dict({"rank": 1})
    with pytest.raises(FormatError):
        load_json("/nonexistent/graph.json")


def test_dot_is_deterministic_and_labelled():
    g = r_graph(2, 2)
    a, b = graph_to_dot(g), graph_to_dot(r_graph(2, 2))
    assert a == b
    assert a.startswith('graph "R_2,2" {') and a.rstrip().endswith("}")
    edges = [l for l in a.splitlines() if " -- " in l]
    assert len(edges) == len(g.directed_edges()) // 2
    assert all("label=" in l for l in edges)


def test_dot_mentions_hyperedges():
    assert "// hyperedge dim=2" in graph_to_dot(br_graph(3, 2))
    assert "// hyperedge" not in graph_to_dot(hij_graph(1, 1))

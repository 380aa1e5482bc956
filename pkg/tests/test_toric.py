from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from gkmhyper.families import bf_graph, br_graph, br_partial_connection, r_graph
from gkmhyper.iso import check_equivalence, find_equivalence
from gkmhyper.toric import (CharPair, ClosureNotValent, InvalidFace, InvalidPolytope,
                            MinorNotUnimodular, SearchStats, SimplePolytope, charpair_presets,
                            check_external_monodromy, cycle_obstruction,
                            face_exclusion_obstruction, gkm_from_charpair, induced_face,
                            obstruction_search, polytope_cube, polytope_product, polytope_simplex,
                            polytope_truncate, replay_witness, span_face, unique_connection,
                            vertex_label)
from gkmhyper.weightgraph import (NotDefinite, WeightHypergraph, is_definite_at, validate_axial,
                                  validate_connection)

CUBE3 = CharPair(polytope_cube(3), [[1, -1, 0, 0, 0, 0], [0, 0, 1, -1, 0, 0], [0, 0, 0, 0, 1, -1]])
P2 = CharPair(polytope_simplex(2), [[1, 0, -1], [0, 1, -1]])


def test_polytope_counts():
    c = polytope_cube(3)
    assert (c.nfacets, len(c.vertices)) == (6, 8)
    t = polytope_truncate(c, {3, 5})
    assert (t.nfacets, len(t.vertices)) == (7, 10)
    s = polytope_simplex(3)
    assert (s.nfacets, len(s.vertices)) == (4, 4)
    prod = polytope_product(polytope_cube(2), polytope_simplex(1))
    assert sorted(prod.vertices) == sorted(polytope_cube(3).vertices)


def test_truncating_a_vertex_of_the_simplex():
    t = polytope_truncate(polytope_simplex(2), {0, 1})
    assert (t.nfacets, len(t.vertices)) == (4, 4)


def test_invalid_polytopes():
    with pytest.raises(InvalidFace):
        polytope_truncate(polytope_cube(2), {0, 1})
    with pytest.raises(InvalidPolytope):
        SimplePolytope(2, 4, [(0, 2), (0, 3), (1, 2)])


def test_non_unimodular_minor():
    with pytest.raises(MinorNotUnimodular):
        gkm_from_charpair(CharPair(polytope_simplex(2), [[2, 0, -1], [0, 1, -1]]))
    with pytest.raises(MinorNotUnimodular):
        CharPair(polytope_simplex(2), [[1, 0], [0, 1]])


def test_charpair_json_round_trip():
    for cp in charpair_presets().values():
        assert CharPair.from_dict(cp.to_dict()).to_dict() == cp.to_dict()
    with pytest.raises(InvalidPolytope):
        CharPair.from_dict({"dim": 2})


@pytest.mark.parametrize("name", ["br21", "br22", "r22", "r13"])
def test_preset_graphs(name):
    cp = charpair_presets()[name]
    g, c = gkm_from_charpair(cp)
    assert validate_axial(g) == []
    assert validate_connection(g, c).violations == []
    assert all(is_definite_at(g, e) for e in g.directed_edges())
    u = unique_connection(g)
    assert {e: dict(m) for e, m in u.maps.items()} == {e: dict(m) for e, m in c.maps.items()}


def test_preset_sizes():
    p = charpair_presets()
    assert len(gkm_from_charpair(p["br22"])[0].vertices) == 8
    assert len(gkm_from_charpair(p["r22"])[0].vertices) == 10


def test_p2_from_charpair():
    g, _ = gkm_from_charpair(P2)
    h = WeightHypergraph.from_parts(2, ["a", "b", "c"], [
        ("a", "b", (1, 0)), ("a", "c", (0, 1)), ("b", "a", (-1, 0)), ("b", "c", (-1, 1)),
        ("c", "a", (0, -1)), ("c", "b", (1, -1))])
    assert find_equivalence(g, h) is not None


def test_unique_connection_rejects_indefinite():
    g = WeightHypergraph.from_parts(2, ["a", "b", "c", "d"], [
        ("a", "b", (1, 0)), ("a", "c", (0, 1)), ("a", "d", (2, 1)),
        ("b", "a", (-1, 0)), ("c", "a", (0, -1)), ("d", "a", (-2, -1))], valence=3)
    # at a, weights (0,1) and (2,1) differ by a multiple of (1,0): same affine line
    with pytest.raises(NotDefinite):
        unique_connection(g)


def test_span_face_matches_polytope_faces():
    for cp in [CUBE3, *charpair_presets().values()]:
        g, c = gkm_from_charpair(cp)
        p = cp.polytope
        for v in p.vertices:
            x = vertex_label(v)
            star = sorted(g.star(x))
            for r in range(1, p.dim + 1):
                for S in combinations(star, r):
                    face = span_face(g, c, x, S, r)
                    # the facets missing from the spanned edges cut out the face
                    keep = set(v)
                    for e in S:
                        keep -= set(v) - set(int(t) for t in e.end.split("."))
                    expected = {vertex_label(w) for w in p.face_vertices(keep)}
                    assert face.vertices == expected


def test_span_face_rejects_bad_input():
    g, c = gkm_from_charpair(CUBE3)
    x = g.vertices[0]
    e = g.star(x)[0]
    with pytest.raises(ClosureNotValent):
        span_face(g, c, x, [e, e], 2)


def test_external_monodromy_on_all_faces():
    for cp in [CUBE3, *charpair_presets().values()]:
        g, c = gkm_from_charpair(cp)
        for fs in cp.polytope.faces():
            verts = [vertex_label(v) for v in cp.polytope.face_vertices(fs)]
            assert check_external_monodromy(g, c, verts, 8)


def test_triangle_fails_external_monodromy():
    g = br_graph(3, 2)
    c = br_partial_connection(3, 2, g)
    assert not check_external_monodromy(g, c, induced_face(g, ["000,0", "000,1", "000,2"]), 3)


def test_cycle_engine_examples():
    w = cycle_obstruction(br_graph(3, 2), 6)
    assert w is not None and replay_witness(br_graph(3, 2), w)
    assert cycle_obstruction(br_graph(2, 2), 6) is None
    for cp in [CUBE3, *charpair_presets().values()]:
        assert cycle_obstruction(gkm_from_charpair(cp)[0], 6) is None


def test_face_engine_examples():
    g = r_graph(3, 2)
    w = face_exclusion_obstruction(g, 3)
    assert w is not None and w.kind == "face-exclusion" and replay_witness(g, w)
    assert face_exclusion_obstruction(r_graph(2, 2), 2) is None
    cube = gkm_from_charpair(CUBE3)[0]
    for r in (1, 2):
        assert face_exclusion_obstruction(cube, r) is None


def test_face_engine_rejects_bad_r():
    with pytest.raises(ValueError):
        face_exclusion_obstruction(r_graph(3, 2), 4)


def test_no_witness_on_bott_towers():
    for n in range(1, 5):
        w, _ = obstruction_search(bf_graph(n))
        assert w is None


def test_threaded_search_is_deterministic():
    for g in [br_graph(4, 2), r_graph(4, 3), r_graph(3, 2)]:
        w1, s1 = obstruction_search(g, threads=1)
        w2, s2 = obstruction_search(g, threads=3)
        assert w1 == w2


def test_tampered_witness_fails_replay():
    g = r_graph(3, 2)
    w = face_exclusion_obstruction(g, 3)
    from dataclasses import replace
    assert not replay_witness(g, replace(w, transcript=w.transcript[:-1]))
    g = br_graph(3, 2)
    w = cycle_obstruction(g, 6)
    assert not replay_witness(g, replace(w, image=w.external_edge))


@given(st.integers(0, 5), st.integers(0, 3))
@settings(max_examples=20, deadline=None)
def test_stats_are_counted(i, j):
    if i + j < 2:
        return
    stats = SearchStats()
    g = r_graph(i, j)
    if g.valence < 3:
        return
    face_exclusion_obstruction(g, 2, stats=stats)
    assert stats.seeds >= 0 and stats.inconclusive <= stats.seeds


@pytest.mark.parametrize("name,family", [("br21", br_graph(2, 1)), ("br22", br_graph(2, 2)),
                                         ("r22", r_graph(2, 2)), ("r13", r_graph(1, 3))])
def test_presets_equivalent_to_families(name, family):
    g, _ = gkm_from_charpair(charpair_presets()[name])
    eq = find_equivalence(g, family)
    assert eq is not None and check_equivalence(g, family, eq)

"""The nine acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the pytest terminal summary and
printed when this file is run as a script) and then asserts the criterion
literally.  Two criteria fail as stated; their lines carry the analysis.
"""

from __future__ import annotations

import sys
from collections import Counter
from itertools import product

import sympy

from gkmhyper.cohomology import (RingMap, annihilator, blowup_ring, hd, hd_br_recursive,
                                 hd_r_recursive, ideal, is_palindromic, presentation_br,
                                 presentation_r, preset_r22, ring_bf, ring_tensor)
from gkmhyper.families import (InvalidParams, bf_graph, bits, br_graph, br_partial_connection,
                               br_vertex, hij_graph, r_graph, r_partial_connection, r_vertex,
                               reproduce_thm12, reproduce_thm13)
from gkmhyper.iso import check_equivalence, find_equivalence
from gkmhyper.toric import (charpair_presets, check_external_monodromy, gkm_from_charpair,
                            obstruction_search, replay_witness, vertex_label)
from gkmhyper.weightgraph import (EdgePath, NoAdmissibleMatching, brute_force_transports,
                                  forced_connection, forced_transport, is_definite_at,
                                  parallel_transport, validate_axial, validate_connection)

try:
    from conftest import ACCEPTANCE, scope_graphs
except ImportError:  # run as a script from elsewhere
    sys.path.insert(0, __file__.rsplit("/", 1)[0])
    from conftest import ACCEPTANCE, scope_graphs

PROOF_RANGE = [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (5, 4)]


def record(n: int, ok: bool, title: str, detail: str = "") -> None:
    line = f"criterion {n} {'PASS' if ok else 'FAIL'}: {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE[n] = line
    print(line)


# --- 1 ------------------------------------------------------------------------------

def test_criterion_1_triangle_monodromy():
    bad = []
    for i, j in PROOF_RANGE:
        g = br_graph(i, j)
        table = br_partial_connection(i, j, g)
        d = i - j
        for k in range(j - 1):
            w = reproduce_thm12(i, j, k)
            start = g.edge(br_vertex(bits(i), k), br_vertex(bits(i, k + 1 + d), k))
            goal = g.edge(br_vertex(bits(i), k), br_vertex(bits(i, k + 2 + d), k))
            tri = EdgePath(tuple(w.path))
            by_table = parallel_transport(g, table, tri, start)
            by_force = start
            for e in tri.edges:
                by_force = forced_transport(g, e)[by_force]
            ok = (w.external_edge == start and w.image == goal and by_table == goal
                  and by_force == goal and replay_witness(g, w))
            if not ok:
                bad.append((i, j, k))
    record(1, not bad, "triangle monodromy moves E_{0,k}^{1_{k+1+(i-j)},k} to E_{0,k}^{1_{k+2+(i-j)},k}",
           f"all k for {PROOF_RANGE}" if not bad else f"mismatch at {bad}")
    assert not bad


# --- 2 ------------------------------------------------------------------------------

def test_criterion_2_face_exclusion():
    bad = []
    for i, j in PROOF_RANGE:
        g = r_graph(i, j)
        w = reproduce_thm13(i, j)
        target = r_vertex(bits(i), bits(j, j - 1, j))
        ok = (w.excluded_vertex == target and w.reaching_edge.end == target
              and w.excluding_edge == g.edge(w.base_vertex, target) and replay_witness(g, w))
        # the table agrees with forced transport on every step it used
        table = r_partial_connection(i, j, g)
        for s in w.transcript:
            if s.along in table and table.apply(s.along, s.source) != s.target:
                ok = False
        if not ok:
            bad.append((i, j))
    record(2, not bad, "forced 3-face closure reaches the excluded vertex x_{0,1_{j-1}+1_j}",
           f"{PROOF_RANGE}" if not bad else f"mismatch at {bad}")
    assert not bad


# --- 3 ------------------------------------------------------------------------------

def test_criterion_3_obstruction_table():
    wrong, inconclusive, cells = [], [], 0
    for i, j in product(range(9), repeat=2):
        if not (0 <= j <= i and i + j <= 8):
            continue
        for fam, build in (("BR", br_graph), ("R", r_graph)):
            try:
                g = build(i, j)
            except InvalidParams:
                continue
            if (fam == "BR" and i == 0) or (fam == "R" and i + j < 2):
                continue
            cells += 1
            w, stats = obstruction_search(g)
            expected = i > j >= 2
            if (w is not None) != expected or (w is not None and not replay_witness(g, w)):
                wrong.append(f"{fam}_{i},{j}")
            if w is None and stats.inconclusive:
                inconclusive.append(f"{fam}_{i},{j}:{stats.inconclusive}")
    detail = f"{cells} cells, witnesses exactly at i > j >= 2"
    if inconclusive:
        detail += f"; face seeds hitting the growth bound on witness-free cells: {', '.join(inconclusive)}"
    record(3, not wrong, "obstruction engines versus ground truth", detail if not wrong else f"wrong: {wrong}")
    assert not wrong


# --- 4 ------------------------------------------------------------------------------

STATED_WEIGHTS = {
    "111,0": [(1, -1, 0), (-1, 0, 0), (1, -1, 0), (0, 1, -1)],
    "111,1": [(-1, 0, 0), (1, -1, 0), (0, 1, -1), (-1, 1, 0)],
    "101,0": [(1, -1, 0), (-1, 0, 0), (-1, 1, 0), (1, 0, -1)],
    "101,1": [(-1, 0, 0), (-1, 1, 0), (1, 0, -1), (-1, 1, 0)],
}


def test_criterion_4_weights():
    g = br_graph(3, 2)
    bad = [v for v, ws in STATED_WEIGHTS.items() if Counter(g.tangent_weights(v)) != Counter(ws)]
    record(4, not bad, "BR_{3,2} weights at x_{111,0}, x_{111,1}, x_{101,0}, x_{101,1}",
           "multisets equal" if not bad else f"differ at {bad}")
    assert not bad


# --- 5 ------------------------------------------------------------------------------

def _ambient22():
    return ring_tensor(ring_bf(2, "x"), ring_bf(2, "y"))


def _sympy_check_kills(expr: str, x: str) -> bool:
    """Independent check in Z[x1,x2,y1,y2] modulo the BF relations."""
    x1, x2, y1, y2 = sympy.symbols("x1 x2 y1 y2")
    G = sympy.groebner([x1 ** 2, x2 ** 2 - x1 * x2, y1 ** 2, y2 ** 2 - y1 * y2],
                       x1, x2, y1, y2, order="grevlex")
    env = {"x1": x1, "x2": x2, "y1": y1, "y2": y2}
    prod = sympy.expand(sympy.sympify(expr.replace("^", "**"), locals=env) *
                        sympy.sympify(x, locals=env))
    return G.reduce(prod)[1] == 0


def test_criterion_5_annihilators():
    a = _ambient22()
    stated = ideal(a, ["(x2 - x1)*(y2 - y1)", "x2^2 + x2*y2 + y2^2"])
    ann = annihilator(a, "x2 + y2")
    part_a = stated == ann
    q = presentation_br(3, 2).ring
    part_b = q.parse("x2*y^2 - x3*y^2").is_zero() and q.parse("x3^3 - x3^2*y + x3*y^2").is_zero()
    notes = []
    if not part_a:
        killed = _sympy_check_kills("x2^2 + x2*y2 + y2^2", "x2 + y2")
        notes.append("Ann(x2+y2) differs from the stated ideal: x2^2+x2*y2+y2^2 is "
                     f"{'' if killed else 'not '}killed by x2+y2 (checked independently by Groebner reduction)")
        if stated == annihilator(a, "x2 - y2"):
            notes.append("the stated generators give exactly Ann(x2-y2)")
        fixed = ideal(a, ["(x2 - x1)*(y2 - y1)", "x2^2 - x2*y2 + y2^2"])
        if fixed == ann:
            notes.append("Ann(x2+y2) = ((x2-x1)(y2-y1), x2^2-x2*y2+y2^2)")
    notes.append(f"BR_{{3,2}} relations {'hold' if part_b else 'fail'} in the quotient")
    record(5, part_a and part_b, "annihilator ideals", "; ".join(notes))
    assert part_a and part_b


# --- 6 ------------------------------------------------------------------------------

def test_criterion_6_betti_cross_checks():
    bad = []
    cells = 0
    for i, j in product(range(9), repeat=2):
        if i + j > 8:
            continue
        cases = []
        if i >= 1 or j >= 2:
            cases.append(("br", hd_br_recursive, br_graph))
        if i + j >= 2:
            cases.append(("r", hd_r_recursive, r_graph))
        for fam, rec, build in cases:
            cells += 1
            p = hd(fam, i, j)
            if p != rec(i, j) or not is_palindromic(p) or sum(p) != len(build(i, j).vertices):
                bad.append(f"{fam}_{i},{j}")
    specific = sum(hd("br", 3, 2)) == 17 and sum(hd("r", 2, 2)) == 10
    ok = not bad and specific
    record(6, ok, "closed forms = blow-up recursions, palindromic, Euler characteristic = fixed points",
           f"{cells} cells; 17 for BR_{{3,2}}, 10 for R_{{2,2}}" if ok else f"failures {bad}")
    assert ok


# --- 7 ------------------------------------------------------------------------------

def test_criterion_7_blowup_isomorphism():
    b = blowup_ring(preset_r22()).ring
    q = presentation_r(2, 2).ring
    stated = RingMap(q, b, {"x1": b.parse("x1"), "y1": b.parse("x1 + v"),
                            "y2": b.parse("y1"), "x2": b.parse("y2")})
    ok = b.rank == q.rank == 10 and stated.is_isomorphism()
    if ok:
        detail = "bijective ring map on the rank-10 basis"
    else:
        probs = stated.problems()
        found = RingMap(q, b, {"x1": b.parse("x1"), "y1": b.parse("y1"), "y2": b.parse("y2"),
                               "x2": b.parse("x1 + y2 + v")})
        sq = b.parse("(x1 + v)^2")
        detail = (f"the stated substitution is not multiplicative ({len(probs)} failing basis products; "
                  f"y1^2 = 0 in the quotient but (x1 + v)^2 = {sq} in the blow-up ring); the rings are isomorphic: x1, y1, y2, x2 -> x1, y1, y2, x1 + y2 + v "
                  f"is {'a verified' if found.is_isomorphism() else 'NOT an'} isomorphism")
    record(7, ok, "blow-up ring of R_{2,2} versus the annihilator quotient", detail)
    assert ok


# --- 8 ------------------------------------------------------------------------------

def test_criterion_8_charpairs():
    families = {"br21": br_graph(2, 1), "br22": br_graph(2, 2), "r22": r_graph(2, 2), "r13": r_graph(1, 3)}
    bad, restricted = [], []
    for name, cp in charpair_presets().items():
        if not cp.is_unimodular():
            bad.append(f"{name}: minors")
            continue
        g, c = gkm_from_charpair(cp)
        if validate_axial(g) or validate_connection(g, c).violations:
            bad.append(f"{name}: graph")
        fam = families[name]
        eq = find_equivalence(g, fam)
        if eq is None or not check_equivalence(g, fam, eq):
            bad.append(f"{name}: not equivalent to {fam.name}")
        elif g.rank != fam.rank:
            restricted.append(f"{fam.name} (rank {g.rank} -> {fam.rank})")
        for fs in cp.polytope.faces():
            verts = [vertex_label(v) for v in cp.polytope.face_vertices(fs)]
            if not check_external_monodromy(g, c, verts, 8):
                bad.append(f"{name}: monodromy on face {sorted(fs)}")
    detail = "unimodular, valid, monodromy identity on all faces, graphs match the families"
    if restricted:
        detail += ("; the family actions have smaller rank, so these match through a surjective "
                   "cocharacter restriction rather than a lattice automorphism: " + ", ".join(restricted))
    record(8, not bad, "toric characteristic pairs", detail if not bad else "; ".join(bad))
    assert not bad


# --- 9 ------------------------------------------------------------------------------

def test_criterion_9_property_suites():
    graphs = scope_graphs(7) + [bf_graph(n) for n in (5, 6)] + [hij_graph(2, 3), hij_graph(3, 3)]
    graphs += [gkm_from_charpair(cp)[0] for cp in charpair_presets().values()]
    problems = []
    edges = 0
    for g in graphs:
        for e in g.directed_edges():
            if not is_definite_at(g, e):
                continue
            edges += 1
            try:
                forced = [forced_transport(g, e)]
            except NoAdmissibleMatching:
                forced = []
            if brute_force_transports(g, e) != forced:
                problems.append(f"{g.name} {e.name}")
        c = forced_connection(g)
        if validate_connection(g, c).violations:
            problems.append(f"{g.name}: forced connection")
        for e in c.domain():
            r = g.reverse(e)
            if r in c and any(parallel_transport(g, c, (e, r), h) != h for h in g.star(e.origin)):
                problems.append(f"{g.name}: round trip along {e.name}")
    tables = 0
    for i, j in PROOF_RANGE:
        for build, table in ((br_graph, br_partial_connection), (r_graph, r_partial_connection)):
            g = build(i, j)
            t = table(i, j, g)
            tables += 1
            if validate_connection(g, t).violations:
                problems.append(f"{g.name}: partial connection")
    record(9, not problems, "forced transport = brute force; connection axioms; round trips",
           f"{edges} definite edges on {len(graphs)} graphs, {tables} partial connections"
           if not problems else "; ".join(problems[:5]))
    assert not problems


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)

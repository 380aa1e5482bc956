"""Weight hypergraphs of bounded flag varieties and the hypersurfaces in them.

Fixed points of BF_n are bitstrings ``u``; the k-th line of the flag at
``u`` is the coordinate line indexed by ``a_k(u)``.  The hypersurfaces
BR_{i,j} (in BF_i x P^j), R_{i,j} (in BF_i x BF_j) and H_{i,j} (in
P^i x P^j) are cut out by a pairing between one line of each factor, and the
torus acts on the two factors by mutually inverse characters.

All three are produced by one builder, :func:`hypersurface_graph`.  Tangent
weights are the ambient ones minus the normal weight; a weight class that
avoids the normal direction spans a face of the ambient polytope lying
entirely in the hypersurface (an edge, or a P1 x P1 hyperedge), and the class
of the normal direction, when two ambient directions share it, gives the
"castling" sphere through the opposite corner of that square.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import intlin
from .weightgraph import (Connection, GKMError, Hyperedge, NonIsolatedFixedPoints,
                          WeightHypergraph, canonical, forced_transport, is_definite_at,
                          make_edge, make_hyperedge, neg, parallel_transport,
                          two_independent_at)


class InvalidParams(GKMError):
    pass


class StepMismatch(GKMError):
    pass


# --- flag indices --------------------------------------------------------------

def a_index(u: str, k: int) -> int:
    """Largest r <= k with u_r = 1, or 0."""
    for r in range(k, 0, -1):
        if u[r - 1] == "1":
            return r
    return 0


def b_index(u: str, k: int) -> int:
    """The other element of {a_{k-1}(u), k}."""
    return a_index(u, k - 1) if u[k - 1] == "1" else k


def flip(u: str, q: int) -> str:
    return u[:q - 1] + ("0" if u[q - 1] == "1" else "1") + u[q:]


def bits(n: int, *ones: int) -> str:
    """Bitstring of length n with the given 1-based positions set (sum of 1_q)."""
    s = ["0"] * n
    for q in ones:
        s[q - 1] = "1" if s[q - 1] == "0" else "0"
    return "".join(s)


def all_bits(n: int) -> list[str]:
    return ["".join(p) for p in product("01", repeat=n)]


# --- ambient factors -----------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    """A toric factor on ambient coordinates ``offset .. offset+n``.

    ``sign`` is +1 when the torus scales coordinate m by t_m and -1 for the
    inverse action.  Coordinate 0 of the ambient space carries no weight.
    """

    kind: str  # "bf" or "proj"
    n: int
    offset: int
    sign: int

    def points(self) -> list:
        if self.kind == "bf":
            return all_bits(self.n)
        return list(range(self.n + 1))

    def line(self, p) -> int:
        if self.kind == "bf":
            return a_index(p, self.n) + self.offset
        return p + self.offset

    def directions(self, p) -> list[tuple[object, tuple[int, int]]]:
        """Neighbours with weights as (plus index, minus index) pairs."""
        out = []
        o, s = self.offset, self.sign
        if self.kind == "bf":
            for q in range(1, self.n + 1):
                hi, lo = b_index(p, q) + o, a_index(p, q) + o
                out.append((flip(p, q), (hi, lo) if s > 0 else (lo, hi)))
        else:
            for r in range(self.n + 1):
                if r != p:
                    hi, lo = r + o, p + o
                    out.append((r, (hi, lo) if s > 0 else (lo, hi)))
        return out

    def face(self, p, nbrs: list) -> list:
        """Vertices of the face at ``p`` spanned by the given neighbour directions."""
        if self.kind == "bf":
            qs = [next(q for q in range(1, self.n + 1) if flip(p, q) == x) for x in nbrs]
            out = []
            for sel in product((0, 1), repeat=len(qs)):
                w = p
                for q, on in zip(qs, sel):
                    if on:
                        w = flip(w, q)
                out.append(w)
            return out
        return [p] + list(nbrs)


def _vec(pair: tuple[int, int], m: int) -> tuple[int, ...]:
    v = [0] * (m + 1)
    v[pair[0]] += 1
    v[pair[1]] -= 1
    return tuple(v[1:])


def _label(p) -> str:
    return str(p)


def hypersurface_graph(fa: Factor, fb: Factor, m: int, name: str = "") -> WeightHypergraph:
    """Weight hypergraph of {line_a(x) orthogonal to line_b(y)} in fa x fb.

    ``m`` is the largest ambient coordinate index; weights live in Z^m before
    unused coordinates are dropped.
    """
    def on(p, q):
        return fa.line(p) != fb.line(q)

    verts = [(p, q) for p in fa.points() for q in fb.points() if on(p, q)]
    labels = {x: f"{_label(x[0])},{_label(x[1])}" for x in verts}
    stars: dict[str, list] = {}
    tangent: dict[str, list] = {}
    for (p, q) in verts:
        x = labels[(p, q)]
        dirs = [(0, nb, _vec(w, m)) for nb, w in fa.directions(p)]
        dirs += [(1, nb, _vec(w, m)) for nb, w in fb.directions(q)]
        nu = _vec((fb.line(q), fa.line(p)), m)
        ws = [w for _, _, w in dirs]
        if nu not in ws:
            raise GKMError(f"normal weight not found among ambient weights at {x}")
        tw = list(ws)
        tw.remove(nu)
        if any(not any(w) for w in tw):
            raise NonIsolatedFixedPoints(f"zero weight at {x}")
        tangent[x] = tw
        classes: dict[tuple, list] = {}
        for d in dirs:
            classes.setdefault(canonical(intlin.primitive(d[2])), []).append(d)
        star = []
        nuc = canonical(nu)
        for c in sorted(classes):
            members = classes[c]
            na = [nb for f, nb, _ in members if f == 0]
            nbb = [nb for f, nb, _ in members if f == 1]
            face = [(a, b) for a in fa.face(p, na) for b in fb.face(q, nbb)]
            if c != nuc:
                if not all(on(a, b) for a, b in face):
                    raise GKMError(f"face of class {c} at {x} leaves the hypersurface")
                if len(members) == 1:
                    y = labels[face[1] if face[0] == (p, q) else face[0]]
                    star.append(make_edge(x, y, members[0][2]))
                else:
                    vs = [labels[v] for v in face]
                    star.append(make_hyperedge(x, vs, len(members), members[0][2]))
                continue
            if len(members) == 1:
                continue
            if len(members) == 2 and all(w == nu for _, _, w in members):
                others = [v for v in face if v != (p, q) and on(*v)]
                if len(others) != 1:
                    raise GKMError(f"ambiguous sphere in the normal class at {x}")
                star.append(make_edge(x, labels[others[0]], nu))
                continue
            raise GKMError(f"unsupported normal class configuration at {x}")
        stars[x] = star
    g = WeightHypergraph(m, sorted(labels.values()), stars, tangent=tangent, name=name)
    return drop_unused_coordinates(g)


def drop_unused_coordinates(g: WeightHypergraph) -> WeightHypergraph:
    """Remove weight coordinates that vanish on every weight."""
    used = sorted({c for v in g.vertices for w in g.tangent_weights(v) for c, x in enumerate(w) if x}
                  | {c for v in g.vertices for h in g.star(v) for c, x in enumerate(h.weight) if x})
    if len(used) == g.rank:
        return g
    proj = [[int(c == u) for c in range(g.rank)] for u in used]
    return g.relabeled({v: v for v in g.vertices}, proj)


# --- generators ----------------------------------------------------------------

def bf_graph(n: int) -> WeightHypergraph:
    """GKM graph of the bounded flag variety BF_n."""
    if n < 1:
        raise InvalidParams("bf_graph needs n >= 1")
    edges = []
    for u in all_bits(n):
        for q in range(1, n + 1):
            w = [0] * (n + 1)
            w[b_index(u, q)] += 1
            w[a_index(u, q)] -= 1
            edges.append((u, flip(u, q), tuple(w[1:])))
    return WeightHypergraph.from_parts(n, all_bits(n), edges, name=f"BF_{n}")


def br_graph(i: int, j: int) -> WeightHypergraph:
    """Weight hypergraph of BR_{i,j} in BF_i x P^j.

    The torus has rank max(i, j); for i >= j this is the action where the
    second factor is scaled inversely and shifted by i - j.
    """
    if i < 0 or j < 0 or (i, j) == (0, 0) or (i == 0 and j < 2):
        raise InvalidParams(f"BR_{{{i},{j}}} is empty or a point")
    m = max(i, j)
    fa = Factor("bf", i, m - i, 1)
    fb = Factor("proj", j, m - j, -1)
    return hypersurface_graph(fa, fb, m, f"BR_{i},{j}")


def r_graph(i: int, j: int) -> WeightHypergraph:
    """Weight hypergraph of R_{i,j} in BF_i x BF_j."""
    if i < 0 or j < 0 or i + j < 2:
        raise InvalidParams(f"R_{{{i},{j}}} is empty or a point")
    m = max(i, j)
    fa = Factor("bf", i, m - i, 1)
    fb = Factor("bf", j, m - j, -1)
    return hypersurface_graph(fa, fb, m, f"R_{i},{j}")


def hij_graph(i: int, j: int) -> WeightHypergraph:
    """Weight hypergraph of the quadric sum z_k w_k = 0 in P^i x P^j."""
    if not 1 <= i <= j:
        raise InvalidParams("hij_graph needs 1 <= i <= j")
    fa = Factor("proj", i, 0, 1)
    fb = Factor("proj", j, 0, -1)
    return hypersurface_graph(fa, fb, j, f"H_{i},{j}")


FAMILIES = {"bf": bf_graph, "br": br_graph, "r": r_graph, "h": hij_graph}


def family_graph(address: str) -> WeightHypergraph:
    """Build from an address such as ``br:3,2`` or ``bf:4``."""
    try:
        kind, _, params = address.partition(":")
        args = [int(x) for x in params.split(",")]
        fn = FAMILIES[kind]
    except (KeyError, ValueError):
        raise InvalidParams(f"bad family address {address!r}") from None
    try:
        return fn(*args)
    except TypeError:
        raise InvalidParams(f"wrong number of parameters in {address!r}") from None


def br_vertex(u: str, k: int) -> str:
    return f"{u},{k}"


def r_vertex(u: str, v: str) -> str:
    return f"{u},{v}"


def fixed_points_br(i: int, j: int) -> list[tuple[str, int]]:
    d = i - j
    return [(u, k) for u in all_bits(i) for k in range(j + 1) if a_index(u, i) != k + d]


def fixed_points_r(i: int, j: int) -> list[tuple[str, str]]:
    d = i - j
    return [(u, v) for u in all_bits(i) for v in all_bits(j) if a_index(u, i) != a_index(v, j) + d]


# --- partial connections -------------------------------------------------------

def _table(g: WeightHypergraph, along: tuple[str, str], rows: list[tuple[tuple[str, str], tuple[str, str]]]):
    e = g.edge(*along)
    m = {}
    for src, dst in rows:
        m[g.edge(*src)] = g.edge(*dst)
    if set(m) != set(g.star(e.origin)) or set(m.values()) != set(g.star(e.end)):
        raise StepMismatch(f"table along {e.name} does not cover the stars")
    return e, m


def br_partial_connection(i: int, j: int, g: WeightHypergraph | None = None) -> Connection:
    """Connection values along E_{u,k}^{u,r} with a_i(u) < i - j."""
    if not i > j >= 0:
        raise InvalidParams("br_partial_connection needs i > j >= 0")
    g = g or br_graph(i, j)
    d = i - j
    maps = {}
    for u in all_bits(i):
        if a_index(u, i) >= d:
            continue
        for k in range(j + 1):
            for r in range(j + 1):
                if k == r:
                    continue
                x, y = br_vertex(u, k), br_vertex(u, r)
                rows = [((x, br_vertex(u, a)), (y, br_vertex(u, a)))
                        for a in range(j + 1) if a not in (k, r)]
                rows += [((x, br_vertex(flip(u, q), k)), (y, br_vertex(flip(u, q), r)))
                         for q in range(1, i + 1) if q not in (k + d, r + d)]
                rows.append(((x, y), (y, x)))
                rows.append(((x, br_vertex(flip(u, r + d), k)), (y, br_vertex(flip(u, k + d), r))))
                e, m = _table(g, (x, y), rows)
                maps[e] = m
    return Connection(maps)


def r_partial_connection(i: int, j: int, g: WeightHypergraph | None = None) -> Connection:
    """The four connection tables used for R_{i,j}, i > j >= 2."""
    if not i > j >= 2:
        raise InvalidParams("r_partial_connection needs i > j >= 2")
    g = g or r_graph(i, j)
    d = i - j
    U = lambda *qs: bits(i, *qs)  # noqa: E731
    V = lambda *rs: bits(j, *rs)  # noqa: E731
    X = r_vertex
    maps = {}

    # 1) along (0, 1_j) -> (0, 0)
    x, y = X(U(), V(j)), X(U(), V())
    rows = [((x, X(U(q), V(j))), (y, X(U(q), V()))) for q in range(1, i + 1) if q not in (d, i)]
    rows += [((x, X(U(), V(r, j))), (y, X(U(), V(r)))) for r in range(1, j)]
    rows += [((x, y), (y, x)), ((x, X(U(d), V(j))), (y, X(U(i), V())))]
    e, m = _table(g, (x, y), rows)
    maps[e] = m

    # 2) along (0, 0) -> (1_{i-1}, 0)
    x, y = X(U(), V()), X(U(i - 1), V())
    rows = [((x, X(U(q), V())), (y, X(U(q, i - 1), V()))) for q in range(1, i + 1) if q not in (d, i - 1, i)]
    rows += [((x, X(U(), V(r))), (y, X(U(i - 1), V(r)))) for r in range(1, j + 1) if r != j - 1]
    rows += [((x, y), (y, x)),
             ((x, X(U(), V(j - 1))), (y, X(U(d, i - 1), V()))),
             ((x, X(U(i), V())), (y, X(U(i - 1, i), V())))]
    e, m = _table(g, (x, y), rows)
    maps[e] = m

    # 3) along (1_{i-1}, 0) -> (1_{i-1}, 1_j)
    x, y = X(U(i - 1), V()), X(U(i - 1), V(j))
    rows = [((x, X(U(q, i - 1), V())), (y, X(U(q, i - 1), V(j)))) for q in range(1, i + 1) if q not in (i - 1, i)]
    rows += [((x, X(U(i - 1), V(r))), (y, X(U(i - 1), V(r, j)))) for r in range(1, j + 1) if r not in (j - 1, j)]
    rows += [((x, X(U(), V())), (y, X(U(), V(j)))),
             ((x, X(U(i - 1, i), V())), (y, X(U(i - 1), V(j - 1, j)))),
             ((x, y), (y, x))]
    e, m = _table(g, (x, y), rows)
    maps[e] = m

    # 4) along (1_{i-1}, 1_j) -> (1_{i-1}, 1_{j-1} + 1_j)
    x, y = X(U(i - 1), V(j)), X(U(i - 1), V(j - 1, j))
    rows = [((x, X(U(q, i - 1), V(j))), (y, X(U(q, i - 1), V(j - 1, j)))) for q in range(1, i + 1) if q not in (i - 1, i)]
    rows += [((x, X(U(i - 1), V(r, j))), (y, X(U(i - 1), V(r, j - 1, j)))) for r in range(1, j + 1) if r not in (j - 1, j)]
    rows += [((x, X(U(), V(j))), (y, X(U(), V(j - 1, j)))),
             ((x, y), (y, x)),
             ((x, X(U(i - 1), V())), (y, X(U(i - 1, i), V(j - 1))))]
    e, m = _table(g, (x, y), rows)
    maps[e] = m
    return Connection(maps)


# --- replays of the two obstruction proofs -------------------------------------

def _safe(g: WeightHypergraph, e: Hyperedge) -> bool:
    return is_definite_at(g, e) and two_independent_at(g, e.origin) and two_independent_at(g, e.end)


def _step(g, table: Connection, e: Hyperedge, h: Hyperedge, expect: Hyperedge, steps: list):
    """One transport, checked against the forced value, the table and the expectation."""
    from .toric import TransportStep

    if not _safe(g, e):
        raise StepMismatch(f"{e.name} is not a safe edge")
    forced = forced_transport(g, e)[h]
    if e in table and table.apply(e, h) != forced:
        raise StepMismatch(f"table and forced transport disagree along {e.name} on {h.name}")
    if forced != expect:
        raise StepMismatch(f"along {e.name}: {h.name} -> {forced.name}, expected {expect.name}")
    steps.append(TransportStep(e, h, forced))
    return forced


def reproduce_thm12(i: int, j: int, k: int = 0):
    """Replay the triangle monodromy argument on BR_{i,j}, i > j >= 2."""
    from .toric import ObstructionWitness

    if not i > j >= 2:
        raise InvalidParams("needs i > j >= 2")
    if not 0 <= k <= j - 2:
        raise InvalidParams("needs 0 <= k <= j - 2")
    g = br_graph(i, j)
    table = br_partial_connection(i, j, g)
    d = i - j
    z = bits(i)
    P = lambda kk: br_vertex(z, kk)  # noqa: E731
    tri = [g.edge(P(k), P(k + 1)), g.edge(P(k + 1), P(k + 2)), g.edge(P(k + 2), P(k))]
    chain = [g.edge(P(k), br_vertex(bits(i, k + 1 + d), k)),
             g.edge(P(k + 1), br_vertex(bits(i, k + d), k + 1)),
             g.edge(P(k + 2), br_vertex(bits(i, k + d), k + 2)),
             g.edge(P(k), br_vertex(bits(i, k + 2 + d), k))]
    steps = []
    # the triangle is closed under transport: each edge carries its predecessor's companion
    for a, companion, nxt in ((tri[0], g.reverse(tri[2]), tri[1]),
                              (tri[1], g.reverse(tri[0]), tri[2]),
                              (tri[2], g.reverse(tri[1]), tri[0])):
        _step(g, table, a, companion, nxt, steps)
    h = chain[0]
    for e, nxt in zip(tri, chain[1:]):
        h = _step(g, table, e, h, nxt, steps)
    if h == chain[0]:
        raise StepMismatch("monodromy fixes the external edge")
    if parallel_transport(g, table, tri, chain[0]) != h:
        raise StepMismatch("table transport disagrees with the forced chain")
    return ObstructionWitness(kind="cycle", base_vertex=P(k), seed_edges=(tri[0], g.reverse(tri[2])),
                              path=tuple(tri), external_edge=chain[0], image=h,
                              transcript=tuple(steps))


def reproduce_thm13(i: int, j: int):
    """Replay the 3-face exclusion argument on R_{i,j}, i > j >= 2."""
    from .toric import ObstructionWitness

    if not i > j >= 2:
        raise InvalidParams("needs i > j >= 2")
    g = r_graph(i, j)
    table = r_partial_connection(i, j, g)
    d = i - j
    U = lambda *qs: bits(i, *qs)  # noqa: E731
    V = lambda *rs: bits(j, *rs)  # noqa: E731
    X = r_vertex
    base = X(U(), V(j))
    path = [g.edge(base, X(U(), V())), g.edge(X(U(), V()), X(U(i - 1), V())),
            g.edge(X(U(i - 1), V()), X(U(i - 1), V(j)))]
    seeds = (g.edge(base, X(U(), V())), g.edge(base, X(U(i - 1), V(j))), g.edge(base, X(U(d), V(j))))
    excluding = g.edge(base, X(U(), V(j - 1, j)))
    steps = []
    h = seeds[2]
    for e, nxt in zip(path, [g.edge(X(U(), V()), X(U(i), V())),
                             g.edge(X(U(i - 1), V()), X(U(i - 1, i), V())),
                             g.edge(X(U(i - 1), V(j)), X(U(i - 1), V(j - 1, j)))]):
        h = _step(g, table, e, h, nxt, steps)
    last = h
    h = seeds[1]
    for e, nxt in zip(path, [g.edge(X(U(), V()), X(U(i - 1), V())),
                             g.edge(X(U(i - 1), V()), X(U(), V())),
                             g.edge(X(U(i - 1), V(j)), X(U(), V(j)))]):
        h = _step(g, table, e, h, nxt, steps)
    # the third path edge lies in the face: it is the image of the first path edge's reverse
    _step(g, table, path[1], g.reverse(path[0]), path[2], steps)
    reaching = _step(g, table, last, h, g.edge(X(U(i - 1), V(j - 1, j)), X(U(), V(j - 1, j))), steps)
    if reaching.end != excluding.end or excluding in seeds:
        raise StepMismatch("closure does not reach the excluded vertex")
    return ObstructionWitness(kind="face-exclusion", base_vertex=base, seed_edges=seeds,
                              path=tuple(path) + (last,), excluded_vertex=excluding.end,
                              excluding_edge=excluding, reaching_edge=reaching,
                              transcript=tuple(steps))

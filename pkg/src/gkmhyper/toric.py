"""Toric GKM graphs and the monodromy obstruction to toricness.

A characteristic pair (simple polytope, characteristic matrix) yields the GKM
graph of a non-singular projective toric variety together with its
combinatorial connection.  Faces of the polytope are invariant subgraphs and
their monodromy fixes every external edge.

The two search engines look for subgraphs that any toric refinement would
have to treat as faces, using only transports along *safe* edges: edges that
are definite and whose endpoints carry pairwise independent weights.  A
returned witness shows the refinement cannot exist.  Absence of a witness
proves nothing.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from . import intlin
from .weightgraph import (Connection, GKMError, Hyperedge, NoAdmissibleMatching, NotDefinite,
                          WeightHypergraph, fmt_weight, forced_transport, is_definite_at,
                          make_edge, two_independent_at)


class InvalidFace(GKMError):
    pass


class InvalidPolytope(GKMError):
    pass


class MinorNotUnimodular(GKMError):
    pass


class ClosureNotValent(GKMError):
    pass


# --- simple polytopes ----------------------------------------------------------

class SimplePolytope:
    """Combinatorial simple polytope: vertices as n-sets of facet indices."""

    __slots__ = ("dim", "nfacets", "vertices")

    def __init__(self, dim: int, nfacets: int, vertices: Iterable[Iterable[int]]):
        self.dim = dim
        self.nfacets = nfacets
        self.vertices = tuple(sorted(tuple(sorted(v)) for v in vertices))
        self._check()

    def _check(self):
        n = self.dim
        vs = [frozenset(v) for v in self.vertices]
        if len(set(vs)) != len(vs):
            raise InvalidPolytope("repeated vertex")
        for v in vs:
            if len(v) != n or not all(0 <= f < self.nfacets for f in v):
                raise InvalidPolytope(f"vertex {sorted(v)} is not an n-set of facets")
        for v in vs:
            for f in v:
                ridge = v - {f}
                ends = [w for w in vs if w != v and ridge <= w]
                if len(ends) != 1:
                    raise InvalidPolytope(f"edge {sorted(ridge)} at {sorted(v)} has {len(ends)} far ends")
        used = set().union(*vs) if vs else set()
        if used != set(range(self.nfacets)):
            raise InvalidPolytope("some facet contains no vertex")

    def neighbour(self, v: Sequence[int], f: int) -> tuple[int, ...]:
        """The vertex reached from ``v`` along the edge leaving facet ``f``."""
        ridge = set(v) - {f}
        for w in self.vertices:
            if tuple(w) != tuple(v) and ridge <= set(w):
                return w
        raise InvalidPolytope("no neighbour")

    def face_vertices(self, facets: Iterable[int]) -> list[tuple[int, ...]]:
        g = set(facets)
        return [v for v in self.vertices if g <= set(v)]

    def faces(self) -> list[frozenset[int]]:
        """All nonempty faces, each given by its full set of containing facets."""
        out = set()
        for v in self.vertices:
            for k in range(self.dim + 1):
                for g in combinations(v, k):
                    out.add(frozenset(g))
        return sorted(out, key=lambda s: (-len(s), sorted(s)))

    def __repr__(self) -> str:
        return f"SimplePolytope(dim={self.dim}, facets={self.nfacets}, vertices={len(self.vertices)})"


def polytope_simplex(n: int) -> SimplePolytope:
    return SimplePolytope(n, n + 1, [c for c in combinations(range(n + 1), n)])


def polytope_cube(n: int) -> SimplePolytope:
    """I^n with facets 2q and 2q+1 opposite."""
    return SimplePolytope(n, 2 * n, [tuple(2 * q + s for q, s in enumerate(sel))
                                     for sel in product((0, 1), repeat=n)])


def polytope_product(p: SimplePolytope, q: SimplePolytope) -> SimplePolytope:
    verts = [tuple(a) + tuple(b + p.nfacets for b in bb) for a in p.vertices for bb in q.vertices]
    return SimplePolytope(p.dim + q.dim, p.nfacets + q.nfacets, verts)


def polytope_truncate(p: SimplePolytope, face: Iterable[int]) -> SimplePolytope:
    """Cut off the face given by a set of facets; the new facet gets the last index."""
    g = set(face)
    fv = p.face_vertices(g)
    if not g or not fv:
        raise InvalidFace(f"facets {sorted(g)} do not define a nonempty proper face")
    full = set.intersection(*(set(v) for v in fv))
    new = p.nfacets
    verts = [v for v in p.vertices if v not in fv]
    for v in fv:
        for f in full:
            verts.append(tuple(sorted((set(v) - {f}) | {new})))
    return SimplePolytope(p.dim, p.nfacets + 1, verts)


# --- characteristic pairs ------------------------------------------------------

@dataclass(frozen=True)
class CharPair:
    polytope: SimplePolytope
    lam: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        lam = tuple(tuple(r) for r in self.lam)
        object.__setattr__(self, "lam", lam)
        if len(lam) != self.polytope.dim or any(len(r) != self.polytope.nfacets for r in lam):
            raise MinorNotUnimodular("characteristic matrix has the wrong shape")

    def column(self, f: int) -> tuple[int, ...]:
        return tuple(r[f] for r in self.lam)

    def minor(self, v: Sequence[int]) -> list[list[int]]:
        cols = [self.column(f) for f in v]
        return [list(r) for r in zip(*cols)]

    def check(self) -> None:
        for v in self.polytope.vertices:
            d = intlin.det(self.minor(v))
            if abs(d) != 1:
                raise MinorNotUnimodular(f"minor at vertex {list(v)} has determinant {d}")

    def is_unimodular(self) -> bool:
        try:
            self.check()
        except MinorNotUnimodular:
            return False
        return True

    def to_dict(self) -> dict:
        return {"facets": self.polytope.nfacets, "dim": self.polytope.dim,
                "vertices": [list(v) for v in self.polytope.vertices],
                "lambda": [list(r) for r in self.lam]}

    @classmethod
    def from_dict(cls, d: dict) -> "CharPair":
        try:
            p = SimplePolytope(int(d["dim"]), int(d["facets"]), d["vertices"])
            return cls(p, d["lambda"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidPolytope(f"malformed characteristic pair: {exc}") from None


def vertex_label(v: Sequence[int]) -> str:
    return ".".join(str(f) for f in v)


def gkm_from_charpair(cp: CharPair) -> tuple[WeightHypergraph, Connection]:
    """GKM graph (dual-basis weights) and its combinatorial connection."""
    cp.check()
    p = cp.polytope
    n = p.dim
    edges = []
    leaving = {}
    for v in p.vertices:
        inv = intlin.inverse_unimodular(cp.minor(v))
        for idx, f in enumerate(v):
            w = p.neighbour(v, f)
            edges.append((vertex_label(v), vertex_label(w), tuple(inv[idx])))
            leaving[(v, f)] = (vertex_label(v), vertex_label(w))
    g = WeightHypergraph.from_parts(n, [vertex_label(v) for v in p.vertices], edges,
                                    valence=n, name="charpair")
    maps = {}
    for v in p.vertices:
        for f in v:
            w = p.neighbour(v, f)
            e = g.edge(*leaving[(v, f)])
            (f2,) = set(w) - set(v)
            m = {e: g.reverse(e)}
            for k in v:
                if k != f:
                    m[g.edge(*leaving[(v, k)])] = g.edge(*leaving[(w, k)])
            maps[e] = m
    return g, Connection(maps)


def unique_connection(g: WeightHypergraph) -> Connection:
    maps = {}
    for e in g.directed_edges():
        if not is_definite_at(g, e):
            raise NotDefinite(f"{e.name} is not definite")
        maps[e] = forced_transport(g, e)
    return Connection(maps)


# --- faces ---------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    vertices: frozenset[str]
    edges: frozenset[Hyperedge]

    def star(self, v: str) -> list[Hyperedge]:
        return sorted(e for e in self.edges if e.origin == v)


def span_face(g: WeightHypergraph, c: Connection, v: str, edges: Iterable[Hyperedge], r: int) -> Face:
    """Closure of ``edges`` at ``v`` under transport along its own edges."""
    edges = list(edges)
    if len(set(edges)) != r or any(e.origin != v or e.dim != 1 for e in edges):
        raise ClosureNotValent("need r distinct edges at the base vertex")
    at = {v: set(edges)}
    todo = [v]
    while todo:
        x = todo.pop()
        for e in sorted(at[x]):
            y = e.end
            img = {c.apply(e, h) for h in at[x]}
            cur = at.setdefault(y, set())
            if not img <= cur:
                cur |= img
                todo.append(y)
                todo.append(x)
    for x, s in at.items():
        if len(s) != r:
            raise ClosureNotValent(f"closure has {len(s)} edges at {x}, expected {r}")
    return Face(frozenset(at), frozenset(e for s in at.values() for e in s))


def induced_face(g: WeightHypergraph, vertices: Iterable[str]) -> Face:
    vs = frozenset(vertices)
    es = frozenset(e for v in vs for e in g.star(v) if e.dim == 1 and e.end in vs)
    return Face(vs, es)


def simple_cycles(face: Face, max_len: int) -> list[tuple[str, ...]]:
    """Simple cycles (length >= 3) as vertex tuples starting at their least vertex."""
    adj: dict[str, list[str]] = {v: [] for v in face.vertices}
    for e in face.edges:
        adj[e.origin].append(e.end)
    for v in adj:
        adj[v] = sorted(set(adj[v]))
    out = []
    for s in sorted(face.vertices):
        stack = [(s, (s,))]
        while stack:
            x, path = stack.pop()
            for y in adj[x]:
                if y == s and len(path) >= 3:
                    if path[1] < path[-1]:
                        out.append(path)
                elif y > s and y not in path and len(path) < max_len:
                    stack.append((y, path + (y,)))
    return sorted(out)


def check_external_monodromy(g: WeightHypergraph, c: Connection, face: Face | Iterable[str],
                             max_cycle_len: int = 8) -> bool:
    """External edges stay external along face edges and are fixed by cycle monodromy."""
    if not isinstance(face, Face):
        face = induced_face(g, face)
    verts = face.vertices

    def external(h):
        return not set(h.vertices) <= verts

    for e in sorted(face.edges):
        for h in g.star(e.origin):
            if external(h) != external(c.apply(e, h)):
                return False
    for cyc in simple_cycles(face, max_cycle_len):
        for seq in (cyc, tuple(reversed(cyc))):
            for rot in range(len(seq)):
                walk = seq[rot:] + seq[:rot]
                path = [g.edge(walk[t], walk[(t + 1) % len(walk)]) for t in range(len(walk))]
                for h in g.star(walk[0]):
                    if not external(h):
                        continue
                    k = h
                    for e in path:
                        k = c.apply(e, k)
                    if k != h:
                        return False
    return True


# --- obstruction witnesses -----------------------------------------------------

@dataclass(frozen=True)
class TransportStep:
    along: Hyperedge
    source: Hyperedge
    target: Hyperedge

    def __str__(self) -> str:
        return f"along {self.along.name}: {self.source.name} -> {self.target.name}"


@dataclass(frozen=True)
class ObstructionWitness:
    kind: str
    base_vertex: str
    seed_edges: tuple[Hyperedge, ...]
    path: tuple[Hyperedge, ...]
    transcript: tuple[TransportStep, ...]
    external_edge: Hyperedge | None = None
    image: Hyperedge | None = None
    excluded_vertex: str | None = None
    excluding_edge: Hyperedge | None = None
    reaching_edge: Hyperedge | None = None

    def lines(self) -> list[str]:
        out = [f"kind: {self.kind}", f"base vertex: {self.base_vertex}",
               "seed edges: " + ", ".join(e.name for e in self.seed_edges),
               "path: " + " , ".join(e.name for e in self.path)]
        out += [f"step {n + 1}: {s}" for n, s in enumerate(self.transcript)]
        if self.kind == "cycle":
            out.append(f"monodromy moves external edge {self.external_edge.name} to {self.image.name}")
        else:
            out.append(f"face edge {self.reaching_edge.name} reaches {self.excluded_vertex}, "
                       f"excluded by {self.excluding_edge.name}")
        return out

    def to_dict(self) -> dict:
        def ed(e):
            return None if e is None else {"from": e.origin, "to": e.end, "weight": list(e.weight)}

        d = {"kind": self.kind, "base_vertex": self.base_vertex,
             "seed_edges": [ed(e) for e in self.seed_edges],
             "path": [ed(e) for e in self.path],
             "transcript": [{"along": ed(s.along), "source": ed(s.source), "target": ed(s.target)}
                            for s in self.transcript]}
        if self.kind == "cycle":
            d["external_edge"] = ed(self.external_edge)
            d["image"] = ed(self.image)
        else:
            d["excluded_vertex"] = self.excluded_vertex
            d["excluding_edge"] = ed(self.excluding_edge)
            d["reaching_edge"] = ed(self.reaching_edge)
        return d


def is_safe(g: WeightHypergraph, e: Hyperedge) -> bool:
    return (e.dim == 1 and is_definite_at(g, e) and two_independent_at(g, e.origin)
            and two_independent_at(g, e.end))


def safe_transports(g: WeightHypergraph) -> dict[Hyperedge, dict[Hyperedge, Hyperedge]]:
    """Forced transports along every safe edge that admits one."""
    indep = {v: two_independent_at(g, v) for v in g.vertices}
    out = {}
    for e in g.directed_edges():
        if not (indep[e.origin] and indep[e.end]):
            continue
        try:
            out[e] = forced_transport(g, e)
        except (NotDefinite, NoAdmissibleMatching):
            continue
    return out


def replay_witness(g: WeightHypergraph, w: ObstructionWitness) -> bool:
    """Recompute every step of a witness and confirm the contradiction."""
    for s in w.transcript:
        if not is_safe(g, s.along) or forced_transport(g, s.along)[s.source] != s.target:
            return False
    if w.kind == "cycle":
        path = w.path
        if path[0].origin != w.base_vertex or path[-1].end != w.base_vertex:
            return False
        h = w.external_edge
        for e in path:
            if not is_safe(g, e):
                return False
            h = forced_transport(g, e)[h]
        if h != w.image or h == w.external_edge:
            return False
        verts = {e.origin for e in path}
        if set(w.external_edge.vertices) <= verts and w.external_edge in _cycle_edges(g, path):
            return False
        for a, b in zip(path, path[1:] + path[:1]):
            if forced_transport(g, a)[g.reverse(_prev(path, a))] != b:
                return False
        return True
    # steps may be listed chain by chain; accept any well-founded order
    # reverses come for free: transport along an edge sends it to its reverse
    known = set(w.seed_edges) | {g.reverse(e) for e in w.seed_edges}
    pending = list(w.transcript)
    while pending:
        ready = [s for s in pending if s.along in known and s.source in known]
        if not ready:
            return False
        for s in ready:
            known.update((s.target, g.reverse(s.target)))
            pending.remove(s)
    return (w.reaching_edge in known and w.reaching_edge.end == w.excluded_vertex
            and w.excluding_edge.origin == w.base_vertex and w.excluding_edge.end == w.excluded_vertex
            and w.excluding_edge not in w.seed_edges and len(set(w.seed_edges)) == len(w.seed_edges))


def _prev(path, e):
    i = path.index(e)
    return path[i - 1]


def _cycle_edges(g, path):
    return set(path) | {g.reverse(e) for e in path}


@dataclass
class SearchStats:
    seeds: int = 0
    inconclusive: int = 0
    safe_edges: int = 0


def _threads(threads: int | None) -> int:
    if threads is None:
        try:
            threads = int(os.environ.get("GKM_THREADS", "1"))
        except ValueError:
            threads = 1
    return max(1, threads)


def _cycle_at(args):
    g, T, base, max_len = args
    return _cycle_search_base(g, T, base, max_len)


def _cycle_search_base(g, T, base, max_len):
    star = [e for e in g.star(base) if e in T]
    if len(star) != len(g.star(base)):
        return None
    for e1 in star:
        for e2 in star:
            if e1 == e2:
                continue
            steps = []
            path = []
            seen = {base}
            out, back = e1, e2
            closed = False
            while True:
                if out not in T:
                    break
                m = T[out]
                nxt = m[back]
                steps.append(TransportStep(out, back, nxt))
                path.append(out)
                y = out.end
                out, back = nxt, m[out]
                if y == base:
                    closed = (out, back) == (e1, e2) and len(path) >= 3
                    break
                if y in seen or len(path) >= max_len:
                    break
                seen.add(y)
            if not closed:
                continue
            for h in star:
                if h in (e1, e2):
                    continue
                chain = []
                k = h
                ok = True
                for e in path:
                    if e not in T:
                        ok = False
                        break
                    k2 = T[e][k]
                    chain.append(TransportStep(e, k, k2))
                    k = k2
                if ok and k != h:
                    return ObstructionWitness("cycle", base, (e1, e2), tuple(path),
                                              tuple(steps + chain), external_edge=h, image=k)
    return None


def cycle_obstruction(g: WeightHypergraph, max_len: int = 6, threads: int | None = None,
                      stats: SearchStats | None = None, transports: dict | None = None
                      ) -> ObstructionWitness | None:
    """Search 2-faces traced by forced transport whose monodromy moves an external edge."""
    T = transports if transports is not None else safe_transports(g)
    if stats is not None:
        stats.safe_edges = len(T)
        stats.seeds = len(g.vertices)
    bases = list(g.vertices)
    n = _threads(threads)
    if n > 1 and len(bases) > 1:
        with ProcessPoolExecutor(n) as ex:
            for w in ex.map(_cycle_at, [(g, T, b, max_len) for b in bases], chunksize=8):
                if w is not None:
                    return w
        return None
    for b in bases:
        w = _cycle_search_base(g, T, b, max_len)
        if w is not None:
            return w
    return None


def _face_at(args):
    g, T, base, r, max_growth = args
    st = SearchStats()
    return _face_search_base(g, T, base, r, max_growth, st, set()), st


def _grow(T, base, seeds, r, excluded, max_growth):
    """Close the seed edges under forced transport, stopping at the first excluded vertex.

    Returns ``(status, at, prov, parent, hit)`` with status one of
    "closed", "hit", "overflow".
    """
    at = {base: list(seeds)}
    members = {base: set(seeds)}
    prov: dict[Hyperedge, TransportStep] = {}
    parent: dict[str, Hyperedge | None] = {base: None}
    queue = deque([base])
    queued = {base}
    count = 0
    while queue:
        x = queue.popleft()
        queued.discard(x)
        for e in list(at[x]):
            if e not in T:
                continue
            if count >= max_growth:
                return "overflow", at, prov, parent, None
            count += 1
            y = e.end
            m = T[e]
            cur = at.setdefault(y, [])
            mem = members.setdefault(y, set())
            parent.setdefault(y, e)
            grew = False
            for h in list(at[x]):
                k = m[h]
                if k in mem:
                    continue
                cur.append(k)
                mem.add(k)
                prov[k] = TransportStep(e, h, k)
                if len(cur) > r:
                    return "overflow", at, prov, parent, None
                if k.end in excluded:
                    return "hit", at, prov, parent, k
                grew = True
            if grew and y not in queued:
                queue.append(y)
                queued.add(y)
    return "closed", at, prov, parent, None


def _face_search_base(g, T, base, r, max_growth, stats, clean):
    """``clean`` collects (vertex, edge set) pairs already known to give no witness."""
    star = g.star(base)
    if not two_independent_at(g, base):
        return None
    for seeds in combinations(star, r):
        stats.seeds += 1
        if (base, frozenset(seeds)) in clean:
            continue
        excluded = {h.end: h for h in star if h not in seeds}
        status, at, prov, parent, hit = _grow(T, base, seeds, r, excluded, max_growth)
        if status == "overflow":
            stats.inconclusive += 1
            continue
        if status == "closed":
            # every vertex of a closed face regrows the same face; remember the harmless ones
            verts = set(at)
            if all(len(s) == r for s in at.values()):
                for x, s in at.items():
                    if not any(h.end in verts for h in g.star(x) if h not in s):
                        clean.add((x, frozenset(s)))
            continue
        steps = []
        seen = set()

        def collect(h):
            if h in seeds or h in seen:
                return
            seen.add(h)
            st = prov[h]
            collect(st.along)
            collect(st.source)
            steps.append(st)

        collect(hit)
        path = []
        y = hit.origin
        while parent.get(y) is not None:
            e = parent[y]
            path.append(e)
            y = e.origin
        path.reverse()
        return ObstructionWitness("face-exclusion", base, tuple(seeds), tuple(path), tuple(steps),
                                  excluded_vertex=hit.end, excluding_edge=excluded[hit.end],
                                  reaching_edge=hit)
    return None


def face_exclusion_obstruction(g: WeightHypergraph, r: int, max_growth: int = 64,
                               threads: int | None = None,
                               stats: SearchStats | None = None, transports: dict | None = None
                               ) -> ObstructionWitness | None:
    """Grow the face spanned by r edges and look for a vertex it must avoid."""
    if not 1 <= r < g.valence:
        raise ValueError("need 1 <= r < valence")
    T = transports if transports is not None else safe_transports(g)
    stats = stats if stats is not None else SearchStats()
    stats.safe_edges = len(T)
    bases = list(g.vertices)
    n = _threads(threads)
    if n > 1 and len(bases) > 1:
        with ProcessPoolExecutor(n) as ex:
            for w, st in ex.map(_face_at, [(g, T, b, r, max_growth) for b in bases], chunksize=8):
                stats.seeds += st.seeds
                stats.inconclusive += st.inconclusive
                if w is not None:
                    return w
        return None
    clean: set = set()
    for b in bases:
        w = _face_search_base(g, T, b, r, max_growth, stats, clean)
        if w is not None:
            return w
    return None


def obstruction_search(g: WeightHypergraph, max_cycle_len: int = 6, max_growth: int = 64,
                       threads: int | None = None) -> tuple[ObstructionWitness | None, SearchStats]:
    """Run the cycle engine, then the face engine for every face size."""
    stats = SearchStats()
    T = safe_transports(g)
    w = cycle_obstruction(g, max_cycle_len, threads, stats, T)
    if w is not None:
        return w, stats
    for r in range(2, g.valence):
        w = face_exclusion_obstruction(g, r, max_growth, threads, stats, T)
        if w is not None:
            return w, stats
    return None, stats


# --- presets -------------------------------------------------------------------

def charpair_presets() -> dict[str, CharPair]:
    """Characteristic pairs of BR_{2,1}, BR_{2,2}, R_{2,2} and R_{1,3}."""
    cube2, cube3 = polytope_cube(2), polytope_cube(3)
    return {
        "br21": CharPair(polytope_truncate(cube2, {1, 2}),
                         [[1, -1, 0, 0, -1], [0, 0, 1, -1, 1]]),
        "br22": CharPair(cube3, [[1, -1, 0, 0, 0, 0], [0, 1, 1, -1, 0, 0], [0, -2, 0, 1, 1, -1]]),
        "r22": CharPair(polytope_truncate(cube3, {3, 5}),
                        [[1, -1, 0, 0, 0, 0, 0], [0, 1, 1, -1, 0, 0, -1], [0, -2, 0, 1, 1, -1, 0]]),
        "r13": CharPair(polytope_truncate(cube3, {3, 4}),
                        [[1, -1, 0, 0, 0, 0, 0], [0, 1, 1, -1, 0, 0, -1], [0, 0, 0, 0, 1, -1, 1]]),
    }

"""Weight hypergraphs of torus actions with isolated fixed points.

A weight hypergraph stores, for every fixed point, the star of directed
hyperedges leaving it.  Hyperedges of dimension one are ordinary edges with
a signed weight; higher dimensional hyperedges carry a sign-canonical weight
(first nonzero coordinate positive) since their weight is only defined up to
sign.

Connections are partial: they are families of bijections between stars,
indexed by genuine edges only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import intlin

Weight = tuple[int, ...]


class GKMError(Exception):
    """Base class for errors raised by this package."""


class NotAnEdge(GKMError):
    pass


class NotDefinite(GKMError):
    pass


class NoAdmissibleMatching(GKMError):
    pass


class PathNotCovered(GKMError):
    pass


class NonIsolatedFixedPoints(GKMError):
    pass


class InvalidCocharacter(GKMError):
    pass


class AxiomViolation(GKMError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations[:5]))


def neg(w: Sequence[int]) -> Weight:
    return tuple(-x for x in w)


def sub(a: Sequence[int], b: Sequence[int]) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def canonical(w: Sequence[int]) -> Weight:
    """Sign-canonical representative: first nonzero coordinate positive."""
    for x in w:
        if x:
            return tuple(w) if x > 0 else neg(w)
    return tuple(w)


def fmt_weight(w: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


@dataclass(frozen=True, order=True)
class Hyperedge:
    """A directed hyperedge; ``vertices[0]`` is the origin.

    For an edge (``dim == 1``) the second vertex is the end.  For higher
    dimensions the remaining vertices are kept sorted.
    """

    vertices: tuple[str, ...]
    dim: int
    weight: Weight
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.vertices, self.dim, self.weight)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def origin(self) -> str:
        return self.vertices[0]

    @property
    def is_edge(self) -> bool:
        return self.dim == 1

    @property
    def end(self) -> str:
        if self.dim != 1:
            raise NotAnEdge(f"{self.name} is a hyperedge of dimension {self.dim}")
        return self.vertices[1]

    @property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @property
    def key(self) -> tuple[str, ...]:
        return self.vertices

    def reversed(self) -> "Hyperedge":
        """The formal reverse edge with negated weight."""
        if self.dim != 1:
            raise NotAnEdge(f"{self.name} has no reverse")
        return Hyperedge((self.vertices[1], self.vertices[0]), 1, neg(self.weight))

    @property
    def name(self) -> str:
        if self.dim == 1:
            return f"E[{self.vertices[0]}->{self.vertices[1]}]"
        rest = " ".join(self.vertices[1:])
        return f"H{self.dim}[{self.vertices[0]}->{{{rest}}}]"

    def __str__(self) -> str:
        return self.name


def make_edge(x: str, y: str, w: Sequence[int]) -> Hyperedge:
    return Hyperedge((x, y), 1, tuple(w))


def make_hyperedge(origin: str, vertices: Iterable[str], dim: int, w: Sequence[int]) -> Hyperedge:
    rest = sorted(v for v in vertices if v != origin)
    if dim == 1 and len(rest) == 1:
        return Hyperedge((origin, rest[0]), 1, tuple(w))
    return Hyperedge((origin, *rest), dim, canonical(w))


def _star_order(h: Hyperedge):
    return (h.vertices[1:], h.dim)


class WeightHypergraph:
    """Vertices, stars of directed hyperedges and their weights.

    ``tangent`` optionally records the signed tangent weights at each vertex
    (with multiplicity); generators that know the geometry fill it in, since
    the star labels of higher dimensional hyperedges only retain the sign
    class.
    """

    __slots__ = ("rank", "valence", "vertices", "_star", "_lookup", "_tangent", "name")

    def __init__(self, rank: int, vertices: Iterable[str], stars: Mapping[str, Iterable[Hyperedge]],
                 valence: int | None = None, tangent: Mapping[str, Sequence[Weight]] | None = None,
                 name: str = ""):
        self.rank = rank
        self.vertices = tuple(vertices)
        self._star = {v: tuple(sorted(stars.get(v, ()), key=_star_order)) for v in self.vertices}
        self._lookup = {}
        for v, st in self._star.items():
            for h in st:
                self._lookup[h.key] = h
        if valence is None:
            valence = sum(h.dim for h in self._star[self.vertices[0]]) if self.vertices else 0
        self.valence = valence
        self._tangent = None
        if tangent is not None:
            self._tangent = {v: tuple(sorted(tuple(w) for w in tangent[v])) for v in self.vertices}
        self.name = name

    @classmethod
    def from_parts(cls, rank: int, vertices: Iterable[str],
                   edges: Iterable[tuple[str, str, Sequence[int]]] = (),
                   hyperedges: Iterable[tuple[Iterable[str], int, Sequence[int]]] = (),
                   valence: int | None = None, tangent=None, name: str = "") -> "WeightHypergraph":
        """Build from directed edges ``(x, y, weight)`` and undirected hyperedges."""
        vertices = list(vertices)
        stars: dict[str, list[Hyperedge]] = {v: [] for v in vertices}
        for x, y, w in edges:
            stars[x].append(make_edge(x, y, w))
        for vs, dim, w in hyperedges:
            vs = sorted(set(vs))
            for v in vs:
                stars[v].append(make_hyperedge(v, vs, dim, w))
        return cls(rank, vertices, stars, valence, tangent, name)

    def star(self, v: str) -> tuple[Hyperedge, ...]:
        return self._star[v]

    def get(self, key: Sequence[str]) -> Hyperedge | None:
        return self._lookup.get(tuple(key))

    def edge(self, x: str, y: str) -> Hyperedge:
        h = self._lookup.get((x, y))
        if h is None or h.dim != 1:
            raise NotAnEdge(f"no edge {x} -> {y}")
        return h

    def reverse(self, e: Hyperedge) -> Hyperedge | None:
        """The stored reverse of an edge, or None."""
        if e.dim != 1:
            raise NotAnEdge(f"{e.name} is not an edge")
        return self._lookup.get((e.vertices[1], e.vertices[0]))

    def directed_edges(self) -> list[Hyperedge]:
        return [h for v in self.vertices for h in self._star[v] if h.dim == 1]

    def hyperedge_classes(self) -> list[tuple[tuple[str, ...], int, Weight]]:
        """Undirected classes ``(sorted vertices, dim, weight)``.

        Edges are listed once, with the weight seen from the smaller label.
        """
        seen = set()
        out = []
        for v in self.vertices:
            for h in self._star[v]:
                vs = tuple(sorted(h.vertices))
                if vs in seen:
                    continue
                seen.add(vs)
                if h.dim == 1 and h.origin != vs[0]:
                    r = self.reverse(h)
                    w = r.weight if r is not None else neg(h.weight)
                else:
                    w = h.weight
                out.append((vs, h.dim, w))
        return out

    def tangent_weights(self, v: str) -> tuple[Weight, ...]:
        if self._tangent is not None:
            return self._tangent[v]
        out = []
        for h in self._star[v]:
            out.extend([h.weight] * h.dim)
        return tuple(sorted(out))

    @property
    def has_tangent(self) -> bool:
        return self._tangent is not None

    def relabeled(self, mapping: Mapping[str, str], rank_map=None) -> "WeightHypergraph":
        """Rename vertices and optionally apply a linear map to all weights."""
        def tw(w):
            if rank_map is None:
                return tuple(w)
            return tuple(intlin.matvec(rank_map, w))

        stars = {}
        for v in self.vertices:
            st = []
            for h in self._star[v]:
                vs = [mapping[x] for x in h.vertices]
                w = tw(h.weight)
                if h.dim == 1:
                    st.append(make_edge(vs[0], vs[1], w))
                else:
                    st.append(make_hyperedge(vs[0], vs, h.dim, w))
            stars[mapping[v]] = st
        tangent = None
        if self._tangent is not None:
            tangent = {mapping[v]: [tw(w) for w in ws] for v, ws in self._tangent.items()}
        rank = self.rank if rank_map is None else len(rank_map)
        return WeightHypergraph(rank, [mapping[v] for v in self.vertices], stars,
                                self.valence, tangent, self.name)

    def __repr__(self) -> str:
        return (f"WeightHypergraph({self.name or '?'}: {len(self.vertices)} vertices, "
                f"valence {self.valence}, rank {self.rank})")


# --- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.where}: {self.detail}"


def validate_axial(g: WeightHypergraph) -> list[Violation]:
    """Every violated structural rule and axial axiom; empty means valid."""
    out: list[Violation] = []
    vset = set(g.vertices)
    classes: dict[frozenset, list[Hyperedge]] = {}
    for v in g.vertices:
        for h in g.star(v):
            if h.origin != v:
                out.append(Violation("structure", h.name, f"listed in the star of {v}"))
            if len(set(h.vertices)) != len(h.vertices):
                out.append(Violation("hyperloop", h.name, "repeated vertex"))
            if not set(h.vertices) <= vset:
                out.append(Violation("structure", h.name, "unknown vertex"))
            if h.dim < 1 or (h.dim == 1 and len(h.vertices) != 2) or len(h.vertices) < 2:
                out.append(Violation("structure", h.name, "bad dimension/vertex count"))
            if len(h.weight) != g.rank:
                out.append(Violation("structure", h.name, "weight length differs from rank"))
            if h.dim > 1 and canonical(h.weight) != h.weight:
                out.append(Violation("structure", h.name, "weight not sign-canonical"))
            classes.setdefault(h.vertex_set, []).append(h)

    for vs, members in classes.items():
        where = members[0].name
        origins = sorted(h.origin for h in members)
        if len(set(origins)) != len(origins):
            out.append(Violation("multi-hyperedge", where, "two hyperedges with the same vertex set"))
        if set(origins) != set(vs):
            out.append(Violation("structure", where, f"missing at {sorted(set(vs) - set(origins))}"))
        dims = {h.dim for h in members}
        if len(dims) > 1:
            out.append(Violation("structure", where, f"dimension differs between vertices {sorted(dims)}"))
        ref = canonical(members[0].weight)
        for h in members:
            if canonical(h.weight) != ref:
                out.append(Violation("axiom-2", h.name,
                                     f"weight {fmt_weight(h.weight)} not +-{fmt_weight(ref)}"))

    for e in g.directed_edges():
        r = g.reverse(e)
        if r is None:
            out.append(Violation("axiom-1", e.name, "reverse edge missing"))
        elif r.weight != neg(e.weight):
            out.append(Violation("axiom-1", e.name,
                                 f"reverse weight {fmt_weight(r.weight)} != -{fmt_weight(e.weight)}"))

    sets = sorted(classes, key=lambda s: (len(s), sorted(s)))
    for a, b in combinations(sets, 2):
        if a < b:
            out.append(Violation("clutter", classes[a][0].name, f"contained in {classes[b][0].name}"))
        elif len(a & b) >= 2:
            out.append(Violation("multi-hyperedge", classes[a][0].name,
                                 f"shares {len(a & b)} vertices with {classes[b][0].name}"))

    for v in g.vertices:
        st = g.star(v)
        tot = sum(h.dim for h in st)
        if tot != g.valence:
            out.append(Violation("valence", v, f"sum of dimensions {tot} != {g.valence}"))
        r = intlin.rank([h.weight for h in st], g.rank) if st else 0
        if r != g.rank:
            out.append(Violation("axiom-3", v, f"weights span rank {r} < {g.rank}"))
        if g.has_tangent:
            tw = g.tangent_weights(v)
            mine = sorted(canonical(w) for w in tw)
            theirs = sorted(canonical(h.weight) for h in st for _ in range(h.dim))
            if mine != theirs:
                out.append(Violation("tangent", v, "tangent weights disagree with star labels"))
    return out


def check_axial(g: WeightHypergraph) -> None:
    bad = validate_axial(g)
    if bad:
        raise AxiomViolation(bad)


# --- definiteness and forced transport ---------------------------------------

def _require_edge(g: WeightHypergraph, e: Hyperedge) -> None:
    if e.dim != 1:
        raise NotAnEdge(f"{e.name} is not an edge")
    if g.get(e.key) != e:
        raise NotAnEdge(f"{e.name} does not belong to the hypergraph")


def is_definite_at(g: WeightHypergraph, e: Hyperedge) -> bool:
    """Affine lines ``alpha(e') + R alpha(e)`` at the origin pairwise distinct."""
    _require_edge(g, e)
    d = e.weight
    others = [h.weight for h in g.star(e.origin) if h != e]
    for a, b in combinations(others, 2):
        if intlin.proportional(sub(a, b), d):
            return False
    return True


def two_independent_at(g: WeightHypergraph, v: str) -> bool:
    """Tangent weights at ``v`` pairwise linearly independent."""
    ws = []
    for h in g.star(v):
        if h.dim > 1:
            return False
        ws.append(h.weight)
    return all(not intlin.proportional(a, b) for a, b in combinations(ws, 2))


def _multiplier(diff: Sequence[int], d: Sequence[int]) -> int | None:
    """The integer c with diff = c*d, or None when no such integer exists."""
    c = None
    for x, y in zip(diff, d):
        if y == 0:
            if x:
                return None
            continue
        if x % y:
            return None
        q = x // y
        if c is None:
            c = q
        elif c != q:
            return None
    return 0 if c is None else c


def forced_transport(g: WeightHypergraph, e: Hyperedge) -> dict[Hyperedge, Hyperedge]:
    """The unique admissible bijection along a definite edge."""
    if not is_definite_at(g, e):
        raise NotDefinite(f"{e.name} is not definite")
    rev = g.reverse(e)
    if rev is None:
        raise NoAdmissibleMatching(f"{e.name} has no reverse edge")
    d = e.weight
    src = [h for h in g.star(e.origin) if h != e]
    dst = [h for h in g.star(e.end) if h != rev]
    if len(src) != len(dst):
        raise NoAdmissibleMatching(f"{e.name}: star sizes differ")
    out = {e: rev}
    used = set()
    for h in src:
        cands = [k for k in dst if intlin.proportional(sub(k.weight, h.weight), d)]
        if len(cands) != 1 or cands[0] in used:
            raise NoAdmissibleMatching(f"{e.name}: no line match for {h.name}")
        k = cands[0]
        if _multiplier(sub(k.weight, h.weight), d) is None:
            raise NoAdmissibleMatching(f"{e.name}: non-integral multiplier for {h.name}")
        used.add(k)
        out[h] = k
    return out


def brute_force_transports(g: WeightHypergraph, e: Hyperedge) -> list[dict[Hyperedge, Hyperedge]]:
    """All bijections of stars along ``e`` satisfying the connection axioms."""
    from itertools import permutations

    _require_edge(g, e)
    rev = g.reverse(e)
    if rev is None:
        return []
    src = [h for h in g.star(e.origin) if h != e]
    dst = [h for h in g.star(e.end) if h != rev]
    if len(src) != len(dst):
        return []
    out = []
    for perm in permutations(dst):
        if all(_multiplier(sub(k.weight, h.weight), e.weight) is not None for h, k in zip(src, perm)):
            m = {e: rev}
            m.update(zip(src, perm))
            out.append(m)
    return out


# --- connections ---------------------------------------------------------------

@dataclass(frozen=True)
class Connection:
    """Partial connection: edge -> bijection between stars."""

    maps: Mapping[Hyperedge, Mapping[Hyperedge, Hyperedge]] = field(default_factory=dict)

    def __contains__(self, e: Hyperedge) -> bool:
        return e in self.maps

    def __len__(self) -> int:
        return len(self.maps)

    def domain(self) -> list[Hyperedge]:
        return sorted(self.maps)

    def apply(self, e: Hyperedge, h: Hyperedge) -> Hyperedge:
        m = self.maps.get(e)
        if m is None:
            raise PathNotCovered(f"no connection value along {e.name}")
        return m[h]

    def merged(self, other: "Connection") -> "Connection":
        d = dict(self.maps)
        d.update(other.maps)
        return Connection(d)


@dataclass
class ConnectionReport:
    violations: list[Violation]
    multipliers: dict[tuple[Hyperedge, Hyperedge], int]

    def __bool__(self) -> bool:
        return not self.violations


def validate_connection(g: WeightHypergraph, c: Connection) -> ConnectionReport:
    """Check the three connection axioms on the domain of ``c``."""
    out: list[Violation] = []
    mult: dict[tuple[Hyperedge, Hyperedge], int] = {}
    for e in c.domain():
        m = c.maps[e]
        if e.dim != 1 or g.get(e.key) != e:
            out.append(Violation("domain", e.name, "not an edge of the hypergraph"))
            continue
        rev = g.reverse(e)
        src = set(g.star(e.origin))
        dst = set(g.star(e.end))
        if set(m) != src or set(m.values()) != dst or len(set(m.values())) != len(m):
            out.append(Violation("bijection", e.name, "not a bijection between stars"))
            continue
        if m[e] != rev:
            out.append(Violation("axiom-2", e.name, f"maps itself to {m[e].name}"))
        if rev in c.maps:
            back = c.maps[rev]
            if any(back.get(k) != h for h, k in m.items()):
                out.append(Violation("axiom-1", e.name, "reverse map is not the inverse"))
        for h, k in m.items():
            cc = _multiplier(sub(k.weight, h.weight), e.weight)
            if cc is None:
                out.append(Violation("axiom-3", e.name,
                                     f"{h.name} -> {k.name} difference not an integer multiple"))
            else:
                mult[(e, h)] = cc
    return ConnectionReport(out, mult)


def forced_connection(g: WeightHypergraph, edges: Iterable[Hyperedge] | None = None,
                      skip_failures: bool = True) -> Connection:
    """Forced transports on the given edges (default: every definite edge)."""
    maps = {}
    for e in (g.directed_edges() if edges is None else edges):
        try:
            maps[e] = forced_transport(g, e)
        except (NotDefinite, NoAdmissibleMatching):
            if not skip_failures:
                raise
    return Connection(maps)


# --- paths ----------------------------------------------------------------------

@dataclass(frozen=True)
class EdgePath:
    edges: tuple[Hyperedge, ...]

    def __post_init__(self):
        if not self.edges:
            raise ValueError("empty edge path")
        for a, b in zip(self.edges, self.edges[1:]):
            if a.end != b.origin:
                raise ValueError(f"{a.name} and {b.name} are not composable")

    @property
    def start(self) -> str:
        return self.edges[0].origin

    @property
    def stop(self) -> str:
        return self.edges[-1].end

    @property
    def is_cycle(self) -> bool:
        return self.start == self.stop

    def reversed(self, g: WeightHypergraph) -> "EdgePath":
        return EdgePath(tuple(g.reverse(e) for e in reversed(self.edges)))

    def __len__(self) -> int:
        return len(self.edges)


def parallel_transport(g: WeightHypergraph, c: Connection, path: EdgePath | Sequence[Hyperedge],
                       h: Hyperedge) -> Hyperedge:
    edges = path.edges if isinstance(path, EdgePath) else tuple(path)
    for e in edges:
        h = c.apply(e, h)
    return h


def monodromy(g: WeightHypergraph, c: Connection, path: EdgePath) -> dict[Hyperedge, Hyperedge]:
    if not path.is_cycle:
        raise ValueError("monodromy needs a closed path")
    return {h: parallel_transport(g, c, path, h) for h in g.star(path.start)}


def is_internal(h: Hyperedge, vertices: frozenset[str] | set[str]) -> bool:
    return set(h.vertices) <= vertices


def is_invariant_subgraph(g: WeightHypergraph, c: Connection, sub_edges: Iterable[Hyperedge]) -> bool:
    """Transport along sub-edges keeps internal edges internal."""
    es = set()
    for e in sub_edges:
        es.add(e)
        r = g.reverse(e)
        if r is not None:
            es.add(r)
    verts = {v for e in es for v in e.vertices}
    if not _connected(verts, es):
        raise ValueError("subgraph is not connected")
    for e in sorted(es):
        for h in g.star(e.origin):
            if is_internal(h, verts) and not is_internal(c.apply(e, h), verts):
                return False
    return True


def _connected(verts, edges) -> bool:
    if not verts:
        return True
    adj = {v: set() for v in verts}
    for e in edges:
        adj[e.origin].add(e.end)
        adj[e.end].add(e.origin)
    start = min(verts)
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen == set(verts)


# --- restriction along a cocharacter map ---------------------------------------

def check_cocharacter(f: Sequence[Sequence[int]], k: int) -> int:
    """Validate a k x r surjective integer matrix; return r."""
    if len(f) != k:
        raise InvalidCocharacter(f"expected {k} rows, got {len(f)}")
    r = len(f[0]) if f else 0
    if any(len(row) != r for row in f):
        raise InvalidCocharacter("ragged matrix")
    if intlin.rank(intlin.transpose(f, r), k) != r or not intlin.is_saturated(intlin.transpose(f, r), k):
        raise InvalidCocharacter("cocharacter map is not surjective")
    return r


def restrict_action(g: WeightHypergraph, f: Sequence[Sequence[int]]) -> WeightHypergraph:
    """Weight hypergraph of the subtorus given by the cocharacter map ``f``."""
    r = check_cocharacter(f, g.rank)

    def img(w):
        return tuple(sum(w[a] * f[a][b] for a in range(g.rank)) for b in range(r))

    parent: dict[frozenset, frozenset] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in g.vertices:
        for h in g.star(v):
            parent.setdefault(h.vertex_set, h.vertex_set)
    for v in g.vertices:
        st = g.star(v)
        for h in st:
            if not any(img(h.weight)):
                raise NonIsolatedFixedPoints(f"weight of {h.name} maps to zero")
        for a, b in combinations(st, 2):
            if intlin.proportional(img(a.weight), img(b.weight)):
                ra, rb = find(a.vertex_set), find(b.vertex_set)
                if ra != rb:
                    parent[max(ra, rb, key=sorted)] = min(ra, rb, key=sorted)

    comps: dict[frozenset, list[Hyperedge]] = {}
    for v in g.vertices:
        for h in g.star(v):
            comps.setdefault(find(h.vertex_set), []).append(h)

    stars: dict[str, list[Hyperedge]] = {v: [] for v in g.vertices}
    for members in comps.values():
        verts = sorted({x for h in members for x in h.vertices})
        if len(members) == 2 and all(h.dim == 1 for h in members):
            for h in members:
                stars[h.origin].append(make_edge(h.origin, h.end, img(h.weight)))
            continue
        dims = {}
        for h in members:
            dims[h.origin] = dims.get(h.origin, 0) + h.dim
        if len(set(dims.values())) != 1:
            raise GKMError(f"merged hyperedge on {verts} has varying dimension")
        dim = next(iter(dims.values()))
        images = {canonical(img(h.weight)) for h in members}
        w = images.pop() if len(images) == 1 else canonical(intlin.primitive(img(members[0].weight)))
        for v in verts:
            stars[v].append(make_hyperedge(v, verts, dim, w))
    tangent = None
    if g.has_tangent:
        tangent = {v: [img(w) for w in g.tangent_weights(v)] for v in g.vertices}
    return WeightHypergraph(r, g.vertices, stars, g.valence, tangent, g.name)

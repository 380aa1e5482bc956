"""Equivalence of weight hypergraphs up to relabeling and a change of lattice.

``find_equivalence(g, h)`` looks for a surjective cocharacter map ``f`` and a
vertex bijection ``phi`` such that restricting ``g`` along ``f`` and renaming
by ``phi`` gives exactly ``h``.  When the ranks agree, ``f`` is a lattice
automorphism and this is plain isomorphism; when ``g`` has larger rank it
tests whether ``h`` is the hypergraph of a subtorus of ``g``'s torus.

The lattice map is pinned down at one base vertex, where the tangent weights
span the lattice rationally, by trying every injective matching of a
rational basis onto the target's tangent weights.  The vertex bijection is
then found by backtracking with local signature pruning.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations

from . import intlin
from .weightgraph import GKMError, InvalidCocharacter, WeightHypergraph, restrict_action


@dataclass(frozen=True)
class Equivalence:
    mapping: dict[str, str]
    cochar: tuple[tuple[int, ...], ...]  # rank(g) x rank(h), acts on row vectors


def _apply(f, w):
    return tuple(sum(w[a] * f[a][b] for a in range(len(f))) for b in range(len(f[0])))


def _signature(g: WeightHypergraph, v: str) -> Counter:
    return Counter((h.dim, h.weight, len(h.vertices)) for h in g.star(v))


def _basis_columns(ws: list[tuple[int, ...]], k: int) -> list[int] | None:
    """Indices of k rationally independent weights, greedily from the front."""
    chosen: list[int] = []
    for i, w in enumerate(ws):
        if intlin.rank([ws[c] for c in chosen] + [list(w)], k) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == k:
                return chosen
    return None


def candidate_maps(g: WeightHypergraph, x: str, h: WeightHypergraph, y: str):
    """Integer maps sending the tangent weights of g at x onto those of h at y."""
    src = [tuple(w) for w in g.tangent_weights(x)]
    dst = [tuple(w) for w in h.tangent_weights(y)]
    if len(src) != len(dst):
        return
    idx = _basis_columns(src, g.rank)
    if idx is None:
        return
    basis = [list(src[i]) for i in idx]  # rows
    target_count = Counter(dst)
    seen = set()
    for pick in permutations(range(len(dst)), len(idx)):
        images = [dst[p] for p in pick]
        cols = []
        for b in range(h.rank):
            sol = intlin.solve(basis, [im[b] for im in images])
            if sol is None:
                break
            cols.append(sol)
        if len(cols) != h.rank:
            continue
        f = tuple(tuple(cols[b][a] for b in range(h.rank)) for a in range(g.rank))
        if f in seen:
            continue
        seen.add(f)
        if Counter(_apply(f, w) for w in src) == target_count:
            yield f


def match_exact(g: WeightHypergraph, h: WeightHypergraph, x0: str, y0: str) -> dict[str, str] | None:
    """A vertex bijection with x0 -> y0 carrying g onto h with identical weights."""
    if len(g.vertices) != len(h.vertices) or g.rank != h.rank:
        return None
    sig_g = {v: _signature(g, v) for v in g.vertices}
    sig_h = {v: _signature(h, v) for v in h.vertices}
    if sorted(map(sorted_counter, sig_g.values())) != sorted(map(sorted_counter, sig_h.values())):
        return None

    def consistent(m: dict[str, str]) -> bool:
        for x, y in m.items():
            for e in g.star(x):
                mapped = [m.get(z) for z in e.vertices]
                if all(z is not None for z in mapped):
                    if e.dim == 1:
                        f = h.get((mapped[0], mapped[1]))
                        if f is None or f.dim != 1 or f.weight != e.weight:
                            return False
                    else:
                        if not any(f.dim == e.dim and f.weight == e.weight and set(f.vertices) == set(mapped)
                                   for f in h.star(y)):
                            return False
        return True

    def options(m: dict[str, str], used: set[str]):
        """Pick the most constrained unmapped vertex next to the mapped part."""
        best = None
        for x in sorted(m):
            y = m[x]
            for e in g.star(x):
                for z in e.vertices[1:]:
                    if z in m:
                        continue
                    cands = set()
                    for f in h.star(y):
                        if f.dim == e.dim and f.weight == e.weight and len(f.vertices) == len(e.vertices):
                            if e.dim == 1:
                                cands.add(f.end)
                            else:
                                cands.update(f.vertices[1:])
                    cands = sorted(c for c in cands - used if sig_h[c] == sig_g[z])
                    if best is None or len(cands) < len(best[1]):
                        best = (z, cands)
                        if len(cands) <= 1:
                            return best
        return best

    def search(m: dict[str, str], used: set[str]):
        if len(m) == len(g.vertices):
            return dict(m)
        opt = options(m, used)
        if opt is None:
            return None  # disconnected remainder; not expected for connected stars
        z, cands = opt
        for c in cands:
            m[z] = c
            used.add(c)
            if consistent({z: c, **{k: m[k] for k in m}}):
                res = search(m, used)
                if res is not None:
                    return res
            del m[z]
            used.discard(c)
        return None

    if sig_g[x0] != sig_h[y0]:
        return None
    m = {x0: y0}
    res = search(m, {y0})
    if res is None or not _same(g, h, res):
        return None
    return res


def sorted_counter(c: Counter) -> list:
    return sorted(c.items())


def _same(g: WeightHypergraph, h: WeightHypergraph, m: dict[str, str]) -> bool:
    for x in g.vertices:
        a = sorted((e.dim, e.weight, tuple(sorted(m[z] for z in e.vertices[1:]))) for e in g.star(x))
        b = sorted((f.dim, f.weight, tuple(sorted(f.vertices[1:]))) for f in h.star(m[x]))
        if a != b:
            return False
    return True


def find_equivalence(g: WeightHypergraph, h: WeightHypergraph) -> Equivalence | None:
    """Cocharacter map and relabeling turning g into h, or None."""
    if len(g.vertices) != len(h.vertices) or g.rank < h.rank or g.valence != h.valence:
        return None
    x0 = g.vertices[0]
    for y0 in h.vertices:
        for f in candidate_maps(g, x0, h, y0):
            try:
                r = restrict_action(g, [list(row) for row in f])
            except (InvalidCocharacter, GKMError):
                continue
            m = match_exact(r, h, x0, y0)
            if m is not None:
                return Equivalence(m, f)
    return None


def is_equivalent(g: WeightHypergraph, h: WeightHypergraph) -> bool:
    return find_equivalence(g, h) is not None


def check_equivalence(g: WeightHypergraph, h: WeightHypergraph, eq: Equivalence) -> bool:
    """Independent recheck of a claimed equivalence."""
    r = restrict_action(g, [list(row) for row in eq.cochar])
    if sorted(eq.mapping.values()) != sorted(h.vertices):
        return False
    return _same(r, h, eq.mapping)

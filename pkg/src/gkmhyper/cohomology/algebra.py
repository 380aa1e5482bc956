"""Finite free graded Z-algebras given by structure constants.

Degrees are stored halved: a class in H^{2k} has degree k.  Every ring here
has a basis of named monomials; ``monomials[i]`` records basis element i as
a product of generators, which is what lets ring maps be defined on
generators and checked on bases.
"""

from __future__ import annotations

import ast
import random
from functools import lru_cache
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .. import intlin
from ..weightgraph import GKMError


class RingError(GKMError):
    pass


class DegreeMismatch(RingError):
    pass


class TorsionQuotient(RingError):
    pass


Monomial = tuple[tuple[str, int], ...]


def mono_name(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(g if e == 1 else f"{g}^{e}" for g, e in m)


def mono_mul(a: Monomial, b: Monomial, order: Sequence[str]) -> Monomial:
    exps: dict[str, int] = {}
    for g, e in a + b:
        exps[g] = exps.get(g, 0) + e
    return tuple((g, exps[g]) for g in order if exps.get(g))


class Element:
    """An element of a GradedZAlgebra as a sparse coordinate vector."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: "GradedZAlgebra", coords: Mapping[int, int]):
        self.ring = ring
        self.c = {i: v for i, v in coords.items() if v}

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.ring is not self.ring:
                raise RingError("elements of different rings")
            return other
        if isinstance(other, int):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.c)
        for i, v in o.c.items():
            out[i] = out.get(i, 0) + v
        return Element(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.ring, {i: -v for i, v in self.c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Element(self.ring, {i: v * other for i, v in self.c.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ring.mul(self, o)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative power")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def is_zero(self) -> bool:
        return not self.c

    def vector(self) -> list[int]:
        v = [0] * self.ring.rank
        for i, x in self.c.items():
            v[i] = x
        return v

    def degrees(self) -> set[int]:
        return {self.ring.degrees[i] for i in self.c}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise DegreeMismatch(f"{self} is not homogeneous")
        return ds.pop() if ds else 0

    def __str__(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for i in sorted(self.c):
            v = self.c[i]
            name = self.ring.names[i]
            if name == "1":
                term = str(abs(v))
            else:
                term = name if abs(v) == 1 else f"{abs(v)}*{name}"
            parts.append(("-" if v < 0 else "+", term))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s

    __repr__ = __str__


class GradedZAlgebra:
    """Commutative graded ring, free of finite rank over Z.

    ``table[(i, j)]`` (i <= j) holds the nonzero structure constants of
    ``b_i * b_j`` as a tuple of (index, coefficient) pairs.
    """

    def __init__(self, names: Sequence[str], degrees: Sequence[int],
                 table: Mapping[tuple[int, int], Iterable[tuple[int, int]]],
                 generators: Sequence[str] = (), monomials: Sequence[Monomial] | None = None,
                 gen_elements: Mapping[str, Mapping[int, int]] | None = None, check: str = "auto"):
        self.names = list(names)
        self.degrees = list(degrees)
        self.rank = len(self.names)
        self.table = {}
        for (i, j), terms in table.items():
            key = (i, j) if i <= j else (j, i)
            terms = tuple((k, c) for k, c in terms if c)
            if terms:
                self.table[key] = terms
        self.generators = list(generators)
        self.monomials = list(monomials) if monomials is not None else None
        self._gens = {}
        if gen_elements is not None:
            for g, coords in gen_elements.items():
                self._gens[g] = dict(coords)
        elif self.monomials is not None:
            for g in self.generators:
                idx = self.monomials.index(((g, 1),)) if ((g, 1),) in self.monomials else None
                if idx is not None:
                    self._gens[g] = {idx: 1}
        if self.degrees and (self.degrees[0] != 0 or self.names[0] != "1"):
            raise RingError("basis element 0 must be the unit of degree 0")
        if check != "none":
            self.check(full=(check == "full") or (check == "auto" and self.rank <= FULL_CHECK_RANK))

    # construction helpers -----------------------------------------------------
    def one(self) -> Element:
        return Element(self, {0: 1})

    def zero(self) -> Element:
        return Element(self, {})

    def scalar(self, n: int) -> Element:
        return Element(self, {0: n})

    def basis(self, i: int) -> Element:
        return Element(self, {i: 1})

    def gen(self, name: str) -> Element:
        if name not in self._gens:
            raise RingError(f"unknown generator {name!r}")
        return Element(self, self._gens[name])

    def element(self, vec: Sequence[int]) -> Element:
        return Element(self, {i: v for i, v in enumerate(vec) if v})

    def index(self, name: str) -> int:
        return self.names.index(name)

    # arithmetic -----------------------------------------------------------------
    def mul_basis(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        return self.table.get((i, j) if i <= j else (j, i), ())

    def mul(self, a: Element, b: Element) -> Element:
        out: dict[int, int] = {}
        for i, x in a.c.items():
            for j, y in b.c.items():
                for k, c in self.mul_basis(i, j):
                    out[k] = out.get(k, 0) + x * y * c
        return Element(self, out)

    def parse(self, text: str) -> Element:
        """Evaluate an expression in the generators, e.g. ``x2^2 + x2*y2``."""
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise RingError(f"cannot parse {text!r}: {exc.msg}") from None

        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, int):
                return self.scalar(node.value)
            if isinstance(node, ast.Name):
                return self.gen(node.id)
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
                v = ev(node.operand)
                return -v if isinstance(node.op, ast.USub) else v
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Pow):
                    if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                        raise RingError("exponents must be integer literals")
                    return ev(node.left) ** node.right.value
                left, right = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return left + right
                if isinstance(node.op, ast.Sub):
                    return left - right
                if isinstance(node.op, ast.Mult):
                    return left * right
            raise RingError(f"unsupported syntax in {text!r}")

        return ev(tree)

    # structure ------------------------------------------------------------------
    def graded_ranks(self) -> list[int]:
        top = max(self.degrees) if self.degrees else 0
        out = [0] * (top + 1)
        for d in self.degrees:
            out[d] += 1
        return out

    def indices_in_degree(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]

    def check(self, full: bool = True, samples: int = 1000, seed: int = 0) -> None:
        """Unit law, grading and associativity (exhaustive or sampled)."""
        n = self.rank
        for i in range(n):
            if self.mul_basis(0, i) != ((i, 1),):
                raise RingError(f"unit law fails on {self.names[i]}")
        for (i, j), terms in self.table.items():
            for k, _ in terms:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise DegreeMismatch(f"{self.names[i]}*{self.names[j]} leaves its degree")
        # commutativity is built into the table, so sorted triples in all
        # three bracketings cover every associativity instance
        if full:
            triples = ((i, j, k) for i in range(1, n) for j in range(i, n) for k in range(j, n))
        else:
            rng = random.Random(seed)
            triples = [tuple(sorted(rng.randrange(1, n) for _ in range(3))) for _ in range(samples)] if n > 1 else []
        top = self.top_degree
        degs = self.degrees
        for i, j, k in triples:
            if degs[i] + degs[j] + degs[k] > top:
                continue
            r1 = self._triple(i, j, k)
            if r1 != self._triple(j, k, i) or r1 != self._triple(i, k, j):
                raise RingError(f"associativity fails on {self.names[i]}, {self.names[j]}, {self.names[k]}")

    def _triple(self, i: int, j: int, k: int) -> dict[int, int]:
        """(b_i b_j) b_k."""
        out: dict[int, int] = {}
        for p, x in self.mul_basis(i, j):
            for q, y in self.mul_basis(p, k):
                out[q] = out.get(q, 0) + x * y
        return {q: v for q, v in out.items() if v}

    @property
    def top_degree(self) -> int:
        return max(self.degrees) if self.degrees else 0

    def mult_matrix(self, x: Element, src: Sequence[int], dst: Sequence[int]) -> list[list[int]]:
        """Rows: coordinates (on ``dst``) of x * b for b in ``src``."""
        pos = {k: n for n, k in enumerate(dst)}
        rows = []
        for i in src:
            p = x * self.basis(i)
            row = [0] * len(dst)
            for k, v in p.c.items():
                if k not in pos:
                    raise DegreeMismatch("multiplication leaves the target degree")
                row[pos[k]] = v
            rows.append(row)
        return rows

    def monomial_element(self, m: Monomial) -> Element:
        out = self.one()
        for g, e in m:
            out = out * self.gen(g) ** e
        return out

    def to_dict(self) -> dict:
        return {"basis": self.names, "degrees": self.degrees, "generators": self.generators,
                "mult": [[i, j, [list(t) for t in terms]] for (i, j), terms in sorted(self.table.items())]}

    def __repr__(self) -> str:
        return f"GradedZAlgebra(rank={self.rank}, graded={self.graded_ranks()})"


# Exhaustive associativity up to this rank, seeded sampling above.
FULL_CHECK_RANK = 64


# --- constructors ---------------------------------------------------------------

def _from_monomial_rule(names_gens: Sequence[str], basis: Sequence[Monomial], normal, check="auto"):
    """Build a ring whose basis is closed under a normal-form rule on monomials.

    ``normal(m)`` returns (coefficient, normal monomial) or None for zero.
    """
    idx = {m: n for n, m in enumerate(basis)}
    table = {}
    for i, a in enumerate(basis):
        for j in range(i, len(basis)):
            nf = normal(mono_mul(a, basis[j], names_gens))
            if nf is not None:
                c, m = nf
                table[(i, j)] = ((idx[m], c),)
    degs = [sum(e for _, e in m) for m in basis]
    return GradedZAlgebra([mono_name(m) for m in basis], degs, table, names_gens, basis, check=check)


@lru_cache(maxsize=64)
def ring_projective(n: int, var: str = "y") -> GradedZAlgebra:
    """Z[y]/(y^{n+1})."""
    if n < 0:
        raise RingError("n must be >= 0")
    basis = [() if e == 0 else ((var, e),) for e in range(n + 1)]

    def normal(m):
        e = dict(m).get(var, 0)
        return None if e > n else (1, m)

    return _from_monomial_rule([var] if n >= 1 else [], basis, normal)


def bf_normal(m: Monomial, var: str, n: int):
    """Rewrite x_q^2 -> x_q x_{q-1} (x_0 = 0) to a square-free monomial or zero."""
    e = [0] * (n + 1)
    for g, x in m:
        e[int(g[len(var):])] += x
    while True:
        q = next((q for q in range(n, 0, -1) if e[q] >= 2), None)
        if q is None:
            break
        if q == 1:
            return None
        e[q] -= 1
        e[q - 1] += 1
    return 1, tuple((f"{var}{q}", 1) for q in range(1, n + 1) if e[q])


@lru_cache(maxsize=64)
def ring_bf(n: int, var: str = "x") -> GradedZAlgebra:
    """Z[x_1..x_n]/(x_q^2 - x_q x_{q-1}), x_0 = 0; square-free monomial basis."""
    if n < 0:
        raise RingError("n must be >= 0")
    gens = [f"{var}{q}" for q in range(1, n + 1)]
    basis = []
    for k in range(n + 1):
        for s in combinations(range(1, n + 1), k):
            basis.append(tuple((f"{var}{q}", 1) for q in s))
    return _from_monomial_rule(gens, basis, lambda m: bf_normal(m, var, n))


def ring_tensor(a: GradedZAlgebra, b: GradedZAlgebra, check: str = "auto") -> GradedZAlgebra:
    """Tensor product over Z with basis pairs ordered by total degree."""
    pairs = sorted(product(range(a.rank), range(b.rank)),
                   key=lambda p: (a.degrees[p[0]] + b.degrees[p[1]], p))
    idx = {p: n for n, p in enumerate(pairs)}
    table = {}
    for n1, (i, j) in enumerate(pairs):
        for n2 in range(n1, len(pairs)):
            k, l = pairs[n2]
            ta, tb = a.mul_basis(i, k), b.mul_basis(j, l)
            terms = {}
            for p, x in ta:
                for q, y in tb:
                    terms[idx[(p, q)]] = terms.get(idx[(p, q)], 0) + x * y
            if terms:
                table[(n1, n2)] = tuple(sorted(terms.items()))
    monos = None
    if a.monomials is not None and b.monomials is not None:
        monos = [a.monomials[i] + b.monomials[j] for i, j in pairs]
    names = [mono_name(m) for m in monos] if monos is not None else \
        [_pair_name(a.names[i], b.names[j]) for i, j in pairs]
    gens = {}
    for g, coords in a._gens.items():
        gens[g] = {idx[(i, 0)]: v for i, v in coords.items()}
    for g, coords in b._gens.items():
        gens[g] = {idx[(0, j)]: v for j, v in coords.items()}
    return GradedZAlgebra(names, [a.degrees[i] + b.degrees[j] for i, j in pairs], table,
                          a.generators + b.generators, monos, gens, check=check)


def _pair_name(x: str, y: str) -> str:
    if x == "1":
        return y
    if y == "1":
        return x
    return f"{x}*{y}"


# --- ideals and quotients ---------------------------------------------------------

@dataclass
class IdealZ:
    """A homogeneous ideal stored as a Hermite basis in each degree."""

    ring: GradedZAlgebra
    span: dict[int, list[list[int]]]  # degree -> HNF rows on that degree's basis

    def basis_elements(self) -> list[Element]:
        out = []
        for d in sorted(self.span):
            idx = self.ring.indices_in_degree(d)
            for row in self.span[d]:
                out.append(Element(self.ring, {idx[n]: v for n, v in enumerate(row) if v}))
        return out

    @property
    def rank(self) -> int:
        return sum(len(r) for r in self.span.values())

    def contains(self, x: Element) -> bool:
        for d in x.degrees():
            idx = self.ring.indices_in_degree(d)
            v = [x.c.get(i, 0) for i in idx]
            if not intlin.in_lattice(self.span.get(d, []), v):
                return False
        return True

    def __le__(self, other: "IdealZ") -> bool:
        return all(other.contains(e) for e in self.basis_elements())

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdealZ):
            return NotImplemented
        return self <= other and other <= self

    def is_ideal(self) -> bool:
        return all(self.contains(e * self.ring.basis(i))
                   for e in self.basis_elements() for i in range(self.ring.rank))


def _span(ring: GradedZAlgebra, elems: Iterable[Element]) -> dict[int, list[list[int]]]:
    rows: dict[int, list[list[int]]] = {}
    for e in elems:
        for d in e.degrees():
            idx = ring.indices_in_degree(d)
            rows.setdefault(d, []).append([e.c.get(i, 0) for i in idx])
    out = {}
    for d, rs in rows.items():
        h = intlin.hnf(rs, len(ring.indices_in_degree(d)))
        if h:
            out[d] = h
    return out


def ideal(ring: GradedZAlgebra, generators: Iterable[Element | str]) -> IdealZ:
    """Ideal generated by the given elements (strings are parsed)."""
    gens = [ring.parse(g) if isinstance(g, str) else g for g in generators]
    prods = [g * ring.basis(i) for g in gens for i in range(ring.rank)]
    return IdealZ(ring, _span(ring, prods))


def annihilator(ring: GradedZAlgebra, x: Element | str) -> IdealZ:
    """The Z-module kernel of multiplication by a homogeneous x."""
    if isinstance(x, str):
        x = ring.parse(x)
    dx = x.degree()
    span = {}
    for d in range(ring.top_degree + 1):
        src = ring.indices_in_degree(d)
        dst = ring.indices_in_degree(d + dx)
        if not src:
            continue
        if not dst:
            span[d] = intlin.identity(len(src))
            continue
        k = intlin.left_kernel(ring.mult_matrix(x, src, dst), len(dst))
        h = intlin.hnf(k, len(src))
        if h:
            span[d] = h
    return IdealZ(ring, span)


def greedy_generators(I: IdealZ) -> list[Element]:
    """A small generating set, built degree by degree; not claimed minimal."""
    ring = I.ring
    chosen: list[Element] = []
    current = IdealZ(ring, {})
    for e in I.basis_elements():
        if current.contains(e):
            continue
        chosen.append(e)
        current = ideal(ring, chosen)
    return chosen


@dataclass
class Quotient:
    ring: GradedZAlgebra          # the quotient ring
    source: GradedZAlgebra
    ideal: IdealZ
    chosen: list[int]             # source basis indices giving the quotient basis
    images: dict[int, tuple[tuple[int, int], ...]]  # source basis -> quotient coordinates

    def project(self, a: Element) -> Element:
        return Element(self.ring, _project(self.images, a))


def _project(images, a: Element) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in a.c.items():
        for qi, c in images[i]:
            out[qi] = out.get(qi, 0) + x * c
    return out


def quotient(ring: GradedZAlgebra, I: IdealZ, check: str = "auto") -> Quotient:
    """A/I with basis given by images of source monomials."""
    chosen: list[int] = []
    images: dict[int, tuple[tuple[int, int], ...]] = {}
    names, degs, monos = [], [], []
    qpos = 0
    for d in range(ring.top_degree + 1):
        src = ring.indices_in_degree(d)
        if not src:
            continue
        rows = I.span.get(d, [])
        if rows and not intlin.is_saturated(rows, len(src)):
            raise TorsionQuotient(f"quotient has torsion in degree {d}")
        # dual rows phi with phi . r = 0 for every ideal row: coordinates on A_d / I_d
        phi = intlin.kernel(rows, len(src)) if rows else intlin.identity(len(src))
        q = len(phi)
        if q == 0:
            for i in src:
                images[i] = ()
            continue
        pick = _unimodular_columns(phi, q)
        cmat = [[phi[r][c] for c in pick] for r in range(q)]
        mat = intlin.matmul(intlin.inverse_unimodular(cmat), phi)
        for col, i in enumerate(src):
            images[i] = tuple((qpos + r, mat[r][col]) for r in range(q) if mat[r][col])
        for c in pick:
            chosen.append(src[c])
            names.append(ring.names[src[c]])
            degs.append(d)
            monos.append(ring.monomials[src[c]] if ring.monomials is not None else None)
        qpos += q

    table = {}
    for a in range(len(chosen)):
        for b in range(a, len(chosen)):
            t = _project(images, ring.basis(chosen[a]) * ring.basis(chosen[b]))
            t = {k: v for k, v in t.items() if v}
            if t:
                table[(a, b)] = tuple(sorted(t.items()))
    gens = {g: _project(images, ring.gen(g)) for g in ring._gens}
    mono_list = monos if all(m is not None for m in monos) else None
    qring = GradedZAlgebra(names, degs, table, ring.generators, mono_list, gens, check=check)
    return Quotient(qring, ring, I, chosen, images)


def _unimodular_columns(phi: list[list[int]], q: int) -> list[int]:
    """Greedy choice of q columns of phi forming a unimodular matrix."""
    ncols = len(phi[0])
    cols = [[phi[r][c] for r in range(q)] for c in range(ncols)]
    pick: list[int] = []
    for c in range(ncols):
        trial = [cols[x] for x in pick + [c]]
        if intlin.rank(trial, q) == len(trial) and intlin.is_saturated(trial, q):
            pick.append(c)
            if len(pick) == q:
                return pick
    # greedy failed; exhaustive fallback (small in practice)
    for comb in combinations(range(ncols), q):
        if abs(intlin.det([[phi[r][c] for c in comb] for r in range(q)])) == 1:
            return list(comb)
    raise RingError("no monomial basis for the quotient in this degree")


# --- ring maps -------------------------------------------------------------------

@dataclass
class RingMap:
    """A map defined on generators, extended to monomial bases."""

    source: GradedZAlgebra
    target: GradedZAlgebra
    images: dict[str, Element]

    def basis_image(self, i: int) -> Element:
        m = self.source.monomials[i]
        out = self.target.one()
        for g, e in m:
            out = out * self.images[g] ** e
        return out

    def __call__(self, a: Element) -> Element:
        out = self.target.zero()
        for i, v in a.c.items():
            out = out + self.basis_image(i) * v
        return out

    def matrix(self) -> list[list[int]]:
        """Row i = target coordinates of the image of source basis i."""
        return [self.basis_image(i).vector() for i in range(self.source.rank)]

    def problems(self) -> list[str]:
        """Everything that stops this from being a degree-preserving ring map."""
        out = []
        if self.source.monomials is None:
            return ["source ring has no monomial basis"]
        for g in self.source.generators:
            if g not in self.images:
                out.append(f"no image for generator {g}")
                continue
            img = self.images[g]
            if self.source._gens.get(g) is not None:
                src = self.source.gen(g)
                if self(src) != img:
                    out.append(f"generator {g} is not the basis monomial it names")
                if not img.is_zero() and img.degrees() != {src.degree()}:
                    out.append(f"image of {g} has the wrong degree")
        if out:
            return out
        n = self.source.rank
        imgs = [self.basis_image(i) for i in range(n)]
        for i in range(n):
            if not imgs[i].is_zero() and imgs[i].degrees() != {self.source.degrees[i]}:
                out.append(f"image of {self.source.names[i]} has the wrong degree")
        for i in range(n):
            for j in range(i, n):
                prod = self.source.basis(i) * self.source.basis(j)
                if self(prod) != imgs[i] * imgs[j]:
                    out.append(f"not multiplicative on {self.source.names[i]}, {self.source.names[j]}")
        return out

    def is_ring_map(self) -> bool:
        return not self.problems()

    def is_isomorphism(self) -> bool:
        if self.source.rank != self.target.rank or not self.is_ring_map():
            return False
        return abs(intlin.det(self.matrix())) == 1

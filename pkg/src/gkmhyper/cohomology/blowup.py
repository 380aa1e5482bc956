"""Cohomology of a blow-up along a subvariety, from ring-level data.

Additively the ring is H*(X) plus copies of H*(Z) multiplied by v, ..., v^{k-1}.
Products follow x v = i*(x) v and
v^k = -(c_1 v^{k-1} + ... + c_{k-1} v) - omega,
where a class z of H*(Z) times omega means lift(z) * omega for any lift of z
along the (surjective) restriction map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import intlin
from .algebra import (DegreeMismatch, Element, GradedZAlgebra, RingError, RingMap, ring_bf,
                      ring_projective, ring_tensor)


@dataclass
class BlowupData:
    ambient: GradedZAlgebra
    center: GradedZAlgebra
    restriction: dict[str, str | Element]  # ambient generator -> center element
    chern: list[str | Element]              # c_1, ..., c_{k-1} of the normal bundle
    omega: str | Element                    # class of the center in H^{2k}(X)
    codim: int
    var: str = "v"
    name: str = ""

    def resolved(self):
        def el(ring, x):
            return ring.parse(x) if isinstance(x, str) else x
        res = RingMap(self.ambient, self.center,
                      {g: el(self.center, x) for g, x in self.restriction.items()})
        chern = [el(self.center, c) for c in self.chern]
        omega = el(self.ambient, self.omega)
        return res, chern, omega


@dataclass
class BlowupRing:
    ring: GradedZAlgebra
    data: BlowupData
    ambient_index: list[int]                 # ambient basis i -> blow-up index
    v_index: dict[tuple[int, int], int] = field(default_factory=dict)  # (center basis, power) -> index


def blowup_ring(d: BlowupData, check: str = "auto") -> BlowupRing:
    A, Z, k = d.ambient, d.center, d.codim
    if k < 1:
        raise DegreeMismatch("codimension must be positive")
    res, chern, omega = d.resolved()
    probs = res.problems()
    if probs:
        raise DegreeMismatch("restriction is not a ring map: " + "; ".join(probs[:3]))
    if len(chern) != k - 1:
        raise DegreeMismatch(f"need {k - 1} Chern classes, got {len(chern)}")
    for s, c in enumerate(chern, start=1):
        if not c.is_zero() and c.degrees() != {s}:
            raise DegreeMismatch(f"c_{s} has the wrong degree")
    if omega.is_zero() or omega.degrees() != {k}:
        raise DegreeMismatch("omega must be nonzero of degree k")
    lift_rows = res.matrix()  # rows: center coordinates of i*(ambient basis)

    def lift(z: Element) -> Element:
        sol = intlin.solve(intlin.transpose(lift_rows, Z.rank), z.vector())
        if sol is None:
            raise RingError("restriction map is not surjective")
        return A.element(sol)

    # basis: ambient first, then z * v^l by degree
    names = list(A.names)
    degs = list(A.degrees)
    monos = list(A.monomials) if A.monomials is not None else None
    v_index = {}
    for l in range(1, k):
        for zi in range(Z.rank):
            v_index[(zi, l)] = len(names)
            vl = d.var if l == 1 else f"{d.var}^{l}"
            names.append(vl if Z.names[zi] == "1" else f"{Z.names[zi]}*{vl}")
            degs.append(Z.degrees[zi] + l)
            if monos is not None:
                monos.append(None)
    n = len(names)
    omega_res = res(omega)

    def zv(z: Element, p: int) -> dict[int, int]:
        """Coordinates of z * v^p for p >= 1, reducing powers p >= k."""
        out: dict[int, int] = {}

        def add(coords, sign=1):
            for i, x in coords.items():
                out[i] = out.get(i, 0) + sign * x

        if z.is_zero():
            return out
        if p < k:
            add({v_index[(zi, p)]: x for zi, x in z.c.items()})
            return out
        for s, c in enumerate(chern, start=1):
            if not c.is_zero():
                add(zv(z * c, p - s), -1)
        if p == k:
            add({i: x for i, x in (lift(z) * omega).c.items()}, -1)
        else:
            add(zv(z * omega_res, p - k), -1)
        return out

    def product_of(i: int, j: int) -> dict[int, int]:
        ai, aj = i < A.rank, j < A.rank
        if ai and aj:
            return dict((A.basis(i) * A.basis(j)).c)
        if ai or aj:
            a, b = (i, j) if ai else (j, i)
            zi, l = next(key for key, idx in v_index.items() if idx == b)
            return zv(res.basis_image(a) * Z.basis(zi), l)
        (zi, l) = next(key for key, idx in v_index.items() if idx == i)
        (zj, m) = next(key for key, idx in v_index.items() if idx == j)
        return zv(Z.basis(zi) * Z.basis(zj), l + m)

    # order basis by degree so the unit stays first and ranks read off cleanly
    order = sorted(range(n), key=lambda i: (degs[i], i))
    pos = {old: new for new, old in enumerate(order)}
    table = {}
    for i in range(n):
        for j in range(i, n):
            t = product_of(i, j)
            t = {pos[a]: x for a, x in t.items() if x}
            if t:
                a, b = sorted((pos[i], pos[j]))
                table[(a, b)] = tuple(sorted(t.items()))
    gens = {g: {pos[i]: x for i, x in A.gen(g).c.items()} for g in A.generators}
    gens[d.var] = {pos[v_index[(0, 1)]]: 1} if k >= 2 else {}
    ring = GradedZAlgebra([names[i] for i in order], [degs[i] for i in order], table,
                          A.generators + [d.var], None, gens, check=check)
    return BlowupRing(ring, d, [pos[i] for i in range(A.rank)],
                      {key: pos[i] for key, i in v_index.items()})


def preset_r22() -> BlowupData:
    """R_{2,2} as the blow-up of BF_1 x BF_2 along a rational curve."""
    ambient = ring_tensor(ring_bf(1, "x"), ring_bf(2, "y"))
    center = ring_projective(1, "t")
    return BlowupData(ambient, center, {"x1": "t", "y1": "t", "y2": "t"},
                      ["3*t"], "(x1 + y1)*y2", 2, name="R22")


PRESETS = {"r22": preset_r22}

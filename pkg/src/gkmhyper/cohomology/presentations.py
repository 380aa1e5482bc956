"""Cohomology rings of BR_{i,j} and R_{i,j} as quotients by annihilators.

The ambient ring is H*(BF_i) tensor H*(P^j) (resp. H*(BF_j)), and the
hypersurface's ring is the ambient ring modulo Ann(x_i + y) (resp.
Ann(x_i + y_j)), with x_0 = y_0 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..families import InvalidParams
from .algebra import (Element, GradedZAlgebra, IdealZ, Quotient, annihilator, greedy_generators,
                      quotient, ring_bf, ring_projective, ring_tensor)


@dataclass
class Presentation:
    family: str
    i: int
    j: int
    ambient: GradedZAlgebra
    divisor: Element
    ann: IdealZ
    quotient: Quotient

    @property
    def ring(self) -> GradedZAlgebra:
        return self.quotient.ring

    def ambient_relations(self) -> list[str]:
        out = []
        for q in range(1, self.i + 1):
            out.append(f"x{q}^2" if q == 1 else f"x{q}^2 - x{q}*x{q - 1}")
        if self.family == "br":
            out.append(f"y^{self.j + 1}")
        else:
            for r in range(1, self.j + 1):
                out.append(f"y{r}^2" if r == 1 else f"y{r}^2 - y{r}*y{r - 1}")
        return out

    def ann_generators(self) -> list[Element]:
        return greedy_generators(self.ann)

    def relation_lines(self) -> list[str]:
        gens = [g for g in self.ambient.generators]
        lines = [f"generators: {', '.join(gens)}"]
        lines += [f"relation: {r}" for r in self.ambient_relations()]
        lines += [f"annihilator: {e}" for e in self.ann_generators()]
        return lines


def _check(family: str, i: int, j: int):
    if i < 0 or j < 0:
        raise InvalidParams("indices must be nonnegative")
    if family == "br" and i == 0 and j < 2:
        raise InvalidParams(f"BR_{{{i},{j}}} is empty or a point")
    if family == "r" and i + j < 2:
        raise InvalidParams(f"R_{{{i},{j}}} is empty or a point")


def presentation_br(i: int, j: int) -> Presentation:
    _check("br", i, j)
    ambient = ring_tensor(ring_bf(i, "x"), ring_projective(j, "y"))
    terms = ([f"x{i}"] if i >= 1 else []) + (["y"] if j >= 1 else [])
    x = ambient.parse(" + ".join(terms))
    ann = annihilator(ambient, x)
    return Presentation("br", i, j, ambient, x, ann, quotient(ambient, ann))


def presentation_r(i: int, j: int) -> Presentation:
    _check("r", i, j)
    ambient = ring_tensor(ring_bf(i, "x"), ring_bf(j, "y"))
    terms = ([f"x{i}"] if i >= 1 else []) + ([f"y{j}"] if j >= 1 else [])
    x = ambient.parse(" + ".join(terms))
    ann = annihilator(ambient, x)
    return Presentation("r", i, j, ambient, x, ann, quotient(ambient, ann))


def presentation(family: str, i: int, j: int) -> Presentation:
    if family == "br":
        return presentation_br(i, j)
    if family == "r":
        return presentation_r(i, j)
    raise InvalidParams(f"no cohomology presentation for family {family!r}")

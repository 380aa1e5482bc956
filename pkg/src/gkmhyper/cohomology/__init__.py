"""Integral cohomology rings and Betti numbers of the hypersurface families."""

from .algebra import (DegreeMismatch, Element, GradedZAlgebra, IdealZ, Quotient, RingError, RingMap,
                      TorsionQuotient, annihilator, greedy_generators, ideal, quotient, ring_bf,
                      ring_projective, ring_tensor)
from .blowup import BlowupData, BlowupRing, blowup_ring, preset_r22
from .hodge import (betti_br_binomial, betti_from_hd, betti_r_binomial, hd, hd_br, hd_br_recursive,
                    hd_r, hd_r_recursive, is_palindromic)
from .presentations import Presentation, presentation, presentation_br, presentation_r

__all__ = [
    "DegreeMismatch", "Element", "GradedZAlgebra", "IdealZ", "Quotient", "RingError", "RingMap",
    "TorsionQuotient", "annihilator", "greedy_generators", "ideal", "quotient", "ring_bf",
    "ring_projective", "ring_tensor", "BlowupData", "BlowupRing", "blowup_ring", "preset_r22",
    "betti_br_binomial", "betti_from_hd", "betti_r_binomial", "hd", "hd_br", "hd_br_recursive",
    "hd_r", "hd_r_recursive", "is_palindromic", "Presentation", "presentation", "presentation_br",
    "presentation_r",
]

from .iterations import IterationTrace, finite_intersection, key_lemma_iterate, triple_intersection_iterate
from .multimedian import MultimedianCoeffs, multimedian
from .strongly_convex import (
    externally_glued_intersection,
    gated_subset_witness,
    strongly_convex_glued_intersection,
)

__all__ = [
    "IterationTrace",
    "finite_intersection",
    "key_lemma_iterate",
    "triple_intersection_iterate",
    "MultimedianCoeffs",
    "multimedian",
    "externally_glued_intersection",
    "gated_subset_witness",
    "strongly_convex_glued_intersection",
]

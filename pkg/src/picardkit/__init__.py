"""Exact arithmetic for Picard lattices of Del Pezzo surface models,
conic-fibration pair analysis, rational polyhedral cones, and double covers
of products of projective lines."""

from .lattice import (
    DivisorClass,
    SurfaceModel,
    adjunction_genus,
    canonical_class,
    pairing,
    top_intersection,
)

__version__ = "0.1.0"

__all__ = [
    "DivisorClass",
    "SurfaceModel",
    "adjunction_genus",
    "canonical_class",
    "pairing",
    "top_intersection",
    "__version__",
]

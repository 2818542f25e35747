"""Generalized means and the geometry of their pullback metrics."""

from ._core import (
    ConvexPotential,
    DiffeoMap,
    GeoError,
    bregman_divergence,
    builtin_map,
    builtin_potential,
    catalog_maps,
    catalog_potentials,
    compare,
    conjugate,
    distance,
    flow,
    geodesic,
    map_integrability,
    mean,
    mean_1d,
    potential_to_map,
)

__all__ = [
    "ConvexPotential",
    "DiffeoMap",
    "GeoError",
    "bregman_divergence",
    "builtin_map",
    "builtin_potential",
    "catalog_maps",
    "catalog_potentials",
    "compare",
    "conjugate",
    "distance",
    "flow",
    "geodesic",
    "map_integrability",
    "mean",
    "mean_1d",
    "potential_to_map",
]

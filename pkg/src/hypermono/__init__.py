"""Numerical companion for the moduli-space geometry of hyperbolic monopoles."""

from .geometry import FDScheme, Point, random_points
from .integrate import QuadratureSpec, equivariant_index, integrate_h3
from .monopole import FieldConfig, gauge_transform, one_monopole

__all__ = ["FDScheme", "FieldConfig", "Point", "QuadratureSpec", "equivariant_index",
           "gauge_transform", "integrate_h3", "one_monopole", "random_points"]
__version__ = "0.1.0"

"""Porous self-similar fractal constructions and their shift dynamics.

Submodules:
  geometry   convex polygons, affine maps, measures, distances
  codespace  symbolic addresses, infinite codes, the shift
  scheme     subdivision schemes, cell trees, point realization
  verifier   numerical checks of the subdivision conditions
  dynamics   finite-horizon chaos witnesses for the shift map
  ifs        iterated-function-system view and the inverse branch map
  render     deterministic SVG output
  cli        command-line interface
"""

from .config import Caps, Tolerances
from .scheme import BUILTIN_NAMES, Scheme, build_tree, builtin, load, realize_point

__all__ = [
    "BUILTIN_NAMES",
    "Caps",
    "Scheme",
    "Tolerances",
    "build_tree",
    "builtin",
    "load",
    "realize_point",
]

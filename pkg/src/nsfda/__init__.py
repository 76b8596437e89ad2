"""Finite-difference approximations of 2D incompressible Navier-Stokes: numerics
and the symbolic consistency machinery."""
from .exact import ExactSolution
from .grid import ConfigError, GridSpec, make_grid
from .stencils import SchemeId

__all__ = ["ConfigError", "ExactSolution", "GridSpec", "SchemeId", "make_grid"]
__version__ = "0.1.0"

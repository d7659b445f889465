"""Homological stabilizer codes on finite cell complexes."""

from .complex_core import (
    Cell,
    CellComplex,
    boundary_matrix,
    circle,
    coboundary_matrix,
    dual_complex,
    interval,
    projective_plane_min,
    sphere_cube,
    torus_grid,
    validate_complex,
)
from .exceptions import HomcodeError
from .homology import ChainVector, FgAbelianGroup, cohomology, homology
from .snf import smith_normal_form
from .stabilizer import HomologicalCode, QuditPauliOperator, build_code, code_dimension, symplectic_phase

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "CellComplex",
    "ChainVector",
    "FgAbelianGroup",
    "HomcodeError",
    "HomologicalCode",
    "QuditPauliOperator",
    "boundary_matrix",
    "build_code",
    "circle",
    "coboundary_matrix",
    "code_dimension",
    "cohomology",
    "dual_complex",
    "homology",
    "interval",
    "projective_plane_min",
    "smith_normal_form",
    "sphere_cube",
    "symplectic_phase",
    "torus_grid",
    "validate_complex",
]

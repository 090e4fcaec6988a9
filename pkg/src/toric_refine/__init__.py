"""Toric blow-up refinements of dual complexes and exact verification of the
wall identity and the key formula for obstruction maps."""

__version__ = "0.1.0"

from .complex import DualComplex, adjacent_vertices, build_complex, walls
from .lattice import cone_multiplicity, is_regular, primitive, wall_relation
from .resolution import (
    ConeFamilyRecord,
    LocalFanState,
    blowup_subdivide,
    check_terminal,
    default_schedule,
    initial_state,
    run_schedule,
    sigma_dual_generators,
)
from .refinement import Refinement, from_state, import_triangulation, psi, relative_adjacent, relative_walls
from .obstruction import ObstructionTables, compute_tables, distance_table, intersection_table, verify_wall_identity
from .chow import (
    CycleExpression,
    RestrictedOneCycle,
    SymbolicOneCycle,
    WallClass,
    phi_base,
    phi_refined,
    pushforward,
    verify_key_formula,
)

__all__ = [
    "DualComplex",
    "adjacent_vertices",
    "build_complex",
    "walls",
    "cone_multiplicity",
    "is_regular",
    "primitive",
    "wall_relation",
    "ConeFamilyRecord",
    "LocalFanState",
    "blowup_subdivide",
    "check_terminal",
    "default_schedule",
    "initial_state",
    "run_schedule",
    "sigma_dual_generators",
    "Refinement",
    "from_state",
    "import_triangulation",
    "psi",
    "relative_adjacent",
    "relative_walls",
    "ObstructionTables",
    "compute_tables",
    "distance_table",
    "intersection_table",
    "verify_wall_identity",
    "CycleExpression",
    "RestrictedOneCycle",
    "SymbolicOneCycle",
    "WallClass",
    "phi_base",
    "phi_refined",
    "pushforward",
    "verify_key_formula",
]

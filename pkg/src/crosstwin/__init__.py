"""Austenite interfaces with crossing Type-II / compound twins in cubic-to-orthorhombic martensite."""

__version__ = "0.1.0"

from .crossing import (  # noqa: E402
    BranchPoint, BranchSet, ConditionReport, GCoefficients, NormalCurve, ParallelogramSystem,
    build_system, check_conditions, g_coefficients, g_eval, macroscopic_M, middle_eig_condition,
    normal_curves, solve_branches,
)
from .interface import ClassicalInterface, InterfaceSolution, classical_interface, rank_one_to_identity  # noqa: E402
from .numerics3 import SymEig3, cof3, det3, frob_inner, inv3, sym_eig3  # noqa: E402
from .twinning import (  # noqa: E402
    TwinPairSolutions, TwinSolution, TwinType, align_compound_normals, classify_twin,
    compound_counterparts, solve_twin,
)
from .variants import CUALNI, LatticeParams, PointGroup, Variant, cubic_point_group, make_variants  # noqa: E402

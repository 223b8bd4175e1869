"""Curvature of pseudo-Euclidean Lie algebras and double extensions, in exact rational arithmetic."""

from .double_ext import (
    DoubleExtensionParams,
    admissibility,
    build,
    einstein_conditions,
    extract,
    unimodularity,
)
from .exact import DEFAULT_EPS, get_eps, set_eps, tolerance
from .lie import ClassificationFlags, LieAlgebra, classify, complete_solvability, derivation_space
from .metric import (
    CurvatureReport,
    PseudoEuclideanLieAlgebra,
    einstein_check,
    operators,
    ricci_direct,
    ricci_operator_formula,
    ricci_via_r,
    structure_endos,
    trace_Q_times,
    verify_nondegenerate_center_prop,
)
from .pseudo import MetricTensor, Subspace, WittBasis, complete_witt_basis, signature

__all__ = [
    "DEFAULT_EPS",
    "ClassificationFlags",
    "CurvatureReport",
    "DoubleExtensionParams",
    "LieAlgebra",
    "MetricTensor",
    "PseudoEuclideanLieAlgebra",
    "Subspace",
    "WittBasis",
    "admissibility",
    "build",
    "classify",
    "complete_solvability",
    "complete_witt_basis",
    "derivation_space",
    "einstein_check",
    "einstein_conditions",
    "extract",
    "get_eps",
    "operators",
    "ricci_direct",
    "ricci_operator_formula",
    "ricci_via_r",
    "set_eps",
    "signature",
    "structure_endos",
    "tolerance",
    "trace_Q_times",
    "unimodularity",
    "verify_nondegenerate_center_prop",
]

"""Directional distance functions for multi-output production technologies.

The package represents technologies through transformation values
F(y, x) <= 0, evaluates the directional technology distance function
constructively (closed form for the quadratic-separable family, bisection
otherwise), verifies the distance and transformation properties by seeded
sampling, and ships brute-force grid oracles plus a CLI for reproducible
desk-scale runs.
"""

from .core import (
    NEG_INF,
    Bundle,
    DimensionError,
    Direction,
    PropertyReport,
    compare,
    geq,
    geqq,
    gt,
    is_neg_inf,
    star_gt,
)
from .ddf import (
    D_PROPERTY_NAMES,
    DdfSolution,
    GammaInterval,
    check_property,
    eval_ddf,
    gamma_interval,
    sample_bundle,
    sample_direction,
    solve_ddf,
    unsymmetric_t,
)
from .oracle import (
    GridDdfResult,
    GridSpec,
    JpfExistenceReport,
    grid_ddf,
    grid_ddf_report,
    grid_frontier,
    jpf_existence_check,
)
from .quad_translation import (
    FreeQuadraticParams,
    RestrictedQuadraticParams,
    eval_Q,
    eval_Q_coefficient_form,
    eval_Q_direction_form,
    homogeneity_deviation,
    homogeneity_witness_search,
    restrict_parameters,
    sample_free_params,
    translation_residual,
)
from .technology import (
    F_PROPERTY_NAMES,
    REFERENCE_QUADRATIC,
    PolyhedralA,
    PolyhedralB,
    QuadraticSeparable,
    QuadraticSeparableParams,
    Staircase,
    Technology,
    check_f_property,
    classify,
    contains,
    eval_F,
    frontier_member,
    load_technology,
    output_ray_roots,
    technology_from_json,
    technology_to_json,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "NEG_INF",
    "Bundle",
    "DimensionError",
    "Direction",
    "PropertyReport",
    "compare",
    "geqq",
    "geq",
    "star_gt",
    "gt",
    "is_neg_inf",
    "GammaInterval",
    "DdfSolution",
    "gamma_interval",
    "solve_ddf",
    "eval_ddf",
    "unsymmetric_t",
    "check_property",
    "sample_bundle",
    "sample_direction",
    "D_PROPERTY_NAMES",
    "GridSpec",
    "GridDdfResult",
    "JpfExistenceReport",
    "grid_ddf",
    "grid_ddf_report",
    "grid_frontier",
    "jpf_existence_check",
    "FreeQuadraticParams",
    "RestrictedQuadraticParams",
    "restrict_parameters",
    "sample_free_params",
    "eval_Q",
    "eval_Q_coefficient_form",
    "eval_Q_direction_form",
    "translation_residual",
    "homogeneity_deviation",
    "homogeneity_witness_search",
    "Technology",
    "QuadraticSeparable",
    "QuadraticSeparableParams",
    "Staircase",
    "PolyhedralA",
    "PolyhedralB",
    "REFERENCE_QUADRATIC",
    "F_PROPERTY_NAMES",
    "eval_F",
    "contains",
    "classify",
    "frontier_member",
    "validate_params",
    "check_f_property",
    "output_ray_roots",
    "technology_to_json",
    "technology_from_json",
    "load_technology",
    "__version__",
]

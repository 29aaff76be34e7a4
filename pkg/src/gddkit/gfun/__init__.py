"""G-functions, two-index comparison functions and the GDD criterion catalog."""

from gddkit.gfun.functions import (
    FAMILIES,
    GFunctionId,
    eval_gfunction,
    g2_uniform,
    g3_uniform,
    g4_min_alpha,
    norm_deleted_sums,
)
from gddkit.gfun.pairs import (
    PairFunctionSpec,
    PairValueGrid,
    check_pair_condition,
    eval_pair_function,
    pair_margin,
)
from gddkit.gfun.catalog import (
    CATALOG,
    DEFAULT_GRID,
    CriterionResult,
    CriterionSpec,
    ScalingChoice,
    SweepPlan,
    catalog_listing,
    certificate_scalings,
    check_criterion,
    criterion_margin,
    evaluate_criterion,
    fired,
    random_scalings,
    sweep_criteria,
)

__all__ = [
    "CATALOG",
    "DEFAULT_GRID",
    "FAMILIES",
    "CriterionResult",
    "CriterionSpec",
    "GFunctionId",
    "PairFunctionSpec",
    "PairValueGrid",
    "ScalingChoice",
    "SweepPlan",
    "catalog_listing",
    "certificate_scalings",
    "check_criterion",
    "check_pair_condition",
    "criterion_margin",
    "evaluate_criterion",
    "eval_gfunction",
    "eval_pair_function",
    "fired",
    "g2_uniform",
    "g3_uniform",
    "g4_min_alpha",
    "norm_deleted_sums",
    "pair_margin",
    "random_scalings",
    "sweep_criteria",
]

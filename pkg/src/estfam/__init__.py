"""Ratio/product-type family of finite-population mean estimators under SRSWOR."""

from .analytics import (
    AnalyticSummary,
    analyze,
    efficiency_gap,
    first_order_bias,
    first_order_mse,
    minimum_mse,
    named_analysis,
    optimal_alpha,
    optimal_member,
    pre,
)
from .family import (
    EstimatorConfig,
    NamedEstimator,
    catalog,
    evaluate,
    expansion_validity,
    lambda_factor,
)
from .moments import (
    DesignSpec,
    PopulationData,
    PopulationMoments,
    SampleData,
    compute_moments,
    sample_means,
    sampling_fraction_factor,
)
from .simulator import (
    SimulationPlan,
    compare_to_theory,
    draw_srswor,
    enumerate_exact,
    run_monte_carlo,
)

__all__ = [
    "AnalyticSummary",
    "DesignSpec",
    "EstimatorConfig",
    "NamedEstimator",
    "PopulationData",
    "PopulationMoments",
    "SampleData",
    "SimulationPlan",
    "analyze",
    "catalog",
    "compare_to_theory",
    "compute_moments",
    "draw_srswor",
    "efficiency_gap",
    "enumerate_exact",
    "evaluate",
    "expansion_validity",
    "first_order_bias",
    "first_order_mse",
    "lambda_factor",
    "minimum_mse",
    "named_analysis",
    "optimal_alpha",
    "optimal_member",
    "pre",
    "run_monte_carlo",
    "sample_means",
    "sampling_fraction_factor",
]

"""First-order bias and MSE of family members, the optimal alpha and PRE.

Every member is handled by the general expressions; the named estimators
differ only in the leverage L = alpha * lambda * g that enters them:

    bias = f1 Y [g(g+1)/2 alpha^2 lambda^2 Cx^2 - L rho Cy Cx]
    mse  = f1 Y^2 [Cy^2 + L^2 Cx^2 - 2 L rho Cy Cx]
         = f1 Y^2 Cy^2 (1 - rho^2) + f1 Y^2 (L Cx - rho Cy)^2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NoInteriorOptimum, ZeroMse
from .family import EstimatorConfig, NamedEstimator, lambda_factor
from .moments import PopulationMoments


@dataclass(frozen=True)
class AnalyticSummary:
    config: EstimatorConfig
    lam: float
    bias: float
    mse: float
    pre: float
    gap_to_min: float
    # (L Cx - rho Cy)^2 without the f1 Y^2 factor
    normalized_gap: float
    alpha_opt: float | None

    @property
    def key(self) -> str:
        return self.config.label


def _lambda(cfg: EstimatorConfig, m: PopulationMoments) -> float:
    return lambda_factor(cfg.a, cfg.b, m.mean_x)


def _leverage(cfg: EstimatorConfig, m: PopulationMoments) -> float:
    if cfg.alpha == 0 or cfg.g == 0:
        return 0.0
    return cfg.alpha * _lambda(cfg, m) * cfg.g


def first_order_bias(cfg: EstimatorConfig, m: PopulationMoments, f1: float) -> float:
    if cfg.alpha == 0 or cfg.g == 0:
        return 0.0
    al = cfg.alpha * _lambda(cfg, m)
    g = cfg.g
    bracket = g * (g + 1) / 2 * al * al * m.cv2_x - al * g * m.rho * m.cy * m.cx
    return f1 * m.mean_y * bracket


def first_order_mse(cfg: EstimatorConfig, m: PopulationMoments, f1: float) -> float:
    L = _leverage(cfg, m)
    bracket = m.cv2_y + L * L * m.cv2_x - 2 * L * m.rho * m.cy * m.cx
    return f1 * m.mean_y**2 * bracket


def mean_per_unit_variance(m: PopulationMoments, f1: float) -> float:
    """V(ybar) = f1 Y^2 Cy^2."""
    return f1 * m.mean_y**2 * m.cv2_y


def optimal_alpha(shape: Sequence[float], m: PopulationMoments) -> float:
    """alpha minimising the first-order MSE for fixed (a, b, g): K / (lambda g), K = rho Cy / Cx."""
    a, b, g = shape
    lam = lambda_factor(a, b, m.mean_x)
    if lam * g == 0:
        raise NoInteriorOptimum(f"lambda*g == 0 for shape (a={a}, b={b}, g={g})")
    K = m.rho * m.cy / m.cx
    return K / (lam * g)


def minimum_mse(m: PopulationMoments, f1: float) -> float:
    """The regression-estimator variance f1 Y^2 Cy^2 (1 - rho^2)."""
    return f1 * m.mean_y**2 * m.cv2_y * (1 - m.rho**2)


def pre(mse: float, m: PopulationMoments, f1: float) -> float:
    """Percent relative efficiency with respect to ybar."""
    if not mse > 0:
        raise ZeroMse(f"PRE undefined for mse={mse}")
    return 100 * mean_per_unit_variance(m, f1) / mse


def normalized_gap(cfg: EstimatorConfig, m: PopulationMoments) -> float:
    return (_leverage(cfg, m) * m.cx - m.rho * m.cy) ** 2


def config_gap(cfg: EstimatorConfig, m: PopulationMoments, f1: float) -> float:
    """MSE(cfg) - minimum MSE, evaluated in the cancellation-free squared form."""
    return f1 * m.mean_y**2 * normalized_gap(cfg, m)


def efficiency_gap(named: NamedEstimator, m: PopulationMoments, f1: float) -> float:
    return config_gap(named.config, m, f1)


def analyze(cfg: EstimatorConfig, m: PopulationMoments, f1: float) -> AnalyticSummary:
    lam = _lambda(cfg, m)
    mse = first_order_mse(cfg, m, f1)
    try:
        a_opt = optimal_alpha(cfg.shape, m)
    except NoInteriorOptimum:
        a_opt = None
    return AnalyticSummary(
        config=cfg,
        lam=lam,
        bias=first_order_bias(cfg, m, f1),
        mse=mse,
        pre=pre(mse, m, f1),
        gap_to_min=config_gap(cfg, m, f1),
        normalized_gap=normalized_gap(cfg, m),
        alpha_opt=a_opt,
    )


def named_analysis(named: NamedEstimator, m: PopulationMoments, f1: float) -> AnalyticSummary:
    return analyze(named.config, m, f1)


def optimal_member(
    m: PopulationMoments, shape: Sequence[float] = (1.0, 0.0, 1.0), name: str = "t_opt"
) -> EstimatorConfig:
    """Family member at alpha_opt for `shape`; its MSE is the minimum MSE."""
    a, b, g = shape
    return EstimatorConfig(optimal_alpha(shape, m), a, b, g, name=name)

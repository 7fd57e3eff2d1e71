"""Deterministic unit-level populations with prescribed summary constants.

x is shaped by least squares so its (beta1, beta2) hit the targets, then
rescaled to the target mean and S_x. y is built from the standardised x and
an orthogonal residual, which fixes mean_y, S_y and rho exactly.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize, stats

from .moments import PopulationData, shape_coefficients


def _standardize(v: np.ndarray) -> np.ndarray:
    d = v - v.mean()
    return d / d.std(ddof=1)


def shaped_scores(N: int, beta1: float, beta2: float, seed: int = 0) -> np.ndarray:
    """N standardised scores (mean 0, S = 1) with the requested shape coefficients."""
    if beta2 < beta1 + 1:
        raise ValueError("beta2 must be at least beta1 + 1")
    start = stats.norm.ppf((np.arange(1, N + 1) - 0.5) / N)
    start = start + np.random.default_rng(seed).normal(0, 0.05, N)
    skew_target = math.sqrt(beta1)

    def residual(v):
        z = _standardize(v)
        d = z - z.mean()
        m2 = np.mean(d**2)
        return [np.mean(d**3) / m2**1.5 - skew_target, np.mean(d**4) / m2**2 - beta2]

    fit = optimize.least_squares(residual, start, xtol=1e-14, ftol=1e-14, gtol=1e-14)
    z = _standardize(np.sort(fit.x))
    b1, b2 = shape_coefficients(z)
    if abs(b1 - beta1) > 1e-6 * max(1, beta1) or abs(b2 - beta2) > 1e-6 * beta2:
        raise RuntimeError(f"could not reach beta1={beta1}, beta2={beta2} (got {b1}, {b2})")
    return z


def population_with_constants(
    N: int,
    mean_y: float,
    mean_x: float,
    cv2_y: float,
    cv2_x: float,
    rho: float,
    beta1_x: float,
    beta2_x: float,
    seed: int = 0,
) -> PopulationData:
    zx = shaped_scores(N, beta1_x, beta2_x, seed)
    w = np.random.default_rng(seed + 1).normal(size=N)
    w = w - w.mean()
    w = w - (w @ zx) / (zx @ zx) * zx
    zw = _standardize(w)
    zy = rho * zx + math.sqrt(1 - rho**2) * zw
    x = mean_x + math.sqrt(cv2_x) * abs(mean_x) * zx
    y = mean_y + math.sqrt(cv2_y) * abs(mean_y) * zy
    return PopulationData(y.tolist(), x.tolist())


def small_cv_population(N: int = 12, cv: float = 0.05, rho: float = 0.7, seed: int = 0) -> PopulationData:
    """Near-normal population with C_x = C_y = cv around mean 100."""
    return population_with_constants(N, 100.0, 100.0, cv**2, cv**2, rho, 0.0, 2.5, seed)

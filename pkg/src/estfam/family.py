"""The estimator family t = ybar * [(a X + b) / (alpha (a xbar + b) + (1 - alpha)(a X + b))]^g.

X is the known population mean of the auxiliary variable; ybar and xbar are
sample means. The denominator is evaluated as (a X + b) + alpha a (xbar - X),
which is algebraically identical and exactly equal to a X + b when xbar == X
or alpha == 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidBase, SingularLambda
from .moments import PopulationMoments

# relative threshold for "numerically zero" denominators and bases
SINGULAR_RTOL = 1e-12
# integer exponents up to this size use repeated multiplication
MAX_EXACT_POWER = 8


@dataclass(frozen=True)
class EstimatorConfig:
    alpha: float
    a: float
    b: float
    g: float
    name: str | None = None

    def __post_init__(self):
        if self.a == 0 and self.b == 0 and self.g != 0:
            raise ValueError("a and b cannot both be zero unless g == 0")

    @property
    def shape(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.g)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return f"{self.alpha:g}:{self.a:g}:{self.b:g}:{self.g:g}"

    def with_alpha(self, alpha: float, name: str | None = None) -> "EstimatorConfig":
        return EstimatorConfig(alpha, self.a, self.b, self.g, name)


@dataclass(frozen=True)
class NamedEstimator:
    key: str
    config: EstimatorConfig
    description: str


def lambda_factor(a: float, b: float, mean_x: float) -> float:
    """lambda = a X / (a X + b)."""
    ax = a * mean_x
    denom = ax + b
    if denom == 0 or abs(denom) < SINGULAR_RTOL * abs(ax):
        raise SingularLambda(f"a*X + b = {denom!r} is singular (a={a}, b={b}, X={mean_x})")
    return ax / denom


def _is_integer(g: float) -> bool:
    return float(g).is_integer()


def _ipow(base, k: int):
    out = base
    for _ in range(k - 1):
        out = out * base
    return out


def _power(ratio, g: float):
    """ratio**|g| with exact repeated multiplication for small integer |g|."""
    k = abs(g)
    if _is_integer(k) and k <= MAX_EXACT_POWER:
        return _ipow(ratio, int(k))
    return ratio**k


def _check_denominator(cfg: EstimatorConfig, mean_x_pop: float) -> float:
    top = cfg.a * mean_x_pop + cfg.b
    if top == 0 or abs(top) < SINGULAR_RTOL * abs(cfg.a * mean_x_pop):
        raise SingularLambda(f"a*X + b = {top!r} is singular for {cfg.label}")
    return top


def evaluate(
    cfg: EstimatorConfig, mean_y_sample: float, mean_x_sample: float, mean_x_pop: float
) -> float:
    ybar = float(mean_y_sample)
    if cfg.g == 0 or cfg.alpha == 0 or mean_x_sample == mean_x_pop:
        return ybar
    top = _check_denominator(cfg, mean_x_pop)
    base = top + cfg.alpha * cfg.a * (mean_x_sample - mean_x_pop)
    if base == 0 or abs(base) < SINGULAR_RTOL * abs(top):
        raise InvalidBase(f"zero bracket base for {cfg.label} at xbar={mean_x_sample}")
    if not _is_integer(cfg.g) and (base < 0 or top < 0):
        raise InvalidBase(
            f"non-positive bracket for fractional g={cfg.g} ({cfg.label}, xbar={mean_x_sample})"
        )
    ratio = top / base if cfg.g > 0 else base / top
    return ybar * _power(ratio, cfg.g)


def evaluate_array(
    cfg: EstimatorConfig, ybar: np.ndarray, xbar: np.ndarray, mean_x_pop: float
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised evaluate; returns (values, ok) with NaN where ok is False.

    For integer g the elementwise results are bit-identical to `evaluate`.
    """
    ybar = np.asarray(ybar, dtype=np.float64)
    xbar = np.asarray(xbar, dtype=np.float64)
    if cfg.g == 0 or cfg.alpha == 0:
        return ybar.copy(), np.ones(ybar.shape, dtype=bool)
    top = _check_denominator(cfg, mean_x_pop)
    base = top + cfg.alpha * cfg.a * (xbar - mean_x_pop)
    ok = (base != 0) & ~(np.abs(base) < SINGULAR_RTOL * abs(top))
    if not _is_integer(cfg.g):
        ok &= (base > 0) & (top > 0)
    safe = np.where(ok, base, top)
    ratio = top / safe if cfg.g > 0 else safe / top
    out = ybar * _power(ratio, cfg.g)
    out = np.where(xbar == mean_x_pop, ybar, out)
    ok |= xbar == mean_x_pop
    out[~ok] = np.nan
    return out, ok


def expansion_validity(cfg: EstimatorConfig, m: PopulationMoments, e1_bound: float) -> bool:
    """True iff |alpha*lambda| * e1_bound < 1 (the binomial expansion converges)."""
    if cfg.alpha == 0:
        return True
    lam = lambda_factor(cfg.a, cfg.b, m.mean_x)
    return abs(cfg.alpha * lam) * e1_bound < 1


CATALOG_KEYS = tuple(f"t{i}" for i in range(14))


def catalog(m: PopulationMoments) -> list[NamedEstimator]:
    """The fourteen classical members t0..t13 with a, b resolved from `m`.

    t0 is printed as (0, 0, 0, 0); it is stored as (0, 1, 0, 0) so that
    lambda stays defined. Both evaluate to ybar.
    """
    cx, s, b1, b2, r = m.cx, m.sigma_x, m.beta1_x, m.beta2_x, m.rho
    rows = [
        ("t0", (0.0, 1.0, 0.0, 0.0), "mean per unit ybar (printed row alpha=a=b=g=0)"),
        ("t1", (1.0, 1.0, 0.0, 1.0), "ratio estimator ybar*X/xbar"),
        ("t2", (1.0, 1.0, 0.0, -1.0), "product estimator ybar*xbar/X"),
        ("t3", (1.0, 1.0, cx, 1.0), "Sisodia-Dwivedi ratio with C_x"),
        ("t4", (1.0, 1.0, cx, -1.0), "Pandey-Dubey product with C_x"),
        ("t5", (1.0, b2, cx, -1.0), "Upadhyaya-Singh product, a=beta2(x), b=C_x"),
        ("t6", (1.0, cx, b2, -1.0), "Upadhyaya-Singh product, a=C_x, b=beta2(x)"),
        ("t7", (1.0, 1.0, s, -1.0), "G.N. Singh product with sigma_x"),
        ("t8", (1.0, b1, s, -1.0), "G.N. Singh product, a=beta1(x), b=sigma_x"),
        ("t9", (1.0, b2, s, -1.0), "G.N. Singh product, a=beta2(x), b=sigma_x"),
        ("t10", (1.0, 1.0, r, 1.0), "Singh-Tailor ratio with rho"),
        ("t11", (1.0, 1.0, r, -1.0), "Singh-Tailor product with rho"),
        ("t12", (1.0, 1.0, b2, 1.0), "Singh-Tailor-Kakran ratio with beta2(x)"),
        ("t13", (1.0, 1.0, b2, -1.0), "Singh-Tailor-Kakran product with beta2(x)"),
    ]
    return [
        NamedEstimator(key, EstimatorConfig(*params, name=key), desc)
        for key, params, desc in rows
    ]


def catalog_entry(m: PopulationMoments, key: str) -> NamedEstimator:
    for entry in catalog(m):
        if entry.key == key:
            return entry
    raise KeyError(f"unknown catalog key {key!r}; expected one of {', '.join(CATALOG_KEYS)}")


def parse_config(spec: str) -> EstimatorConfig:
    """Parse 'alpha:a:b:g' into a config."""
    parts = spec.split(":")
    if len(parts) != 4:
        raise ValueError(f"estimator {spec!r} is not of the form alpha:a:b:g")
    try:
        alpha, a, b, g = (float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"estimator {spec!r}: {exc}") from None
    if not all(math.isfinite(v) for v in (alpha, a, b, g)):
        raise ValueError(f"estimator {spec!r} has non-finite parameters")
    return EstimatorConfig(alpha, a, b, g, name=spec)

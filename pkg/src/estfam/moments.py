"""Population constants, the SRSWOR design factor and sample means.

Variances (S_y^2, S_x^2, S_xy) use the N-1 divisor. Under SRSWOR this gives
E(e0^2) = f1*C_y^2 exactly. The shape coefficients beta1/beta2 use central
moments with divisor N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInput, EmptySample, InvalidDesign


@dataclass(frozen=True)
class PopulationData:
    y: tuple[float, ...]
    x: tuple[float, ...]

    def __init__(self, y: Sequence[float], x: Sequence[float]):
        y = tuple(float(v) for v in y)
        x = tuple(float(v) for v in x)
        if len(y) != len(x):
            raise DegenerateInput("N", f"len(y)={len(y)} != len(x)={len(x)}")
        if len(y) < 2:
            raise DegenerateInput("N", "a population needs at least 2 units")
        if not all(math.isfinite(v) for v in y + x):
            raise DegenerateInput("data", "non-finite value")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)

    @property
    def N(self) -> int:
        return len(self.y)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.y), np.asarray(self.x)


@dataclass(frozen=True)
class DesignSpec:
    N: int
    n: int

    def __post_init__(self):
        sampling_fraction_factor(self.N, self.n)

    @property
    def f1(self) -> float:
        return sampling_fraction_factor(self.N, self.n)


@dataclass(frozen=True)
class SampleData:
    y: tuple[float, ...]
    x: tuple[float, ...]
    indices: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.y) == len(self.x) == len(self.indices)):
            raise ValueError("sample y, x and indices must have equal length")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("sample indices must be distinct")

    @classmethod
    def from_indices(cls, pop: PopulationData, indices: Sequence[int]) -> "SampleData":
        idx = tuple(int(i) for i in indices)
        return cls(tuple(pop.y[i] for i in idx), tuple(pop.x[i] for i in idx), idx)

    @property
    def n(self) -> int:
        return len(self.y)


@dataclass(frozen=True)
class PopulationMoments:
    N: int
    mean_y: float
    mean_x: float
    var_y: float
    var_x: float
    cv2_y: float
    cv2_x: float
    rho: float
    beta1_x: float
    beta2_x: float
    sigma_x: float

    @property
    def cy(self) -> float:
        return math.sqrt(self.cv2_y)

    @property
    def cx(self) -> float:
        return math.sqrt(self.cv2_x)

    @classmethod
    def from_constants(
        cls,
        N: int,
        mean_y: float,
        mean_x: float,
        cv2_y: float,
        cv2_x: float,
        rho: float,
        beta1_x: float,
        beta2_x: float,
        sigma_x: float | None = None,
        sigma_tolerance: float = 1e-3,
    ) -> "PopulationMoments":
        """Build moments from published summary constants (no unit-level data).

        sigma_x defaults to mean_x*sqrt(cv2_x). A supplied sigma_x must agree
        with that value to `sigma_tolerance` relative; the stored sigma_x is
        always sqrt(var_x) so the type invariants hold.
        """
        if N < 2:
            raise DegenerateInput("N", "a population needs at least 2 units")
        if mean_y == 0:
            raise DegenerateInput("cv2_y", "mean_y is zero")
        if mean_x == 0:
            raise DegenerateInput("cv2_x", "mean_x is zero")
        if not cv2_y > 0:
            raise DegenerateInput("rho", "cv2_y must be positive")
        if not cv2_x > 0:
            raise DegenerateInput("rho", "cv2_x must be positive")
        if not -1.0 <= rho <= 1.0:
            raise DegenerateInput("rho", f"|rho| > 1 ({rho})")
        if beta1_x < 0:
            raise DegenerateInput("beta1_x", "must be non-negative")
        if beta2_x < beta1_x + 1 - 1e-9:
            raise DegenerateInput("beta2_x", "violates beta2 >= beta1 + 1")
        var_y = cv2_y * mean_y**2
        var_x = cv2_x * mean_x**2
        derived_sigma = math.sqrt(var_x)
        if sigma_x is not None and abs(sigma_x - derived_sigma) > sigma_tolerance * derived_sigma:
            raise DegenerateInput(
                "sigma_x", f"{sigma_x} disagrees with mean_x*sqrt(cv2_x) = {derived_sigma:.6g}"
            )
        return cls(
            N=int(N),
            mean_y=float(mean_y),
            mean_x=float(mean_x),
            var_y=var_y,
            var_x=var_x,
            cv2_y=float(cv2_y),
            cv2_x=float(cv2_x),
            rho=float(rho),
            beta1_x=float(beta1_x),
            beta2_x=float(beta2_x),
            sigma_x=derived_sigma,
        )


def shape_coefficients(x: np.ndarray) -> tuple[float, float]:
    """Return (beta1, beta2) = (m3^2/m2^3, m4/m2^2), central moments with divisor N."""
    d = x - x.mean()
    m2 = np.mean(d**2)
    m3 = np.mean(d**3)
    m4 = np.mean(d**4)
    return float(m3**2 / m2**3), float(m4 / m2**2)


def compute_moments(pop: PopulationData) -> PopulationMoments:
    y, x = pop.arrays()
    N = pop.N
    mean_y = float(y.mean())
    mean_x = float(x.mean())
    if mean_y == 0:
        raise DegenerateInput("cv2_y", "mean of y is zero")
    if mean_x == 0:
        raise DegenerateInput("cv2_x", "mean of x is zero")
    dy = y - mean_y
    dx = x - mean_x
    var_y = float(np.sum(dy * dy) / (N - 1))
    var_x = float(np.sum(dx * dx) / (N - 1))
    if var_x <= 0:
        raise DegenerateInput("var_x", "x is constant")
    if var_y <= 0:
        raise DegenerateInput("var_y", "y is constant")
    s_xy = float(np.sum(dx * dy) / (N - 1))
    rho = s_xy / math.sqrt(var_x * var_y)
    # rounding can push exactly-collinear data a hair past +-1
    rho = min(1.0, max(-1.0, rho))
    beta1, beta2 = shape_coefficients(x)
    return PopulationMoments(
        N=N,
        mean_y=mean_y,
        mean_x=mean_x,
        var_y=var_y,
        var_x=var_x,
        cv2_y=var_y / mean_y**2,
        cv2_x=var_x / mean_x**2,
        rho=rho,
        beta1_x=beta1,
        beta2_x=beta2,
        sigma_x=math.sqrt(var_x),
    )


def sampling_fraction_factor(N: int, n: int) -> float:
    """f1 = (N - n) / (n N)."""
    if n < 1 or n >= N:
        raise InvalidDesign(f"need 1 <= n < N, got N={N}, n={n}")
    return (N - n) / (n * N)


def sample_means(s: SampleData) -> tuple[float, float]:
    if s.n == 0:
        raise EmptySample("sample has no units")
    return float(np.mean(s.y)), float(np.mean(s.x))

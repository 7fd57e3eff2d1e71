"""Summary constants of the Pandey-Dubey (1988) population and the published PRE values."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytics import analyze, named_analysis, optimal_member
from .family import catalog
from .moments import PopulationMoments, sampling_fraction_factor

N = 20
n = 8
CONSTANTS = dict(
    N=N,
    mean_y=19.55,
    mean_x=18.8,
    cv2_x=0.1555,
    cv2_y=0.1262,
    rho=-0.9199,
    beta1_x=0.5473,
    beta2_x=3.0613,
)
# printed lambda of the sigma_x product estimator; pins down sigma_x = X*C_x
THETA4 = 0.7172

PUBLISHED_PRE = {
    "ybar": 100.0,
    "t1": 23.39,
    "t2": 526.45,
    "t3": 23.91,
    "t4": 550.05,
    "t5": 534.49,
    "t6": 582.17,
    "t7": 591.37,
    "t8": 436.19,
    "t9": 633.64,
    "t10": 22.17,
    "t11": 465.25,
    "t12": 27.21,
    "t13": 644.17,
    "t_opt": 650.26,
}

REL_TOLERANCE = 0.01


def moments() -> PopulationMoments:
    return PopulationMoments.from_constants(**CONSTANTS)


def f1() -> float:
    return sampling_fraction_factor(N, n)


@dataclass(frozen=True)
class ReproductionRow:
    key: str
    paper_pre: float
    computed_pre: float

    @property
    def rel_dev(self) -> float:
        return (self.computed_pre - self.paper_pre) / self.paper_pre

    @property
    def within_tolerance(self) -> bool:
        return abs(self.rel_dev) <= REL_TOLERANCE


def reproduce() -> list[ReproductionRow]:
    """Recompute every published PRE from the summary constants."""
    m, f = moments(), f1()
    computed = {}
    for entry in catalog(m):
        key = "ybar" if entry.key == "t0" else entry.key
        computed[key] = named_analysis(entry, m, f).pre
    computed["t_opt"] = analyze(optimal_member(m), m, f).pre
    return [ReproductionRow(k, v, computed[k]) for k, v in PUBLISHED_PRE.items()]


def optimal_pre_identity(rho: float = CONSTANTS["rho"]) -> float:
    """PRE of the optimal member is 100 / (1 - rho^2) whatever the population."""
    return 100 / (1 - rho * rho)


def sigma_x() -> float:
    return CONSTANTS["mean_x"] * math.sqrt(CONSTANTS["cv2_x"])

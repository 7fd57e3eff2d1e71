"""Regenerate the unit-level fixture populations under tests/data/."""

from dataclasses import dataclass
from pathlib import Path

from estfam import benchmark
from estfam.ingest import write_csv
from estfam.moments import compute_moments
from estfam.synthetic import population_with_constants, small_cv_population

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"


@dataclass
class Fixture:
    name: str
    N: int
    mean_y: float
    mean_x: float
    cv2_y: float
    cv2_x: float
    rho: float
    beta1_x: float
    beta2_x: float
    seed: int = 0


FIXTURES = [
    # the 20-unit population behind the published constants (data itself unpublished)
    Fixture("benchmark_like", **benchmark.CONSTANTS, seed=0),
    # moderate CVs, negative correlation: every catalog member stays well-defined
    Fixture("mc_fixture", 12, 50.0, 40.0, 0.04, 0.05, -0.6, 0.3, 2.4, seed=3),
]


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for fx in FIXTURES:
        params = {k: v for k, v in vars(fx).items() if k != "name"}
        pop = population_with_constants(**params)
        write_csv(pop, DATA / f"{fx.name}.csv")
        print(fx.name, compute_moments(pop))
    pop = small_cv_population(N=12, cv=0.05, rho=0.7, seed=0)
    write_csv(pop, DATA / "small_cv.csv")
    print("small_cv", compute_moments(pop))

    params = benchmark.CONSTANTS | {"n": benchmark.n}
    lines = ["# summary constants of the Pandey-Dubey population"]
    lines += [f"{k}={v}" for k, v in params.items()]
    (DATA / "benchmark.params").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

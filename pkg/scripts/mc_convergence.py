"""Monte Carlo MSE against exact enumeration as the replication count grows."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from estfam.family import catalog
from estfam.ingest import ingest_csv
from estfam.moments import compute_moments
from estfam.simulator import SimulationPlan, enumerate_exact, run_monte_carlo

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "data" / "mc_fixture.csv"


@dataclass
class ConvergenceConfig:
    input: Path = FIXTURE
    n: int = 4
    seed: int = 1
    reps: tuple[int, ...] = (10**3, 10**4, 10**5, 10**6)
    workers: int = 1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input", type=Path, default=ConvergenceConfig.input)
    parser.add_argument("--n", type=int, default=ConvergenceConfig.n)
    parser.add_argument("--seed", type=int, default=ConvergenceConfig.seed)
    parser.add_argument("--workers", type=int, default=ConvergenceConfig.workers)
    cfg = ConvergenceConfig(**vars(parser.parse_args()))

    pop = ingest_csv(cfg.input)
    configs = tuple(e.config for e in catalog(compute_moments(pop)))
    exact = enumerate_exact(pop, cfg.n, configs)
    print(f"{'reps':>8} {'max|z|':>7} {'max rel err':>11}")
    for reps in cfg.reps:
        mc = run_monte_carlo(pop, SimulationPlan(cfg.n, reps, cfg.seed, configs, cfg.workers))
        z = max(abs(e.empirical_mse - x.exact_mse) / e.se_of_mse for e, x in zip(mc.stats, exact.stats))
        rel = max(abs(e.empirical_mse - x.exact_mse) / x.exact_mse for e, x in zip(mc.stats, exact.stats))
        print(f"{reps:8d} {z:7.2f} {rel:11.4%}")


if __name__ == "__main__":
    main()

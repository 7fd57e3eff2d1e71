"""How good is the first-order MSE? Sweep the coefficient of variation and compare with exact enumeration."""

import argparse
from dataclasses import dataclass, field

from estfam.analytics import first_order_mse
from estfam.family import catalog
from estfam.moments import compute_moments, sampling_fraction_factor
from estfam.simulator import enumerate_exact
from estfam.synthetic import small_cv_population


@dataclass
class SweepConfig:
    N: int = 12
    n: int = 4
    cvs: tuple[float, ...] = (0.02, 0.05, 0.1, 0.2, 0.3)
    rhos: tuple[float, ...] = (-0.8, 0.0, 0.8)
    seeds: tuple[int, ...] = field(default=(0, 1, 2))


def worst_relative_error(cfg: SweepConfig, cv: float, rho: float, seed: int) -> tuple[str, float]:
    pop = small_cv_population(N=cfg.N, cv=cv, rho=rho, seed=seed)
    m = compute_moments(pop)
    f1 = sampling_fraction_factor(cfg.N, cfg.n)
    configs = [e.config for e in catalog(m)]
    exact = enumerate_exact(pop, cfg.n, configs)
    errs = {
        c.label: abs(first_order_mse(c, m, f1) - s.exact_mse) / s.exact_mse
        for c, s in zip(configs, exact.stats)
    }
    key = max(errs, key=errs.get)
    return key, errs[key]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--N", type=int, default=SweepConfig.N)
    parser.add_argument("--n", type=int, default=SweepConfig.n)
    args = parser.parse_args()
    cfg = SweepConfig(N=args.N, n=args.n)
    print(f"{'cv':>6} {'rho':>6} {'seed':>4} {'worst':>5} {'rel_err':>9}")
    for cv in cfg.cvs:
        for rho in cfg.rhos:
            for seed in cfg.seeds:
                key, err = worst_relative_error(cfg, cv, rho, seed)
                print(f"{cv:6.2f} {rho:6.2f} {seed:4d} {key:>5} {err:9.4%}")


if __name__ == "__main__":
    main()

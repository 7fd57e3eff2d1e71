"""Command-line interface: moments, analyze, simulate, reproduce-table51.

Exit codes: 0 success, 2 usage error, 3 data error, 4 reproduction outside
tolerance.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

from . import benchmark
from .analytics import analyze, optimal_member
from .errors import EstfamError, InvalidDesign
from .family import CATALOG_KEYS, EstimatorConfig, catalog, parse_config
from .ingest import ingest_csv, read_params
from .moments import PopulationMoments, compute_moments, sampling_fraction_factor
from .report import FORMATS, Table
from .simulator import (
    RNG_NAME,
    SimulationPlan,
    compare_to_theory,
    enumerate_exact,
    run_monte_carlo,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_TOLERANCE = 4

SEED_ENV = "ESTFAM_SEED"
EXACT_COLUMNS_LIMIT = 10**6


class UsageError(Exception):
    pass


def _resolve_estimators(spec: str, m: PopulationMoments) -> list[EstimatorConfig]:
    if spec == "catalog":
        return [e.config for e in catalog(m)]
    named = {e.key: e.config for e in catalog(m)}
    out = []
    for item in spec.split(","):
        item = item.strip()
        if item in named:
            out.append(named[item])
            continue
        try:
            out.append(parse_config(item))
        except ValueError as exc:
            raise UsageError(f"{exc}; use 'catalog', a catalog key ({CATALOG_KEYS[0]}..{CATALOG_KEYS[-1]}) or alpha:a:b:g") from None
    if not out:
        raise UsageError("empty --estimators list")
    return out


def _load_source(args) -> tuple[PopulationMoments, int | None, dict]:
    """Moments, the design n (when the source carries one) and report metadata."""
    if args.input and args.params:
        raise UsageError("give either --input or --params, not both")
    if args.input:
        pop = ingest_csv(args.input)
        return compute_moments(pop), None, {"source": "csv", "N": pop.N}
    if args.params:
        pf = read_params(args.params)
        return pf.moments, pf.n, {"source": "params", "N": pf.moments.N}
    raise UsageError("one of --input or --params is required")


def _design_n(args, file_n: int | None) -> int:
    n = args.n if args.n is not None else file_n
    if n is None:
        raise UsageError("--n is required with --input")
    return n


def cmd_moments(args) -> Table:
    m, file_n, meta = _load_source(args)
    table = Table(["constant", "value"], meta=meta)
    for name in ("N", "mean_y", "mean_x", "var_y", "var_x", "cv2_y", "cv2_x",
                 "rho", "beta1_x", "beta2_x", "sigma_x"):
        value = getattr(m, name)
        table.add(name, value if name == "N" else float(value))
    n = args.n if args.n is not None else file_n
    if n is not None:
        table.add("n", n)
        table.add("f1", sampling_fraction_factor(m.N, n))
    return table


ANALYZE_COLUMNS = ["key", "alpha", "a", "b", "g", "lambda", "bias", "mse", "pre", "alpha_opt", "gap_to_min"]


def cmd_analyze(args) -> Table:
    m, file_n, meta = _load_source(args)
    n = _design_n(args, file_n)
    f1 = sampling_fraction_factor(m.N, n)
    configs = _resolve_estimators(args.estimators, m)
    table = Table(ANALYZE_COLUMNS, meta={**meta, "n": n, "f1": f1})
    for cfg in configs + [optimal_member(m)]:
        s = analyze(cfg, m, f1)
        table.add(s.key, cfg.alpha, cfg.a, cfg.b, cfg.g, s.lam, s.bias, s.mse, s.pre,
                  s.alpha_opt, s.gap_to_min)
    return table


SIMULATE_COLUMNS = [
    "key", "alpha", "a", "b", "g",
    "analytic_bias", "analytic_mse", "analytic_pre",
    "mc_bias", "mc_bias_se", "mc_mse", "mc_mse_se", "mc_pre",
    "dev_bias", "dev_mse_rel", "domain_failures",
    "exact_bias", "exact_mse", "mc_exact_mse_z",
]


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def cmd_simulate(args) -> Table:
    if args.params:
        raise UsageError("simulate needs unit-level data (--input CSV); parameter files carry only summary constants")
    if not args.input:
        raise UsageError("--input is required for simulate")
    if args.reps is None or args.reps < 1:
        raise UsageError("--reps must be a positive integer")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    pop = ingest_csv(args.input)
    m = compute_moments(pop)
    n = _design_n(args, None)
    f1 = sampling_fraction_factor(m.N, n)
    seed = _seed(args)
    configs = _resolve_estimators(args.estimators, m)
    try:
        plan = SimulationPlan(n, args.reps, seed, tuple(configs), workers=args.workers)
    except InvalidDesign as exc:
        raise UsageError(str(exc)) from None
    analytic = [analyze(cfg, m, f1) for cfg in configs]
    mc = run_monte_carlo(pop, plan)
    meta = {"source": "csv", "N": pop.N, "n": n, "f1": f1, "reps": args.reps,
            "seed": seed, "rng": RNG_NAME}

    exact = None
    subsets = math.comb(pop.N, n)
    if subsets <= EXACT_COLUMNS_LIMIT:
        try:
            exact = enumerate_exact(pop, n, configs)
            meta["exact_subsets"] = exact.sample_count
        except EstfamError as exc:
            meta["exact"] = f"unavailable: {exc}"
    else:
        meta["exact"] = f"skipped: C(N, n) = {subsets} > {EXACT_COLUMNS_LIMIT}"

    cmp_mc = compare_to_theory(mc, analytic)
    meta["mc_ranking_agrees"] = cmp_mc.ranking_agrees
    if exact is not None:
        meta["exact_ranking_agrees"] = compare_to_theory(exact, analytic).ranking_agrees

    table = Table(SIMULATE_COLUMNS, meta=meta)
    for i, (cfg, a, e, dev) in enumerate(zip(configs, analytic, mc.stats, cmp_mc.rows)):
        mc_pre = 100 * mc.reference.empirical_mse / e.empirical_mse if e.empirical_mse > 0 else None
        if exact is not None:
            x = exact.stats[i]
            z = (e.empirical_mse - x.exact_mse) / e.se_of_mse if e.se_of_mse > 0 else None
            ex_cols = (x.exact_bias, x.exact_mse, z)
        else:
            ex_cols = (None, None, None)
        table.add(a.key, cfg.alpha, cfg.a, cfg.b, cfg.g,
                  a.bias, a.mse, a.pre,
                  e.empirical_bias, e.se_of_bias, e.empirical_mse, e.se_of_mse, mc_pre,
                  e.empirical_bias - a.bias, (e.empirical_mse - a.mse) / a.mse,
                  e.domain_failures, *ex_cols)
    return table


def cmd_reproduce(args) -> tuple[Table, int]:
    rows = benchmark.reproduce()
    table = Table(["key", "paper_pre", "computed_pre", "rel_dev", "within_tol"],
                  meta={"N": benchmark.N, "n": benchmark.n, "tolerance": benchmark.REL_TOLERANCE})
    for r in rows:
        table.add(r.key, r.paper_pre, r.computed_pre, r.rel_dev, r.within_tolerance)
    ok = all(r.within_tolerance for r in rows)
    return table, EXIT_OK if ok else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="estfam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, source=True):
        if source:
            p.add_argument("--input", help="unit-level CSV with header y,x")
            p.add_argument("--params", help="key=value parameter file")
        p.add_argument("--format", choices=FORMATS, default="text")

    p = sub.add_parser("moments", help="population constants")
    common(p)
    p.add_argument("--n", type=int)

    p = sub.add_parser("analyze", help="first-order bias, MSE and PRE")
    common(p)
    p.add_argument("--n", type=int, help="sample size (overrides n in a params file)")
    p.add_argument("--estimators", default="catalog")

    p = sub.add_parser("simulate", help="Monte Carlo and exact enumeration against the analytics")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--seed", type=int, help=f"unsigned 64-bit seed (fallback ${SEED_ENV}, then 0)")
    p.add_argument("--estimators", default="catalog")
    p.add_argument("--workers", type=int, default=1, help="threads; output does not depend on it")

    p = sub.add_parser("reproduce-table51", help="recompute the published PRE table")
    common(p, source=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "moments":
            table, code = cmd_moments(args), EXIT_OK
        elif args.command == "analyze":
            table, code = cmd_analyze(args), EXIT_OK
        elif args.command == "simulate":
            table, code = cmd_simulate(args), EXIT_OK
        else:
            table, code = cmd_reproduce(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"estfam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EstfamError, OSError) as exc:
        print(f"estfam: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    sys.stdout.write(table.render(args.format))
    if code == EXIT_TOLERANCE:
        print("estfam: reproduction outside tolerance", file=sys.stderr)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

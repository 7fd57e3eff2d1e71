"""Exit criteria for the build; one PASS/FAIL line per criterion is printed at the end of the run."""

import math
import time

import numpy as np
import pytest

from estfam import benchmark
from estfam.analytics import analyze, first_order_mse, minimum_mse, optimal_alpha, optimal_member
from estfam.cli import main
from estfam.family import EstimatorConfig, catalog, lambda_factor
from estfam.moments import PopulationMoments, compute_moments, sampling_fraction_factor
from estfam.simulator import SimulationPlan, enumerate_exact, run_monte_carlo
from conftest import DATA

RESULTS: list[str] = []


def record(name, ok, detail):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


def random_case(rng):
    while True:
        beta1 = rng.uniform(0, 2)
        m = PopulationMoments.from_constants(
            N=int(rng.integers(2, 1000)),
            mean_y=rng.uniform(1, 100) * rng.choice([-1, 1]),
            mean_x=rng.uniform(1, 100),
            cv2_y=rng.uniform(1e-3, 1),
            cv2_x=rng.uniform(1e-3, 1),
            rho=rng.uniform(-0.99, 0.99),
            beta1_x=beta1,
            beta2_x=beta1 + 1 + rng.uniform(0, 5),
        )
        a = rng.uniform(0.05, 5) * rng.choice([-1, 1])
        b = rng.uniform(-5, 5)
        g = rng.choice([-2.0, -1.0, 1.0, 2.0, rng.uniform(-3, 3)])
        if abs(a * m.mean_x + b) > 1e-3 * abs(a * m.mean_x) and abs(g) >= 0.1:
            return m, EstimatorConfig(rng.uniform(-3, 3), a, b, g), rng.uniform(1e-3, 1)


def test_c1_table_reproduction():
    start = time.perf_counter()
    rows = benchmark.reproduce()
    elapsed = time.perf_counter() - start
    devs = {r.key: abs(r.rel_dev) for r in rows}
    within_1 = all(d <= 0.01 for d in devs.values())
    within_02 = sum(d <= 0.002 for d in devs.values())
    worst = max(devs, key=devs.get)
    expected = {"ybar": 100, "t1": 23.39, "t2": 526.45, "t3": 23.91, "t4": 550.05, "t5": 534.49,
                "t6": 582.17, "t7": 591.37, "t8": 436.19, "t9": 633.64, "t10": 22.17,
                "t11": 465.25, "t12": 27.21, "t13": 644.17, "t_opt": 650.26}
    ok = len(rows) == 15 and {r.key: r.paper_pre for r in rows} == expected
    ok = ok and within_1 and within_02 >= 10 and elapsed < 1.0
    record("C1 published PRE table", ok,
           f"15 rows, all within 1%: {within_1}, {within_02}/15 within 0.2%, "
           f"worst {worst} {devs[worst]:.4%}, {elapsed * 1e3:.1f} ms")


def test_c2_closed_form_anchors():
    m = benchmark.moments()
    theta4 = lambda_factor(1.0, m.sigma_x, m.mean_x)
    t_opt = analyze(optimal_member(m), m, benchmark.f1()).pre
    identity = 100 / (1 - m.rho**2)
    ok = abs(theta4 - 0.7172) <= 5e-5 and abs(t_opt - identity) <= 0.01 and abs(t_opt - 650.26) <= 0.01
    record("C2 closed-form anchors", ok, f"theta4 = {theta4:.6f}, PRE(t_opt) = {t_opt:.4f} (100/(1-rho^2) = {identity:.4f})")


def test_c3_gap_identity():
    rng = np.random.default_rng(20261014)
    cases = [random_case(rng) for _ in range(1000)]
    start = time.perf_counter()
    worst = 0.0
    for m, cfg, f1 in cases:
        diff = first_order_mse(cfg, m, f1) - minimum_mse(m, f1)
        lam = cfg.a * m.mean_x / (cfg.a * m.mean_x + cfg.b)
        rhs = f1 * m.mean_y**2 * (cfg.alpha * lam * cfg.g * math.sqrt(m.cv2_x) - m.rho * math.sqrt(m.cv2_y)) ** 2
        worst = max(worst, abs(diff - rhs) / rhs)
    elapsed = time.perf_counter() - start
    record("C3 gap identity", worst <= 1e-10 and elapsed < 1.0,
           f"1000 draws, max rel deviation {worst:.2e} (tol 1e-10), {elapsed * 1e3:.1f} ms")


def test_c4_argmin():
    rng = np.random.default_rng(4)
    failures = []
    worst_spread = 0.0
    # one population, 100 shapes: the minimum must not depend on the shape
    m, _, f1 = random_case(rng)
    for i in range(100):
        cfg = random_case(rng)[1]
        while not abs(cfg.a * m.mean_x + cfg.b) > 1e-3 * abs(cfg.a * m.mean_x):
            cfg = random_case(rng)[1]
        a_opt = optimal_alpha(cfg.shape, m)
        at_opt = first_order_mse(cfg.with_alpha(a_opt), m, f1)
        grid = np.linspace(a_opt - 2, a_opt + 2, 1001)
        mses = np.array([first_order_mse(cfg.with_alpha(a), m, f1) for a in grid])
        if not at_opt <= mses.min() * (1 + 1e-12) or abs(int(np.argmin(mses)) - 500) > 1:
            failures.append(i)
        worst_spread = max(worst_spread, abs(at_opt - minimum_mse(m, f1)) / minimum_mse(m, f1))
    ok = not failures and worst_spread <= 1e-10
    record("C4 argmin and shape-independent minimum", ok,
           f"100 shapes, grid failures {failures}, max rel spread of min MSE {worst_spread:.2e}")


@pytest.mark.slow
def test_c5_monte_carlo_matches_enumeration(mc_population):
    m = compute_moments(mc_population)
    configs = [e.config for e in catalog(m)]
    start = time.perf_counter()
    exact = enumerate_exact(mc_population, 4, configs)
    mc = run_monte_carlo(mc_population, SimulationPlan(4, 10**6, 20261014, tuple(configs)))
    elapsed = time.perf_counter() - start
    z_mse = [(e.empirical_mse - x.exact_mse) / e.se_of_mse for e, x in zip(mc.stats, exact.stats)]
    z_bias = [(e.empirical_bias - x.exact_bias) / e.se_of_bias for e, x in zip(mc.stats, exact.stats)]
    worst = max(max(map(abs, z_mse)), max(map(abs, z_bias)))
    ok = exact.sample_count == 495 and worst <= 4 and elapsed < 30
    record("C5 Monte Carlo vs exact enumeration", ok,
           f"N=12 n=4, 495 subsets, 10^6 reps, max |z| = {worst:.2f} over 14 estimators x (bias, MSE), {elapsed:.1f} s")


def test_c6_first_order_adequacy(small_cv_population):
    m = compute_moments(small_cv_population)
    f1 = sampling_fraction_factor(12, 4)
    configs = [e.config for e in catalog(m)]
    exact = enumerate_exact(small_cv_population, 4, configs)
    devs = {c.label: abs(first_order_mse(c, m, f1) - s.exact_mse) / s.exact_mse for c, s in zip(configs, exact.stats)}
    worst = max(devs, key=devs.get)
    ok = math.isclose(m.cx, 0.05, rel_tol=0.05) and math.isclose(m.cy, 0.05, rel_tol=0.05) and devs[worst] <= 0.02
    record("C6 first-order adequacy at C = 0.05", ok,
           f"Cx = {m.cx:.4f}, Cy = {m.cy:.4f}, worst {worst} {devs[worst]:.3%} (tol 2%)")


def test_c7_determinism(capsys):
    args = ["simulate", "--input", str(DATA / "mc_fixture.csv"), "--n", "4", "--reps", "200000", "--seed", "42", "--format", "csv"]
    outs = []
    for workers in (1, 1, 4):
        assert main(args + ["--workers", str(workers)]) == 0
        outs.append(capsys.readouterr().out.encode())
    ok = outs[0] == outs[1] == outs[2]
    record("C7 simulate determinism", ok, f"3 runs (workers 1, 1, 4), {len(outs[0])} bytes each, identical: {ok}")

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from estfam import benchmark
from estfam.errors import DegenerateInput, EmptySample, InvalidDesign
from estfam.moments import (
    DesignSpec,
    PopulationData,
    PopulationMoments,
    SampleData,
    compute_moments,
    sample_means,
    sampling_fraction_factor,
)
from oracles import kahan_mean, moments_oracle

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def populations(draw, min_size=3, max_size=40):
    N = draw(st.integers(min_size, max_size))
    x = draw(st.lists(st.floats(1, 100), min_size=N, max_size=N))
    y = draw(st.lists(st.floats(1, 100), min_size=N, max_size=N))
    from hypothesis import assume

    assume(np.ptp(x) > 1e-3 and np.ptp(y) > 1e-3)
    return PopulationData(y, x)


def test_identical_sequences_give_unit_correlation():
    v = [1.0, 4.0, 2.5, 7.0, 3.0]
    assert compute_moments(PopulationData(v, v)).rho == 1.0


def test_constant_x_is_degenerate():
    with pytest.raises(DegenerateInput) as info:
        compute_moments(PopulationData([1, 2, 3], [5, 5, 5]))
    assert info.value.constant == "var_x"


@pytest.mark.parametrize(
    "y, x, constant",
    [([1, 1, 1], [1, 2, 3], "var_y"), ([-1, 1, 0], [1, 2, 3], "cv2_y"), ([1, 2, 3], [-1, 1, 0], "cv2_x")],
)
def test_other_degenerate_inputs(y, x, constant):
    with pytest.raises(DegenerateInput) as info:
        compute_moments(PopulationData(y, x))
    assert info.value.constant == constant


def test_population_data_validation():
    with pytest.raises(DegenerateInput):
        PopulationData([1.0], [2.0])
    with pytest.raises(DegenerateInput):
        PopulationData([1.0, 2.0], [2.0])
    with pytest.raises(DegenerateInput):
        PopulationData([1.0, math.nan], [2.0, 3.0])


def test_benchmark_fixture_echoes_published_constants(benchmark_population):
    m = compute_moments(benchmark_population)
    for key, target in benchmark.CONSTANTS.items():
        assert abs(getattr(m, key) - target) <= 0.01 * abs(target), key


@given(populations())
def test_matches_two_pass_oracle(pop):
    m = compute_moments(pop)
    ref = moments_oracle(pop.y, pop.x)
    for key, value in ref.items():
        assert math.isclose(getattr(m, key), value, rel_tol=1e-9, abs_tol=1e-12), key


@given(populations())
def test_type_invariants(pop):
    m = compute_moments(pop)
    assert abs(m.rho) <= 1 + 1e-12
    assert m.beta2_x >= m.beta1_x + 1 - 1e-9
    assert m.sigma_x == math.sqrt(m.var_x)
    assert m.cv2_x == m.var_x / m.mean_x**2
    assert m.cv2_y == m.var_y / m.mean_y**2


@given(populations(), st.floats(1, 50))
def test_shift_y_changes_only_location(pop, c):
    m = compute_moments(pop)
    s = compute_moments(PopulationData([v + c for v in pop.y], pop.x))
    assert math.isclose(s.var_y, m.var_y, rel_tol=1e-9)
    assert math.isclose(s.rho, m.rho, rel_tol=1e-9, abs_tol=1e-12)
    assert s.mean_x == m.mean_x and s.var_x == m.var_x and s.beta2_x == m.beta2_x


@pytest.mark.parametrize("c", [2.0, 0.5, 8.0])
def test_scale_x_invariance_exact_powers(c):
    rng = np.random.default_rng(5)
    x = rng.uniform(1, 10, 30)
    y = 3 * x + rng.normal(size=30)
    m = compute_moments(PopulationData(y, x))
    s = compute_moments(PopulationData(y, x * c))
    for key in ("rho", "beta1_x", "beta2_x", "cv2_x"):
        assert math.isclose(getattr(s, key), getattr(m, key), rel_tol=1e-12), key
    assert math.isclose(s.sigma_x, c * m.sigma_x, rel_tol=1e-12)


@given(populations(), st.floats(0.1, 10))
def test_scale_x_invariance(pop, c):
    m = compute_moments(pop)
    s = compute_moments(PopulationData(pop.y, [v * c for v in pop.x]))
    for key in ("rho", "beta1_x", "beta2_x", "cv2_x"):
        assert math.isclose(getattr(s, key), getattr(m, key), rel_tol=1e-9, abs_tol=1e-12), key
    assert math.isclose(s.sigma_x, c * m.sigma_x, rel_tol=1e-9)


@pytest.mark.parametrize("N, n, expected", [(20, 8, 0.075), (1000, 1, 0.999), (4, 2, 0.25)])
def test_sampling_fraction_factor(N, n, expected):
    assert math.isclose(sampling_fraction_factor(N, n), expected, rel_tol=1e-15)


@pytest.mark.parametrize("N, n", [(10, 10), (10, 0), (5, 7)])
def test_invalid_design(N, n):
    with pytest.raises(InvalidDesign):
        sampling_fraction_factor(N, n)
    with pytest.raises(InvalidDesign):
        DesignSpec(N, n)


def test_design_spec_f1():
    assert DesignSpec(20, 8).f1 == 0.075


def test_sample_means_single_unit():
    assert sample_means(SampleData((5.0,), (2.0,), (0,))) == (5.0, 2.0)


def test_sample_means_empty():
    with pytest.raises(EmptySample):
        sample_means(SampleData((), (), ()))


def test_sample_rejects_duplicate_indices():
    with pytest.raises(ValueError):
        SampleData((1.0, 2.0), (1.0, 2.0), (0, 0))


def test_full_population_sample_means(mc_population):
    s = SampleData.from_indices(mc_population, range(mc_population.N))
    m = compute_moments(mc_population)
    ybar, xbar = sample_means(s)
    assert math.isclose(ybar, m.mean_y, rel_tol=1e-15)
    assert math.isclose(xbar, m.mean_x, rel_tol=1e-15)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=60))
def test_sample_means_match_kahan(pairs):
    y, x = zip(*pairs)
    s = SampleData(y, x, tuple(range(len(y))))
    ybar, xbar = sample_means(s)
    assert math.isclose(ybar, kahan_mean(y), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(xbar, kahan_mean(x), rel_tol=1e-9, abs_tol=1e-9)


@pytest.mark.parametrize("N, n", [(6, 2), (8, 3), (10, 5)])
def test_average_over_all_subsets_is_population_mean(N, n):
    rng = np.random.default_rng(N * 10 + n)
    pop = PopulationData(rng.integers(1, 50, N).tolist(), rng.integers(1, 50, N).tolist())
    m = compute_moments(pop)
    subsets = list(itertools.combinations(range(N), n))
    ybars = [sample_means(SampleData.from_indices(pop, s))[0] for s in subsets]
    xbars = [sample_means(SampleData.from_indices(pop, s))[1] for s in subsets]
    assert math.isclose(math.fsum(ybars) / len(subsets), m.mean_y, rel_tol=1e-14)
    assert math.isclose(math.fsum(xbars) / len(subsets), m.mean_x, rel_tol=1e-14)


def test_from_constants_derives_sigma(bench):
    assert math.isclose(bench.sigma_x, 7.4135, abs_tol=5e-5)
    assert math.isclose(bench.var_y, 0.1262 * 19.55**2, rel_tol=1e-15)


@pytest.mark.parametrize(
    "override",
    [dict(rho=1.2), dict(beta2_x=1.2), dict(cv2_x=0.0), dict(mean_x=0.0), dict(sigma_x=9.0), dict(beta1_x=-0.1)],
)
def test_from_constants_validation(override):
    with pytest.raises(DegenerateInput):
        PopulationMoments.from_constants(**(benchmark.CONSTANTS | override))


def test_from_constants_accepts_rounded_sigma():
    m = PopulationMoments.from_constants(**benchmark.CONSTANTS, sigma_x=7.4135)
    assert m.sigma_x == math.sqrt(m.var_x)

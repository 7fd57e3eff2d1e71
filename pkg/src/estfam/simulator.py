"""Monte Carlo and exact-enumeration checks of the first-order analytics.

Random numbers come from SplitMix64. Replication i of a run seeded with
`seed` owns the stream whose state starts at

    key_i = mix64(seed + (i + 1) * GOLDEN)        (mod 2^64)

i.e. the i-th SplitMix64 output of `seed`. Its j-th draw is
mix64(key_i + (j + 1) * GOLDEN). Streams depend only on (seed, i), so a run
may be split into chunks and processed by any number of threads; chunk
statistics are merged in replication order, which makes the result
bit-identical for every worker count.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analytics import AnalyticSummary
from .errors import (
    AllSamplesFailed,
    DomainFailure,
    InvalidDesign,
    MismatchedLists,
    TooLarge,
)
from .family import EstimatorConfig, evaluate_array
from .moments import PopulationData, SampleData

RNG_NAME = "splitmix64-counter"
GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1
_TWO_M53 = 2.0**-53

CHUNK_REPLICATIONS = 1 << 16
# cap on chunk_rows * N index cells held at once
_CHUNK_CELLS = 1 << 22
ENUMERATION_LIMIT = 10**7
_ENUM_CHUNK = 1 << 16


def mix64(z: int) -> int:
    """SplitMix64 output finaliser on a Python int."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def replication_key(seed: int, i: int) -> int:
    return mix64((seed + (i + 1) * GOLDEN) & _MASK)


class SplitMix64:
    """Sequential SplitMix64 stream."""

    def __init__(self, state: int):
        self.state = state & _MASK

    @classmethod
    def for_replication(cls, seed: int, i: int) -> "SplitMix64":
        return cls(replication_key(seed, i))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & _MASK
        return mix64(self.state)

    def below(self, m: int) -> int:
        """Index in [0, m) from the top 53 bits of the next draw."""
        k = int(float(self.next_u64() >> 11) * _TWO_M53 * m)
        return min(k, m - 1)


def _check_design(N: int, n: int) -> None:
    if n < 1 or n >= N:
        raise InvalidDesign(f"need 1 <= n < N, got N={N}, n={n}")


def draw_srswor(pop: PopulationData, n: int, stream: SplitMix64) -> SampleData:
    """Partial Fisher-Yates: the first n positions of a shuffled index array."""
    N = pop.N
    _check_design(N, n)
    idx = list(range(N))
    for j in range(n):
        k = j + stream.below(N - j)
        idx[j], idx[k] = idx[k], idx[j]
    return SampleData.from_indices(pop, idx[:n])


def draw_index_block(N: int, n: int, seed: int, start: int, count: int) -> np.ndarray:
    """Sample indices for replications start..start+count-1, shape (count, n).

    Row r equals draw_srswor(..., SplitMix64.for_replication(seed, start + r)).
    """
    _check_design(N, n)
    reps = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    state = np.uint64(seed & _MASK) + reps * np.uint64(GOLDEN)
    state = _mix64_array(state)
    idx = np.tile(np.arange(N, dtype=np.int64), (count, 1))
    rows = np.arange(count)
    for j in range(n):
        state = state + np.uint64(GOLDEN)
        u = _mix64_array(state)
        m = N - j
        k = ((u >> np.uint64(11)).astype(np.float64) * _TWO_M53 * m).astype(np.int64)
        k = np.minimum(k, m - 1) + j
        picked = idx[rows, k]
        idx[rows, k] = idx[:, j]
        idx[:, j] = picked
    return idx[:, :n]


@dataclass
class _Moments:
    """Count, mean and centred second moment; merged with Chan's update."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        if values.size == 0:
            return cls()
        mean = float(values.mean())
        d = values - mean
        return cls(int(values.size), mean, float(np.dot(d, d)))

    def merge(self, other: "_Moments") -> None:
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self.m2 += other.m2 + delta * delta * self.count * other.count / total
        self.count = total

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else float("nan")


@dataclass(frozen=True)
class EmpiricalStats:
    key: str
    mean_estimate: float
    empirical_bias: float
    empirical_mse: float
    se_of_bias: float
    se_of_mse: float
    replications_used: int
    domain_failures: int

    @property
    def bias(self) -> float:
        return self.empirical_bias

    @property
    def mse(self) -> float:
        return self.empirical_mse


@dataclass(frozen=True)
class ExactStats:
    key: str
    exact_mean: float
    exact_bias: float
    exact_mse: float

    @property
    def bias(self) -> float:
        return self.exact_bias

    @property
    def mse(self) -> float:
        return self.exact_mse


@dataclass(frozen=True)
class SimulationPlan:
    n: int
    replications: int
    seed: int
    estimators: tuple[EstimatorConfig, ...]
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise InvalidDesign(f"replications must be >= 1, got {self.replications}")
        if not 0 <= self.seed <= _MASK:
            raise InvalidDesign(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not self.estimators:
            raise InvalidDesign("no estimators to simulate")
        object.__setattr__(self, "estimators", tuple(self.estimators))


@dataclass(frozen=True)
class EmpiricalSummary:
    stats: tuple[EmpiricalStats, ...]
    # ybar on the same samples, for empirical PRE
    reference: EmpiricalStats
    replications: int
    seed: int
    rng: str = RNG_NAME


@dataclass(frozen=True)
class ExactSummary:
    stats: tuple[ExactStats, ...]
    sample_count: int


def _chunk_rows(N: int) -> int:
    return max(1, min(CHUNK_REPLICATIONS, _CHUNK_CELLS // N))


def _empirical(key: str, dev: _Moments, sq: _Moments, fails: int, mean_y: float) -> EmpiricalStats:
    used = dev.count
    return EmpiricalStats(
        key=key,
        mean_estimate=mean_y + dev.mean,
        empirical_bias=dev.mean,
        empirical_mse=sq.mean,
        se_of_bias=math.sqrt(dev.variance / used) if used > 1 else float("nan"),
        se_of_mse=math.sqrt(sq.variance / used) if used > 1 else float("nan"),
        replications_used=used,
        domain_failures=fails,
    )


def run_monte_carlo(pop: PopulationData, plan: SimulationPlan) -> EmpiricalSummary:
    N = pop.N
    _check_design(N, plan.n)
    y, x = pop.arrays()
    mean_y = float(y.mean())
    mean_x = float(x.mean())
    configs = plan.estimators
    # ybar rides along as the last column
    ybar_cfg = EstimatorConfig(0.0, 1.0, 0.0, 0.0, name="ybar")
    columns = list(configs) + [ybar_cfg]

    rows = _chunk_rows(N)
    bounds = [
        (s, min(rows, plan.replications - s)) for s in range(0, plan.replications, rows)
    ]

    def chunk(bound):
        start, count = bound
        idx = draw_index_block(N, plan.n, plan.seed, start, count)
        ybar = y[idx].sum(axis=1) / plan.n
        xbar = x[idx].sum(axis=1) / plan.n
        out = []
        for cfg in columns:
            t, ok = evaluate_array(cfg, ybar, xbar, mean_x)
            d = t[ok] - mean_y
            out.append((_Moments.of(d), _Moments.of(d * d), int(count - ok.sum())))
        return out

    dev = [_Moments() for _ in columns]
    sq = [_Moments() for _ in columns]
    fails = [0] * len(columns)
    if plan.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=plan.workers) as pool:
            results = list(pool.map(chunk, bounds))
    else:
        results = [chunk(b) for b in bounds]
    for res in results:
        for c, (dm, sm, f) in enumerate(res):
            dev[c].merge(dm)
            sq[c].merge(sm)
            fails[c] += f

    stats = []
    for c, cfg in enumerate(columns):
        if dev[c].count == 0:
            raise AllSamplesFailed(f"estimator {cfg.label} failed on every replication")
        stats.append(_empirical(cfg.label, dev[c], sq[c], fails[c], mean_y))
    return EmpiricalSummary(
        stats=tuple(stats[:-1]),
        reference=stats[-1],
        replications=plan.replications,
        seed=plan.seed,
    )


def _combination_blocks(N: int, n: int):
    combos = itertools.combinations(range(N), n)
    dtype = np.dtype((np.int64, n))
    while True:
        block = np.fromiter(itertools.islice(combos, _ENUM_CHUNK), dtype=dtype)
        if block.size == 0:
            return
        yield block.reshape(-1, n)


def enumerate_exact(
    pop: PopulationData, n: int, estimators: Sequence[EstimatorConfig]
) -> ExactSummary:
    """Exact SRSWOR bias and MSE by visiting every size-n subset in lexicographic order."""
    N = pop.N
    _check_design(N, n)
    count = math.comb(N, n)
    if count > ENUMERATION_LIMIT:
        raise TooLarge(f"C({N}, {n}) = {count} subsets exceeds the limit {ENUMERATION_LIMIT}")
    y, x = pop.arrays()
    mean_y = float(y.mean())
    mean_x = float(x.mean())
    sums = [[] for _ in estimators]
    sq_sums = [[] for _ in estimators]
    for block in _combination_blocks(N, n):
        ybar = y[block].sum(axis=1) / n
        xbar = x[block].sum(axis=1) / n
        for c, cfg in enumerate(estimators):
            t, ok = evaluate_array(cfg, ybar, xbar, mean_x)
            if not ok.all():
                bad = int(np.flatnonzero(~ok)[0])
                raise DomainFailure(
                    cfg.label, tuple(int(i) for i in block[bad]), "bracket outside domain"
                )
            d = t - mean_y
            sums[c].append(float(d.sum()))
            sq_sums[c].append(float(np.dot(d, d)))
    stats = []
    for c, cfg in enumerate(estimators):
        bias = math.fsum(sums[c]) / count
        stats.append(
            ExactStats(
                key=cfg.label,
                exact_mean=mean_y + bias,
                exact_bias=bias,
                exact_mse=math.fsum(sq_sums[c]) / count,
            )
        )
    return ExactSummary(stats=tuple(stats), sample_count=count)


@dataclass(frozen=True)
class Tolerances:
    bias_abs: float = math.inf
    mse_rel: float = math.inf


@dataclass(frozen=True)
class DeviationRow:
    key: str
    bias_abs_dev: float
    bias_rel_dev: float
    mse_abs_dev: float
    mse_rel_dev: float
    bias_pass: bool
    mse_pass: bool

    @property
    def passed(self) -> bool:
        return self.bias_pass and self.mse_pass


@dataclass(frozen=True)
class DeviationReport:
    rows: tuple[DeviationRow, ...]
    # does ordering by observed MSE match ordering by analytic MSE
    ranking_agrees: bool
    observed_ranking: tuple[str, ...] = field(default=())
    analytic_ranking: tuple[str, ...] = field(default=())

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows)


def _relative(dev: float, reference: float) -> float:
    if dev == 0:
        return 0.0
    return dev / abs(reference) if reference != 0 else math.inf


def compare_to_theory(
    observed: EmpiricalSummary | ExactSummary,
    analytic: Sequence[AnalyticSummary],
    tolerances: Tolerances = Tolerances(),
) -> DeviationReport:
    """Deviation of the analytics from observed values, estimator by estimator.

    Relative deviations are taken with respect to the observed quantity.
    """
    obs = observed.stats
    if len(obs) != len(analytic):
        raise MismatchedLists(f"{len(obs)} observed vs {len(analytic)} analytic estimators")
    rows = []
    for o, a in zip(obs, analytic):
        if o.key != a.key:
            raise MismatchedLists(f"estimator order differs: {o.key!r} vs {a.key!r}")
        bias_dev = abs(o.bias - a.bias)
        mse_dev = abs(o.mse - a.mse)
        mse_rel = _relative(mse_dev, o.mse)
        rows.append(
            DeviationRow(
                key=o.key,
                bias_abs_dev=bias_dev,
                bias_rel_dev=_relative(bias_dev, o.bias),
                mse_abs_dev=mse_dev,
                mse_rel_dev=mse_rel,
                bias_pass=bias_dev <= tolerances.bias_abs,
                mse_pass=mse_rel <= tolerances.mse_rel,
            )
        )
    keys = [o.key for o in obs]
    obs_rank = tuple(keys[i] for i in np.argsort([o.mse for o in obs], kind="stable"))
    ana_rank = tuple(keys[i] for i in np.argsort([a.mse for a in analytic], kind="stable"))
    return DeviationReport(tuple(rows), obs_rank == ana_rank, obs_rank, ana_rank)

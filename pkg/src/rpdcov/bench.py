"""Wall-clock comparison of the brute-force and projected estimators.

Times both methods on identical data over a list of sample sizes, and can
sweep the total dimension to locate the break-even sample size where the
projected estimator starts winning.  A work guard refuses the quadratic
method once n^2 (p + q) exceeds a configurable budget.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import UnivariateSpline

from .dcov import dcov_unbiased_bruteforce
from .errors import ValidationError
from .projection import RngSeed, stream_rng
from .rpdc import RpdcConfig, rpdc_estimate

DEFAULT_DDC_WORK_BUDGET = 4e9

_D_BENCH_DATA = 21


@dataclass(frozen=True)
class BenchmarkRow:
    n: int
    method: str  # "ddc" or "rpdc"
    mean_seconds: float
    sd_seconds: float
    median_seconds: float


@dataclass(frozen=True)
class BreakEvenPoint:
    p_plus_q: int
    n0: Optional[float]  # None when no crossover inside the sampled range


def _time_call(fn: Callable[[], object], repeats: int) -> tuple[float, float, float]:
    fn()  # warm-up, discarded (also absorbs one-time JIT cost)
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    mean = statistics.fmean(times)
    sd = statistics.stdev(times) if len(times) > 1 else 0.0
    return mean, sd, statistics.median(times)


def benchmark(
    n_list: Sequence[int],
    *,
    p: int = 10,
    q: int = 10,
    k_projections: int = 50,
    repeats: int = 5,
    master_seed: int = 0,
    ddc_work_budget: float = DEFAULT_DDC_WORK_BUDGET,
) -> list[BenchmarkRow]:
    """Monotonic-clock timings of both estimators on shared Gaussian data.

    Returns one row per (n, method); the ddc row is omitted when the
    quadratic work n^2 (p + q) would exceed ``ddc_work_budget``.
    """
    if repeats < 3:
        raise ValidationError("repeats must be >= 3 for a meaningful spread")
    rows = []
    for idx, n in enumerate(n_list):
        rng = stream_rng(master_seed, _D_BENCH_DATA, idx)
        X = rng.standard_normal((n, p))
        Y = rng.standard_normal((n, q))
        cfg = RpdcConfig(seed=RngSeed(master_seed), k_projections=k_projections)
        rows.append(
            BenchmarkRow(n, "rpdc", *_time_call(lambda: rpdc_estimate(X, Y, cfg), repeats))
        )
        if float(n) * n * (p + q) <= ddc_work_budget:
            rows.append(
                BenchmarkRow(
                    n, "ddc", *_time_call(lambda: dcov_unbiased_bruteforce(X, Y), repeats)
                )
            )
    return rows


def _crossover(ns: np.ndarray, diffs: np.ndarray) -> Optional[float]:
    """Root of a smoothed ddc-minus-rpdc time curve, if one is bracketed."""
    if ns.size < 2:
        return None
    k = min(3, ns.size - 1)
    spline = UnivariateSpline(ns, diffs, k=k, s=0.0)
    grid = np.linspace(ns[0], ns[-1], 512)
    values = spline(grid)
    signs = np.sign(values)
    flips = np.flatnonzero(np.diff(signs) != 0)
    if flips.size == 0:
        return None
    i = int(flips[0])
    x0, x1 = grid[i], grid[i + 1]
    y0, y1 = values[i], values[i + 1]
    if y1 == y0:
        return float(x0)
    return float(x0 - y0 * (x1 - x0) / (y1 - y0))


def break_even(
    totals: Sequence[int],
    n_list: Sequence[int],
    *,
    k_projections: int = 50,
    repeats: int = 5,
    master_seed: int = 0,
    ddc_work_budget: float = DEFAULT_DDC_WORK_BUDGET,
) -> list[BreakEvenPoint]:
    """Break-even sample size for each total dimension p + q.

    For every total the dimension is split evenly, both methods are timed
    over ``n_list``, and the median time difference is interpolated with a
    smoothing spline whose first sign change is the break-even point.
    """
    points = []
    for total in totals:
        if total < 2:
            raise ValidationError("total dimension must be >= 2")
        p = total // 2
        q = total - p
        ns = []
        diffs = []
        for n in n_list:
            if float(n) * n * (p + q) > ddc_work_budget:
                continue
            rows = benchmark(
                [n],
                p=p,
                q=q,
                k_projections=k_projections,
                repeats=repeats,
                master_seed=master_seed,
                ddc_work_budget=ddc_work_budget,
            )
            by_method = {row.method: row for row in rows}
            if "ddc" not in by_method:
                continue
            ns.append(n)
            diffs.append(by_method["ddc"].median_seconds - by_method["rpdc"].median_seconds)
        points.append(BreakEvenPoint(total, _crossover(np.asarray(ns, float), np.asarray(diffs))))
    return points

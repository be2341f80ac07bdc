"""Monte Carlo power and type-I error studies over a grid of test settings.

Each grid cell names a test method and a data-generating example; the
runner draws N independent datasets per cell, applies the test, and
records the rejection fraction and timing.  Replicate seeds are derived
from the master seed by (cell, replicate) index, so reports are
reproducible and independent of worker count or completion order.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .baselines import ddc_gamma_test, puri_sen_test, wilks_lambda_test
from .errors import RpdcovError, ValidationError
from .examples import ExampleSpec, generate_example
from .projection import RngSeed
from .rpdc import RpdcConfig, TestResult, gamma_test, permutation_test

SCHEMA_VERSION = 1

WORKERS_ENV_VAR = "RPDCOV_THREADS"

METHOD_NAMES = ("rpdc-gamma", "rpdc-perm", "ddc", "wilks", "puri-sen")

# Seed-derivation domains, disjoint from the per-test projection streams
# because each replicate gets a freshly derived master.
_D_SIM_DATA = 11
_D_SIM_TEST = 12


@dataclass(frozen=True)
class GridCell:
    """One (method, example, size, dimensions, parameters) combination."""

    method: str
    example: int
    n: int
    p: int = 10
    q: int = 10
    params: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class CellResult:
    method: str
    example: int
    n: int
    p: int
    q: int
    params: Mapping[str, float]
    rejection_rate: float
    replicates: int
    failures: int
    wall_time_s: float


@dataclass(frozen=True)
class SimulationReport:
    schema_version: int
    master_seed: int
    replicates: int
    significance: float
    k_projections: int
    permutations: int
    cells: tuple[CellResult, ...]


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker-pool size: explicit argument, else RPDCOV_THREADS, else cores."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV_VAR)
        workers = int(env) if env else (os.cpu_count() or 1)
    if workers < 1:
        raise ValidationError("worker count must be >= 1")
    return workers


def _derive_master(master: int, *key: int) -> int:
    return int(np.random.SeedSequence(master, spawn_key=key).generate_state(1, np.uint64)[0])


def run_test(method: str, X, Y, cfg: RpdcConfig) -> TestResult:
    """Dispatch one named test; ``cfg`` carries level, K, L, and seed."""
    if method == "rpdc-gamma":
        return gamma_test(X, Y, cfg)
    if method == "rpdc-perm":
        return permutation_test(X, Y, cfg)
    if method == "ddc":
        return ddc_gamma_test(X, Y, cfg.significance)
    if method == "wilks":
        return wilks_lambda_test(X, Y, cfg.significance)
    if method == "puri-sen":
        return puri_sen_test(X, Y, cfg.significance)
    raise ValidationError(f"unknown method {method!r}; expected one of {METHOD_NAMES}")


def _replicate_job(payload) -> tuple[int, int, object, float]:
    (master, cell_idx, rep, method, example, n, p, q, params, k, perms, alpha) = payload
    start = time.perf_counter()
    try:
        sample = generate_example(
            ExampleSpec(
                example=example,
                n=n,
                p=p,
                q=q,
                params=dict(params),
                seed=RngSeed(_derive_master(master, _D_SIM_DATA, cell_idx, rep)),
            )
        )
        cfg = RpdcConfig(
            seed=RngSeed(_derive_master(master, _D_SIM_TEST, cell_idx, rep)),
            k_projections=k,
            significance=alpha,
            permutations=perms,
        )
        result = run_test(method, sample.x, sample.y, cfg)
        outcome: object = bool(result.reject)
    except (RpdcovError, np.linalg.LinAlgError) as exc:
        outcome = f"{type(exc).__name__}: {exc}"
    return cell_idx, rep, outcome, time.perf_counter() - start


def run_simulation(
    cells: Sequence[GridCell],
    replicates: int,
    master_seed: int,
    *,
    k_projections: int = 50,
    permutations: int = 200,
    significance: float = 0.05,
    workers: Optional[int] = None,
) -> SimulationReport:
    """Run every grid cell for ``replicates`` independent datasets.

    Cell failures (singular blocks, degenerate ranks, ...) are recorded in
    the failure count and the run continues.  Results are aggregated by
    replicate index, so the report does not depend on scheduling.
    """
    if not cells:
        raise ValidationError("simulation grid must be non-empty")
    if replicates < 1:
        raise ValidationError("replicates must be >= 1")
    for cell in cells:
        if cell.method not in METHOD_NAMES:
            raise ValidationError(
                f"unknown method {cell.method!r}; expected one of {METHOD_NAMES}"
            )
    n_workers = resolve_workers(workers)
    results = []
    for cell_idx, cell in enumerate(cells):
        payloads = [
            (
                master_seed,
                cell_idx,
                rep,
                cell.method,
                cell.example,
                cell.n,
                cell.p,
                cell.q,
                tuple(sorted(cell.params.items())),
                k_projections,
                permutations,
                significance,
            )
            for rep in range(replicates)
        ]
        start = time.perf_counter()
        if n_workers > 1 and replicates > 1:
            with ProcessPoolExecutor(max_workers=n_workers) as pool:
                outcomes = list(
                    pool.map(
                        _replicate_job,
                        payloads,
                        chunksize=max(1, replicates // (4 * n_workers)),
                    )
                )
        else:
            outcomes = [_replicate_job(p) for p in payloads]
        wall = time.perf_counter() - start
        rejected = sum(1 for _, _, out, _ in outcomes if out is True)
        completed = sum(1 for _, _, out, _ in outcomes if isinstance(out, bool))
        failures = replicates - completed
        results.append(
            CellResult(
                method=cell.method,
                example=cell.example,
                n=cell.n,
                p=cell.p,
                q=cell.q,
                params=dict(cell.params),
                rejection_rate=rejected / completed if completed else 0.0,
                replicates=completed,
                failures=failures,
                wall_time_s=wall,
            )
        )
    return SimulationReport(
        schema_version=SCHEMA_VERSION,
        master_seed=master_seed,
        replicates=replicates,
        significance=significance,
        k_projections=k_projections,
        permutations=permutations,
        cells=tuple(results),
    )

"""Command-line interface.

Subcommands: ``dcov`` (estimate only), ``test`` (one of five independence
tests), ``simulate`` (rejection-rate grids over the built-in examples),
and ``bench`` (speed comparison and break-even sweep).  Exit codes:
0 success, 1 test ran but the data were degenerate (flagged), 2 usage or
IO error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from typing import Optional, Sequence

from . import io
from .bench import DEFAULT_DDC_WORK_BUDGET, benchmark, break_even
from .dcov import dcov_unbiased_bruteforce, dcov_unbiased_fast
from .errors import (
    RankDegeneracyError,
    RpdcovError,
    SingularCovarianceError,
    ValidationError,
)
from .projection import RngSeed
from .rpdc import RpdcConfig, rpdc_estimate
from .simulate import METHOD_NAMES, GridCell, run_simulation, run_test

EXIT_OK = 0
EXIT_DEGENERATE = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed (u64)")
    parser.add_argument("--k", type=int, default=50, help="number of random projections")
    parser.add_argument("--perms", type=int, default=200, help="permutation replicates")
    parser.add_argument("--alpha", type=float, default=0.05, help="significance level")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def _config(args) -> RpdcConfig:
    return RpdcConfig(
        seed=RngSeed(args.seed),
        k_projections=args.k,
        significance=args.alpha,
        permutations=args.perms,
    )


def _emit(obj, rows: list[dict], args) -> None:
    if args.format == "csv":
        io.write_csv_rows(rows, args.out)
    else:
        io.write_json(obj, args.out)


def _flat(mapping: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flat(value, f"{name}."))
        else:
            out[name] = value
    return out


def _cmd_dcov(args) -> int:
    X = io.read_matrix(args.x)
    Y = io.read_matrix(args.y)
    if args.method == "fast":
        estimate = dcov_unbiased_fast(X, Y)
    elif args.method == "brute":
        estimate = dcov_unbiased_bruteforce(X, Y)
    else:
        estimate = rpdc_estimate(X, Y, _config(args))
    _emit(estimate, [_flat(asdict(estimate))], args)
    return EXIT_OK


def _cmd_test(args) -> int:
    X = io.read_matrix(args.x)
    Y = io.read_matrix(args.y)
    result = run_test(args.method, X, Y, _config(args))
    _emit(result, [_flat(asdict(result))], args)
    return EXIT_DEGENERATE if result.degenerate else EXIT_OK


def _cmd_simulate(args) -> int:
    params = {}
    if args.rho is not None:
        params["rho"] = args.rho
    if args.sigma is not None:
        params["sigma"] = args.sigma
    if args.t_frac is not None:
        params["t_frac"] = args.t_frac
    cells = [
        GridCell(method=m, example=args.example, n=args.n, p=args.p, q=args.q, params=params)
        for m in args.methods.split(",")
    ]
    replicates = 400 if args.paper_reps else args.reps
    report = run_simulation(
        cells,
        replicates,
        args.seed,
        k_projections=args.k,
        permutations=args.perms,
        significance=args.alpha,
        workers=args.workers,
    )
    _emit(report, [_flat(asdict(cell)) for cell in report.cells], args)
    return EXIT_OK


def _cmd_bench(args) -> int:
    n_list = [int(tok) for tok in args.n_list.split(",")]
    dims = [int(tok) for tok in args.dims.split(",")]
    if args.break_even:
        points = break_even(
            dims,
            n_list,
            k_projections=args.k,
            repeats=args.repeats,
            master_seed=args.seed,
            ddc_work_budget=args.budget,
        )
        _emit(
            {"break_even": [asdict(pt) for pt in points]},
            [asdict(pt) for pt in points],
            args,
        )
        return EXIT_OK
    if len(dims) != 2:
        raise ValidationError("--dims must be 'p,q' unless --break-even is given")
    rows = benchmark(
        n_list,
        p=dims[0],
        q=dims[1],
        k_projections=args.k,
        repeats=args.repeats,
        master_seed=args.seed,
        ddc_work_budget=args.budget,
    )
    timed = {row.n for row in rows if row.method == "ddc"}
    refused = [n for n in n_list if n not in timed]
    _emit(
        {"rows": [asdict(r) for r in rows], "ddc_refused_n": refused},
        [asdict(r) for r in rows],
        args,
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpdcov",
        description="Distance-covariance independence testing with random projections",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dcov = sub.add_parser("dcov", help="estimate distance covariance only")
    p_dcov.add_argument("--x", required=True, help="CSV file with X observations (rows)")
    p_dcov.add_argument("--y", required=True, help="CSV file with Y observations (rows)")
    p_dcov.add_argument("--method", choices=("fast", "brute", "rpdc"), default="fast")
    _add_common(p_dcov)
    p_dcov.set_defaults(handler=_cmd_dcov)

    p_test = sub.add_parser("test", help="run an independence test")
    p_test.add_argument("--x", required=True)
    p_test.add_argument("--y", required=True)
    p_test.add_argument("--method", choices=METHOD_NAMES, required=True)
    _add_common(p_test)
    p_test.set_defaults(handler=_cmd_test)

    p_sim = sub.add_parser("simulate", help="rejection-rate study on a built-in example")
    p_sim.add_argument("--example", type=int, choices=range(1, 8), required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--p", type=int, default=10)
    p_sim.add_argument("--q", type=int, default=10)
    p_sim.add_argument("--rho", type=float, default=None, help="example 5 correlation")
    p_sim.add_argument("--sigma", type=float, default=None, help="example 6 noise level")
    p_sim.add_argument("--t-frac", type=float, default=None, help="example 7 change point")
    p_sim.add_argument("--methods", default="rpdc-gamma", help="comma-separated test names")
    p_sim.add_argument("--reps", type=int, default=100, help="replicates per cell")
    p_sim.add_argument(
        "--paper-reps",
        action="store_true",
        help="use the full 400 replicates instead of the desk-scale default",
    )
    p_sim.add_argument("--workers", type=int, default=None, help="worker processes")
    _add_common(p_sim)
    p_sim.set_defaults(handler=_cmd_simulate)

    p_bench = sub.add_parser("bench", help="time ddc against rpdc")
    p_bench.add_argument("--n-list", required=True, help="comma-separated sample sizes")
    p_bench.add_argument(
        "--dims",
        default="10,10",
        help="'p,q' for a plain run; comma-separated p+q totals with --break-even",
    )
    p_bench.add_argument("--repeats", type=int, default=5)
    p_bench.add_argument("--break-even", action="store_true")
    p_bench.add_argument("--budget", type=float, default=DEFAULT_DDC_WORK_BUDGET)
    _add_common(p_bench)
    p_bench.set_defaults(handler=_cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except (RankDegeneracyError, SingularCovarianceError) as exc:
        print(f"rpdcov: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, OSError) as exc:
        print(f"rpdcov: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RpdcovError as exc:
        print(f"rpdcov: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())

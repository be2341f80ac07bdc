"""CSV/JSON IO, the simulation runner, the benchmark guard, and the CLI."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpdcov import GridCell, ValidationError, benchmark, run_simulation
from rpdcov.cli import main
from rpdcov.io import read_matrix, write_matrix
from rpdcov.simulate import resolve_workers

# ---------------------------------------------------------------------------
# matrix IO


def test_round_trip_exact(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((20, 3)) * 10.0 ** rng.integers(-200, 200, size=(20, 3))
    path = tmp_path / "m.csv"
    write_matrix(path, X)
    np.testing.assert_array_equal(read_matrix(path), X)


@settings(max_examples=30)
@given(
    st.lists(
        st.floats(allow_nan=False, allow_infinity=False, width=64),
        min_size=1,
        max_size=40,
    )
)
def test_round_trip_exact_hypothesis(values):
    import io as std_io

    buf = std_io.StringIO()
    arr = np.array(values)[:, None]
    np.savetxt(buf, arr, delimiter=",", fmt="%.17g")
    back = np.loadtxt(buf.getvalue().splitlines(), delimiter=",", ndmin=2)
    np.testing.assert_array_equal(back, arr)


def test_header_detection(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("alpha,beta\n1.5,2.5\n3.5,4.5\n", encoding="utf-8")
    np.testing.assert_array_equal(read_matrix(path), [[1.5, 2.5], [3.5, 4.5]])
    bare = tmp_path / "b.csv"
    bare.write_text("1.5,2.5\n3.5,4.5\n", encoding="utf-8")
    np.testing.assert_array_equal(read_matrix(bare), [[1.5, 2.5], [3.5, 4.5]])


def test_single_column_shape(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("1.0\n2.0\n3.0\n", encoding="utf-8")
    assert read_matrix(path).shape == (3, 1)


def test_empty_and_malformed_files(tmp_path):
    empty = tmp_path / "e.csv"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(ValidationError):
        read_matrix(empty)
    bad = tmp_path / "bad.csv"
    bad.write_text("h1,h2\n1.0,oops\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        read_matrix(bad)


# ---------------------------------------------------------------------------
# simulation runner


def _counts(report):
    # Everything except wall time is seed-determined.
    return [
        (c.method, c.example, c.n, c.p, c.q, c.rejection_rate, c.replicates, c.failures)
        for c in report.cells
    ]


def test_simulation_deterministic_and_single_replicate():
    cells = [GridCell(method="rpdc-gamma", example=1, n=40, p=3, q=3)]
    a = run_simulation(cells, 1, master_seed=5, k_projections=5, workers=1)
    b = run_simulation(cells, 1, master_seed=5, k_projections=5, workers=1)
    assert _counts(a) == _counts(b)
    assert a.cells[0].rejection_rate in (0.0, 1.0)
    assert a.cells[0].replicates == 1


def test_simulation_worker_pool_matches_serial():
    cells = [
        GridCell(method="rpdc-gamma", example=1, n=40, p=2, q=2),
        GridCell(method="wilks", example=5, n=60, p=2, q=2, params={"rho": 0.3}),
    ]
    serial = run_simulation(cells, 6, master_seed=9, k_projections=5, workers=1)
    pooled = run_simulation(cells, 6, master_seed=9, k_projections=5, workers=2)
    for a, b in zip(serial.cells, pooled.cells):
        assert a.rejection_rate == b.rejection_rate
        assert a.failures == b.failures


def test_simulation_records_failures_and_continues():
    # Wilks requires n > p + q + 3; n=20 with p=q=10 fails per replicate.
    cells = [
        GridCell(method="wilks", example=1, n=20, p=10, q=10),
        GridCell(method="rpdc-gamma", example=1, n=20, p=2, q=2),
    ]
    report = run_simulation(cells, 3, master_seed=1, k_projections=3, workers=1)
    assert report.cells[0].failures == 3
    assert report.cells[0].rejection_rate == 0.0
    assert report.cells[1].failures == 0


def test_simulation_validates_grid():
    with pytest.raises(ValidationError):
        run_simulation([], 3, master_seed=0)
    with pytest.raises(ValidationError):
        run_simulation([GridCell(method="nope", example=1, n=20)], 1, 0, workers=1)


def test_resolve_workers_env(monkeypatch):
    monkeypatch.setenv("RPDCOV_THREADS", "3")
    assert resolve_workers(None) == 3
    monkeypatch.delenv("RPDCOV_THREADS")
    assert resolve_workers(2) == 2
    assert resolve_workers(None) >= 1
    with pytest.raises(ValidationError):
        resolve_workers(0)


# ---------------------------------------------------------------------------
# benchmark


def test_benchmark_rows_and_guard():
    rows = benchmark([64, 128], p=2, q=2, k_projections=3, repeats=3, master_seed=1)
    methods = {(r.n, r.method) for r in rows}
    assert (64, "rpdc") in methods and (64, "ddc") in methods
    assert all(r.mean_seconds >= 0.0 and r.sd_seconds >= 0.0 for r in rows)
    guarded = benchmark(
        [64, 128], p=2, q=2, k_projections=3, repeats=3, master_seed=1,
        ddc_work_budget=64 * 64 * 4,
    )
    assert {(r.n, r.method) for r in guarded if r.method == "ddc"} == {(64, "ddc")}
    with pytest.raises(ValidationError):
        benchmark([64], repeats=2)


# ---------------------------------------------------------------------------
# CLI


def _write_pair(tmp_path, n=60, p=2, q=2, seed=0):
    rng = np.random.default_rng(seed)
    xp = tmp_path / "x.csv"
    yp = tmp_path / "y.csv"
    write_matrix(xp, rng.standard_normal((n, p)))
    write_matrix(yp, rng.standard_normal((n, q)))
    return str(xp), str(yp)


def test_cli_test_subcommand_json(tmp_path, capsys):
    xp, yp = _write_pair(tmp_path)
    code = main(
        ["test", "--x", xp, "--y", yp, "--method", "rpdc-gamma", "--k", "5",
         "--alpha", "0.05", "--seed", "7"]
    )
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["method"] == "rpdc_gamma"
    assert out["schema_version"] == 1
    assert out["config"]["seed_master"] == 7


def test_cli_dcov_fast_rejects_multivariate(tmp_path, capsys):
    xp, yp = _write_pair(tmp_path, p=3, q=1)
    code = main(["dcov", "--x", xp, "--y", yp, "--method", "fast"])
    captured = capsys.readouterr()
    assert code == 2
    assert "univariate" in captured.err


def test_cli_dcov_fast_univariate(tmp_path, capsys):
    from rpdcov import dcov_unbiased_fast

    xp, yp = _write_pair(tmp_path, p=1, q=1, seed=3)
    code = main(["dcov", "--x", xp, "--y", yp, "--method", "fast"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    expected = dcov_unbiased_fast(read_matrix(xp), read_matrix(yp)).value
    assert out["value"] == expected


def test_cli_degenerate_data_exit_code(tmp_path, capsys):
    xp = tmp_path / "x.csv"
    yp = tmp_path / "y.csv"
    write_matrix(xp, np.ones((20, 2)))
    write_matrix(yp, np.ones((20, 2)))
    code = main(["test", "--x", str(xp), "--y", str(yp), "--method", "rpdc-gamma"])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    assert out["degenerate"] is True


def test_cli_numeric_failure_exit_code(tmp_path, capsys):
    rng = np.random.default_rng(1)
    base = rng.standard_normal((50, 1))
    xp = tmp_path / "x.csv"
    yp = tmp_path / "y.csv"
    write_matrix(xp, np.hstack([base, base]))
    write_matrix(yp, rng.standard_normal((50, 2)))
    code = main(["test", "--x", str(xp), "--y", str(yp), "--method", "wilks"])
    assert code == 3
    assert "condition" in capsys.readouterr().err


def test_cli_usage_error(tmp_path, capsys):
    xp, yp = _write_pair(tmp_path)
    assert main(["test", "--x", xp, "--y", yp, "--method", "bogus"]) == 2
    assert main(["dcov", "--x", xp, "--y", "/nonexistent.csv"]) == 2


def test_cli_simulate_writes_report(tmp_path):
    out = tmp_path / "report.json"
    code = main(
        ["simulate", "--example", "6", "--sigma", "1", "--n", "60", "--reps", "3",
         "--k", "5", "--seed", "3", "--workers", "1", "--out", str(out)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == 1
    assert report["replicates"] == 3
    assert report["cells"][0]["example"] == 6
    assert report["cells"][0]["params"] == {"sigma": 1.0}


def test_cli_bench_csv(tmp_path, capsys):
    code = main(
        ["bench", "--n-list", "64,128", "--dims", "2,2", "--k", "3", "--repeats", "3",
         "--format", "csv"]
    )
    out = capsys.readouterr().out
    assert code == 0
    header = out.splitlines()[0]
    assert header.startswith("n,method,mean_seconds")


def test_cli_bench_break_even(tmp_path, capsys):
    code = main(
        ["bench", "--n-list", "64,256", "--dims", "4", "--k", "2", "--repeats", "3",
         "--break-even"]
    )
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["break_even"][0]["p_plus_q"] == 4

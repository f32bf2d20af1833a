import csv
import io
import subprocess
import sys
from fractions import Fraction

import pytest

from expquad import cli
from expquad.harness import (
    CSV_HEADER,
    ConvergenceRecord,
    emit_csv,
    estimate_order,
    make_config,
    read_csv,
    run_convergence,
)
from expquad.phi import SpectrumError
from expquad.problems import make_problem
from expquad.quadrature import make_rule
from expquad.space import finite_difference, lgl_collocation


@pytest.mark.parametrize(
    "coarse, fine, expected, tol",
    [(1e-4, 2.5e-5, 2.0, 1e-12), (8e-6, 1e-6, 3.0, 1e-12), (8.0170e-5, 1.2961e-5, 2.6, 0.05)],
)
def test_estimate_order_examples(coarse, fine, expected, tol):
    assert estimate_order(coarse, fine) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize("coarse, fine", [(0.0, 1e-3), (1e-3, 0.0), (-1.0, 1e-3)])
def test_estimate_order_undefined(coarse, fine):
    assert estimate_order(coarse, fine) is None


def test_single_record_csv():
    buf = io.StringIO()
    emit_csv([ConvergenceRecord(Fraction(1, 10), 1.23456e-3, 4.5e-4, 0.5)], buf)
    lines = buf.getvalue().splitlines()
    assert lines == [",".join(CSV_HEADER), "1/10,1.2346e-03,,4.5000e-04,,0.500000"]


def test_empty_records_rejected():
    with pytest.raises(ValueError):
        emit_csv([], io.StringIO())


def test_unwritable_path_named(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv([ConvergenceRecord(Fraction(1), 1.0, 1.0)], target)


def test_csv_roundtrip(tmp_path):
    recs = [
        ConvergenceRecord(Fraction(1, 2), 1e-3, 2e-3, 0.1),
        ConvergenceRecord(Fraction(1, 4), 1.25e-4, 5e-4, 0.2, 3.0, 2.0),
    ]
    path = tmp_path / "r.csv"
    emit_csv(recs, path)
    back = read_csv(path)
    assert [r.k for r in back] == [Fraction(1, 2), Fraction(1, 4)]
    assert back[1].local_order == 3.0 and back[0].local_order is None


@pytest.fixture(scope="module")
def fd_small():
    return finite_difference(40)


def test_run_convergence_orders_and_sorting(fd_small):
    prob = make_problem("exp")
    recs = run_convergence(prob, fd_small, make_config(make_rule("gauss", 1), "classical"),
                           [Fraction(1, 16), Fraction(1, 4), Fraction(1, 8)])
    assert [r.k for r in recs] == [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]
    assert recs[0].global_order is None and recs[0].local_order is None
    for r in recs:
        assert r.local_err >= 0 and r.global_err >= 0 and r.wall_time >= 0
    assert recs[2].global_order == pytest.approx(estimate_order(recs[1].global_err, recs[2].global_err))


def test_error_floor_suppresses_orders():
    prob = make_problem("sine")
    disc = lgl_collocation(10)
    # the corrected and classical schemes coincide here; gauss:4 on tiny steps hits roundoff
    recs = run_convergence(prob, disc, make_config(make_rule("gauss", 4), "classical"),
                           [Fraction(1, 64), Fraction(1, 128)])
    assert recs[1].global_err < 1e-13
    assert recs[1].global_order is None


def test_missing_exact_solution_rejected(fd_small):
    from expquad.problems import Problem

    with pytest.raises(ValueError, match="exact"):
        run_convergence(Problem(), fd_small, make_config(make_rule("gauss", 1), "classical"), [Fraction(1, 2)])


def test_local_exceeds_global_by_about_one(fd_small):
    prob = make_problem("exp")
    disc = lgl_collocation(39)
    recs = run_convergence(prob, disc, make_config(make_rule("simpson"), "corrected", 4),
                           [Fraction(1, 2**m) for m in range(3, 7)])
    for r in recs[1:]:
        assert 0.5 <= r.local_order - r.global_order <= 1.6


# ---- CLI ----

RUN = ["run", "--problem", "exp", "--space", "fd:30", "--rule", "gauss:2",
       "--approach", "corrected", "--k", "1/4,1/8,1/16"]


def test_cli_run_stdout(capsys):
    assert cli.main(RUN + ["--no-timing"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert tuple(rows[0]) == CSV_HEADER
    assert [r[0] for r in rows[1:]] == ["1/4", "1/8", "1/16"]
    assert all(r[5] == "" for r in rows[1:])


def test_cli_run_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(RUN + ["--no-timing", "--out", str(a)]) == 0
    assert cli.main(RUN + ["--no-timing", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_run_with_figure(tmp_path):
    fig = tmp_path / "f.png"
    assert cli.main(RUN + ["--out", str(tmp_path / "r.csv"), "--figure", str(fig)]) == 0
    assert fig.stat().st_size > 0


def test_cli_plot(tmp_path, capsys):
    prefix = tmp_path / "sub" / "study"
    assert cli.main(["plot"] + RUN[1:] + ["--out", str(prefix)]) == 0
    for name in ("study.dat", "study.png", "study_cost.png"):
        assert (tmp_path / "sub" / name).stat().st_size > 0
    lines = (tmp_path / "sub" / "study.dat").read_text().splitlines()
    assert lines[0].startswith("#") and len(lines) == 4


@pytest.mark.parametrize("argv", [
    [],
    ["run"],
    RUN[:2] + ["heat"] + RUN[3:],
    ["run", "--problem", "exp", "--space", "cheb:3", "--rule", "gauss:2", "--approach", "classical", "--k", "1/4"],
    ["run", "--problem", "exp", "--space", "fd:5", "--rule", "gauss:0", "--approach", "classical", "--k", "1/4"],
    ["run", "--problem", "exp", "--space", "fd:5", "--rule", "gauss:2", "--approach", "classical", "--k", "1/3,0.3"],
    ["run", "--problem", "exp", "--space", "fd:5", "--rule", "gauss:2", "--approach", "classical", "--p", "2", "--k", "1/4"],
    ["run", "--problem", "exp", "--space", "fd:5", "--rule", "gauss:2", "--approach", "corrected", "--p", "40", "--k", "1/4"],
    ["tables", "--id", "10"],
])
def test_cli_usage_errors(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_cli_unwritable_output(tmp_path, capsys):
    code = cli.main(RUN + ["--out", str(tmp_path / "nope" / "x.csv")])
    assert code == 1
    assert "nope" in capsys.readouterr().err


def test_cli_numerical_failure(monkeypatch, capsys):
    def broken(text):
        raise SpectrumError("positive eigenvalue")

    monkeypatch.setattr(cli, "parse_space", broken)
    assert cli.main(RUN) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_cli_verify_ok(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "11/11 checks passed" in out
    assert "[FAIL]" not in out


def test_cli_verify_failure(monkeypatch, capsys):
    from expquad import verify

    def fake():
        return [verify.Check("ok", True, ""), verify.Check("bad", False, "forced")]

    monkeypatch.setattr(verify, "run_all", fake)
    assert cli.main(["verify"]) == 3
    assert "[FAIL] bad" in capsys.readouterr().out


def test_cli_tables_writes_files(tmp_path, capsys, monkeypatch):
    from expquad import tables

    spec = tables.TABLES[4]
    monkeypatch.setitem(tables.TABLES, 4, tables.TableSpec(4, spec.problem, "lgl:12", spec.rule, spec.depth,
                                                          spec.ks[:3], spec.title))
    assert cli.main(["tables", "--id", "4", "--out", str(tmp_path), "--no-timing"]) == 0
    for name in ("table4_classical.csv", "table4_corrected.csv", "table4.png"):
        assert (tmp_path / name).stat().st_size > 0
    assert len(read_csv(tmp_path / "table4_corrected.csv")) == 3


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "expquad.cli", "verify"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "expquad.cli", "run"], capture_output=True, text=True)
    assert proc.returncode == 1

import json

import pytest

from varjacobi import cli
from varjacobi.errors import ConsistencyError, ConvergenceError
from varjacobi.sweep import rows_from_csv


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_routes(capsys):
    code, out, _ = run(capsys, "eval", "--a=1/2", "--alpha=3/10", "--beta=1/5", "--lambda=2/5", "--n=20")
    assert code == 0
    rep = json.loads(out)
    assert rep["value"] == pytest.approx(0.17373303677392145, rel=1e-15)
    assert rep["regime"] == "Oscillatory" and rep["gamma"] == "103/10"
    code, out, _ = run(capsys, "eval", "--a=1/2", "--alpha=3/10", "--beta=1/5", "--lambda=2/5", "--n=20", "--route", "quad")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(0.17373303677392145, rel=1e-10)
    code, out, _ = run(capsys, "eval", "--a=2", "--lambda=0.5", "--n=100", "--route", "asym")
    assert code == 0 and json.loads(out)["kind"] == "asymptote"
    code, out, _ = run(capsys, "eval", "--a=3", "--lambda=0.5", "--n=100", "--route", "bound")
    assert code == 0 and json.loads(out)["certificate"]["fourier_base"] < 1


def test_sweep_writes_csv(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--a=-2/3", "--lambda=1/2", "--n-from", "10", "--n-to", "40",
                     "--integer-gamma", "--routes", "exact,asym", "--output", str(path))
    assert code == 0
    rows, routes = rows_from_csv(path.read_text())
    assert routes == ["exact", "asymptotic"]
    assert [r.n for r in rows] == list(range(12, 41, 3))
    code, out, _ = run(capsys, "fit", "--in", str(path), "--method", "all")
    assert code == 0 and json.loads(out)["points_used"] == len(rows)


def test_classify_and_phase_diagram(capsys):
    code, out, _ = run(capsys, "classify", "--a=-6/13", "--lambda=3/10")
    assert code == 0 and json.loads(out)["regime"] == "SaddleLower"
    code, out, _ = run(capsys, "phase-diagram", "--lambda-list", "0.3,0.5", "--a-list=-0.9,0,3")
    assert code == 0 and len(out.splitlines()) == 7


def test_verify_bounds(capsys):
    code, out, _ = run(capsys, "verify-bounds", "--a=-4/5", "--lambda=1/2", "--n-max", "30")
    rep = json.loads(out)
    assert code == 0 and rep["all_dominated"] and rep["checked"] == 7 and rep["refused"] == 24


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--a=-2", "--lambda=0.5", "--n=3"],
        ["eval", "--a=abc", "--lambda=0.5", "--n=3"],
        ["eval", "--a=0", "--lambda=0.5", "--n=-3"],
        ["eval", "--a=3", "--lambda=0.5", "--n=3", "--x-contour", "5", "--route", "quad"],
        ["sweep", "--a=0", "--lambda=0.5"],
        ["sweep", "--a=0", "--lambda=0.5", "--n-list", "1,2", "--routes", "exact,nope"],
        ["eval", "--a=0", "--lambda=0.5", "--n=3", "--route", "bound"],
        ["verify-bounds", "--a=0", "--lambda=0.5"],
        ["eval", "--a=0", "--lambda=0.5", "--n=3", "--precision-bits", "16"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_fit_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "fit", "--in", str(tmp_path / "missing.csv"))
    assert code == 2


def test_convergence_failure_exit_3(capsys, monkeypatch, tmp_path):
    def boom(point, cfg):
        raise ConvergenceError("stalled", estimate=0.0, error=1.0)

    monkeypatch.setattr("varjacobi.sweep.scaled_via_integrals", boom)
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--a=0", "--lambda=0.5", "--n-list", "1,2", "--routes", "exact,quad",
                     "--output", str(path))
    assert code == 3
    rows, _ = rows_from_csv(path.read_text())
    # rows are still written, with the failure recorded
    assert rows[0].values["exact"].ok and rows[0].failures == {"quadrature": "ConvergenceError"}

    monkeypatch.setattr(cli, "scaled_via_integrals", boom)
    code, _, err = run(capsys, "eval", "--a=0", "--lambda=0.5", "--n=2", "--route", "quad")
    assert code == 3 and "convergence" in err


def test_consistency_failure_exit_4(capsys, monkeypatch):
    def broken(point):
        raise ConsistencyError("forms disagree")

    monkeypatch.setattr(cli, "estimate", broken)
    code, _, err = run(capsys, "eval", "--a=-2/3", "--lambda=0.5", "--n=30", "--route", "asym")
    assert code == 4 and "consistency" in err


def test_bound_violation_exit_4(capsys, monkeypatch):
    import mpmath

    class Tiny:
        def bound(self, n):
            return mpmath.mpf(0)

    monkeypatch.setattr(cli, "bound_certificate", lambda point: Tiny())
    code, out, _ = run(capsys, "verify-bounds", "--a=3", "--lambda=0.5", "--n-max", "3")
    assert code == 4 and not json.loads(out)["all_dominated"]

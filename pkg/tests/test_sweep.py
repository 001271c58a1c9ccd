import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from varjacobi.errors import ConfigError, InsufficientData
from varjacobi.params import ParamSet
from varjacobi.sweep import (
    ROUTES,
    RouteValue,
    SweepRow,
    SweepSpec,
    fit_decay_exponent,
    integer_gamma_n_values,
    local_maxima,
    phase_diagram,
    phase_diagram_csv,
    read_rows,
    rows_from_csv,
    rows_from_json,
    rows_to_csv,
    rows_to_json,
    run_sweep,
    sweep_status,
)

OSC = ParamSet(F(1, 5), F(3, 10), F(1, 2), F(1, 2))


def test_single_degree_zero_row():
    rows = run_sweep(SweepSpec(OSC, (0,), ("exact", "quadrature")))
    assert len(rows) == 1
    row = rows[0]
    ref = 0.5**0.3 * 0.75**0.5
    assert row.values["exact"].value == pytest.approx(ref, rel=1e-14)
    assert row.deviations["exact_quadrature"] < 1e-9
    assert row.regime == "Oscillatory" and not row.failures


def test_exact_quadrature_deviation_column():
    spec = SweepSpec(ParamSet(F(1, 2), F(3, 10), F(1, 5), F(2, 5)), (1, 5, 20), ("exact", "quadrature", "asymptotic"))
    rows = run_sweep(spec)
    for row in rows:
        assert row.deviations["exact_quadrature"] <= 1e-8
        assert "exact_asymptotic" in row.deviations


def test_bound_dominance_column():
    spec = SweepSpec(ParamSet(F(-4, 5), 0, 0, F(1, 2)), (5, 6, 10), ("exact", "bound"))
    rows = run_sweep(spec)
    assert rows[0].dominates is True and rows[2].dominates is True
    # n = 6 gives non-integer gamma: the certificate is refused and recorded
    assert rows[1].dominates is None
    assert rows[1].failures == {"bound": "CertificateRefused"}
    assert sweep_status(rows) == 0


def test_sweep_status_codes():
    row = SweepRow(n=1, gamma=0.0, integer_flag=True, regime="Oscillatory")
    assert sweep_status([row]) == 0
    row.failures["quadrature"] = "ConvergenceError"
    assert sweep_status([row]) == 3
    row.failures["asymptotic"] = "ConsistencyError"
    assert sweep_status([row]) == 4


def _synthetic_rows(slope, ns, oscillate=True):
    rows = []
    for n in ns:
        v = n**slope * (math.cos(0.9 * n) if oscillate else 1.0)
        rows.append(SweepRow(n=n, gamma=0.0, integer_flag=False, regime="Oscillatory",
                             values={"exact": RouteValue(sign=1 if v > 0 else -1, log10=math.log10(abs(v)), value=v)}))
    return rows


def test_fit_recovers_synthetic_slope():
    rows = _synthetic_rows(-0.5, range(100, 2001))
    rep = fit_decay_exponent(rows, "exact", "envelope_maxima")
    assert rep.fitted_slope == pytest.approx(-0.5, abs=0.01)
    assert rep.points_used > 100
    mono = _synthetic_rows(-1 / 3, range(100, 2001, 10), oscillate=False)
    rep = fit_decay_exponent(mono, "exact", "all_points")
    assert rep.fitted_slope == pytest.approx(-1 / 3, abs=1e-12)
    assert rep.slope_stderr < 1e-10


def test_fit_log_rate():
    rows = []
    for n in range(10, 60):
        rows.append(SweepRow(n=n, gamma=0.0, integer_flag=False, regime="ExponentialLower",
                             values={"exact": RouteValue(sign=1, log10=0.1 * n / math.log(10) + 2)}))
    rep = fit_decay_exponent(rows, "exact", "log_rate")
    assert rep.fitted_slope == pytest.approx(0.1, rel=1e-12)


def test_fit_errors():
    rows = _synthetic_rows(-0.5, range(100, 103))
    with pytest.raises(InsufficientData):
        fit_decay_exponent(rows, "exact", "all_points")
    with pytest.raises(InsufficientData):
        fit_decay_exponent(_synthetic_rows(-0.5, range(100, 200), oscillate=False), "exact", "envelope_maxima")
    with pytest.raises(ConfigError):
        fit_decay_exponent(rows, "exact", "median")


def test_local_maxima():
    assert list(local_maxima([0, 2, 1, 3, 3, 1, 5])) == [1]
    assert list(local_maxima([1, 2])) == []


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_values=()),
        dict(n_values=(3, 2)),
        dict(n_values=(-1, 2)),
        dict(routes=()),
        dict(routes=("exact", "exact")),
        dict(routes=("magic",)),
    ],
)
def test_spec_validation(kwargs):
    fields = dict(params=OSC, n_values=(1, 2), routes=("exact",))
    fields.update(kwargs)
    with pytest.raises(ConfigError):
        SweepSpec(**fields)


def test_spec_rejects_bad_radius():
    from varjacobi.contour import QuadratureConfig

    with pytest.raises(ConfigError):
        SweepSpec(OSC, (1,), ("quadrature",), quad=QuadratureConfig(x_contour=2.0))


def test_integer_gamma_n_values():
    p = ParamSet(F(-2, 3), 0, 0, F(1, 2))
    ns = integer_gamma_n_values(p, 100, 120)
    assert ns == [102, 105, 108, 111, 114, 117, 120]
    p = ParamSet(F(-4, 5), F(2, 5), 0, F(1, 2))
    assert all((F(-4, 5) * n + F(2, 5)).denominator == 1 for n in integer_gamma_n_values(p, 0, 50))
    assert integer_gamma_n_values(ParamSet(F(1, 2), F(1, 3), 0, F(1, 2)), 0, 50) == []


def test_phase_diagram():
    cells = phase_diagram([F(3, 10), F(1, 2)], [F(-9, 10), F(-6, 13), 0, 2, 3])
    tags = {(c.lam, c.a): c.regime for c in cells}
    assert tags[(0.3, -6 / 13)] == "SaddleLower"
    assert tags[(0.5, 2.0)] == "SaddleUpper"
    assert tags[(0.5, -0.9)] == "ExponentialLower"
    assert tags[(0.3, 3.0)] == "ExponentialUpper"
    assert tags[(0.5, 0.0)] == "Oscillatory"
    text = phase_diagram_csv(cells)
    assert text.splitlines()[0] == "lambda,a,regime,lower,upper,laplace_case"
    assert len(text.splitlines()) == 11


# --- serialisation ------------------------------------------------------------

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
errors = st.sampled_from(["", "ConvergenceError: no luck, after 3 tries", 'RegimeError: "quoted"\nline'])


@st.composite
def route_values(draw, kind):
    err = draw(errors)
    if err:
        return RouteValue(error=err, kind=kind)
    sign = draw(st.sampled_from([-1, 0, 1]))
    if sign == 0:
        return RouteValue(sign=0, log10=-math.inf, value=0.0, kind=kind)
    log10 = draw(st.floats(-1000, 1000))
    value = draw(st.one_of(st.none(), finite))
    return RouteValue(sign=sign, log10=log10, value=value, kind=kind)


@st.composite
def sweeps(draw):
    routes = tuple(draw(st.permutations(ROUTES))[: draw(st.integers(1, len(ROUTES)))])
    ns = sorted(draw(st.sets(st.integers(0, 5000), min_size=1, max_size=6)))
    rows = []
    for n in ns:
        row = SweepRow(
            n=n,
            gamma=draw(finite),
            integer_flag=draw(st.booleans()),
            regime=draw(st.sampled_from(["Oscillatory", "SaddleUpper", "ExponentialLower"])),
        )
        for r in routes:
            rv = draw(route_values("upper_bound" if r == "bound" else draw(st.sampled_from(["", "asymptote"]))))
            row.values[r] = rv
            if rv.error:
                row.failures[r] = rv.error.split(":", 1)[0]
        present = [r for r in ("exact", "quadrature", "asymptotic") if r in routes]
        for i, r1 in enumerate(present):
            for r2 in present[i + 1:]:
                if draw(st.booleans()):
                    row.deviations[f"{r1}_{r2}"] = draw(st.floats(0, 1e300))
        if "bound" in routes and "exact" in routes:
            row.dominates = draw(st.one_of(st.none(), st.booleans()))
        rows.append(row)
    return routes, rows


@given(sweeps())
def test_csv_round_trip(data):
    routes, rows = data
    back, back_routes = rows_from_csv(rows_to_csv(rows, routes))
    assert tuple(back_routes) == routes
    assert back == rows


@given(sweeps())
def test_json_round_trip(data):
    routes, rows = data
    spec = SweepSpec(OSC, tuple(r.n for r in rows), routes)
    text = rows_to_json(rows, spec)
    back, back_routes = rows_from_json(text)
    assert tuple(back_routes) == routes
    assert back == rows
    meta = json.loads(text)["metadata"]
    assert meta["precision_bits"] == 256 and meta["spec"]["params"]["a"] == "1/5"


def test_read_rows_detects_format(tmp_path):
    spec = SweepSpec(OSC, (3, 4), ("exact",))
    rows = run_sweep(spec)
    (tmp_path / "a.csv").write_text(rows_to_csv(rows, spec.routes))
    (tmp_path / "a.json").write_text(rows_to_json(rows, spec))
    assert read_rows(str(tmp_path / "a.csv"))[0] == rows_from_csv(rows_to_csv(rows, spec.routes))[0]
    assert read_rows(str(tmp_path / "a.json"))[0] == read_rows(str(tmp_path / "a.csv"))[0]


# --- determinism --------------------------------------------------------------


@given(
    a=st.sampled_from([F(-4, 5), F(1, 5), 2, 3]),
    alpha=st.sampled_from([0, F(1, 4)]),
    ns=st.sets(st.integers(0, 120), min_size=1, max_size=4),
)
def test_sweep_is_deterministic(a, alpha, ns):
    spec = SweepSpec(ParamSet(a, alpha, F(1, 2), F(1, 2)), tuple(sorted(ns)), ("exact", "asymptotic", "bound"))
    first = rows_to_csv(run_sweep(spec), spec.routes)
    assert rows_to_csv(run_sweep(spec), spec.routes) == first


def test_parallel_matches_serial():
    spec = SweepSpec(OSC, tuple(range(10, 40, 3)), ("exact", "quadrature", "asymptotic"))
    serial = rows_to_csv(run_sweep(spec, workers=1), spec.routes)
    parallel = rows_to_csv(run_sweep(spec, workers=2), spec.routes)
    assert parallel == serial

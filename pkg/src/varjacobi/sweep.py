"""Parameter sweeps over n, decay-rate fits, regime tables and their file formats.

A sweep evaluates one parameter set on a list of degrees through any of four
routes (explicit sum, contour quadrature, asymptotic formula, bound
certificate).  Rows are computed independently, optionally in worker
processes, and always come back in n order.  A failure in one route of one
row is written into that row; the sweep carries on.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from . import __version__
from .asymptotics import bound_certificate, estimate
from .contour import QuadratureConfig, scaled_via_integrals
from .errors import (
    ConfigError,
    ConsistencyError,
    ConvergenceError,
    InsufficientData,
    VarJacobiError,
)
from .exact import PrecisionConfig, scaled_exact
from .numeric import SignedLog
from .params import EvalPoint, ParamSet, as_fraction, classify, laplace_case

ROUTES = ("exact", "quadrature", "asymptotic", "bound")
COMPARABLE = ("exact", "quadrature", "asymptotic")
FIT_METHODS = ("envelope_maxima", "all_points", "log_rate")
MIN_FIT_POINTS = 5
# |value| within float range when |log10| stays below this
FLOAT_LOG10_LIMIT = 307.0


@dataclass(frozen=True)
class SweepSpec:
    params: ParamSet
    n_values: tuple
    routes: tuple = ("exact",)
    precision: PrecisionConfig = PrecisionConfig()
    quad: QuadratureConfig = QuadratureConfig()

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "routes", tuple(self.routes))
        validate_spec(self)

    def echo(self) -> dict:
        """JSON-ready description of the spec (exact parameters as strings)."""
        p = self.params
        return {
            "params": {k: str(as_fraction(getattr(p, k))) for k in ("a", "alpha", "beta", "lam")},
            "n_values": list(self.n_values),
            "routes": list(self.routes),
            "precision": asdict(self.precision),
            "quad": asdict(self.quad),
        }


def validate_spec(spec: SweepSpec):
    if not spec.n_values:
        raise ConfigError("n_values is empty")
    if any(n < 0 for n in spec.n_values):
        raise ConfigError("n_values must be nonnegative")
    if any(b <= a for a, b in zip(spec.n_values, spec.n_values[1:])):
        raise ConfigError("n_values must be strictly increasing")
    if not spec.routes:
        raise ConfigError("at least one route is required")
    unknown = [r for r in spec.routes if r not in ROUTES]
    if unknown:
        raise ConfigError(f"unknown routes {unknown}; choose from {list(ROUTES)}")
    if len(set(spec.routes)) != len(spec.routes):
        raise ConfigError("routes must not repeat")
    lam = float(spec.params.lam)
    if "quadrature" in spec.routes and not lam < spec.quad.x_contour < 1 / lam:
        raise ConfigError(f"x_contour {spec.quad.x_contour} outside ({lam}, {1 / lam})")


def integer_gamma_n_values(params: ParamSet, n_from: int, n_to: int) -> list:
    """Degrees in [n_from, n_to] where a*n + alpha is an integer (exact rational test)."""
    a, alpha = as_fraction(params.a), as_fraction(params.alpha)
    q = a.denominator
    start = next((n for n in range(n_from, n_from + q) if (a * n + alpha).denominator == 1), None)
    if start is None:
        return []
    return list(range(start, n_to + 1, q))


@dataclass
class RouteValue:
    """One route's result in a row: sign/log10 always, plain value when it fits a float."""

    sign: Optional[int] = None
    log10: Optional[float] = None
    value: Optional[float] = None
    error: str = ""
    kind: str = ""

    @classmethod
    def from_signed_log(cls, sl: SignedLog, kind: str = "") -> "RouteValue":
        value = None
        if sl.sign == 0:
            value = 0.0
        elif abs(sl.log10_abs) < FLOAT_LOG10_LIMIT:
            value = sl.to_float(warn=False)
        return cls(sign=sl.sign, log10=sl.log10_abs, value=value, kind=kind)

    @property
    def ok(self) -> bool:
        return not self.error and self.sign is not None


@dataclass
class SweepRow:
    n: int
    gamma: float
    integer_flag: bool
    regime: str
    values: dict = field(default_factory=dict)
    deviations: dict = field(default_factory=dict)
    dominates: Optional[bool] = None
    failures: dict = field(default_factory=dict)

    def route(self, name: str) -> RouteValue:
        return self.values[name]


def _mp_value(rv: RouteValue):
    """Reconstruct the value as an mpf from sign and log10 (exact enough for deviations)."""
    if rv.sign == 0:
        return mpmath.mpf(0)
    return rv.sign * mpmath.power(10, mpmath.mpf(rv.log10))


def _evaluate_route(route: str, point: EvalPoint, spec: SweepSpec):
    """(RouteValue, mpf value or None, failure class name or None)."""
    try:
        if route == "exact":
            v = scaled_exact(point, spec.precision).value
            return RouteValue.from_signed_log(SignedLog.from_value(v)), v, None
        if route == "quadrature":
            v = scaled_via_integrals(point, spec.quad).reconstructed
            return RouteValue.from_signed_log(SignedLog.from_value(v)), v, None
        if route == "asymptotic":
            est = estimate(point)
            return RouteValue.from_signed_log(est.signed_log, kind=est.kind), None, None
        cert = bound_certificate(point)
        v = cert.bound(point.n)
        return RouteValue.from_signed_log(SignedLog.from_value(v), kind="upper_bound"), v, None
    except VarJacobiError as exc:
        return RouteValue(error=f"{type(exc).__name__}: {exc}"), None, type(exc).__name__


def compute_row(spec: SweepSpec, n: int) -> SweepRow:
    point = EvalPoint(spec.params, n)
    row = SweepRow(
        n=n,
        gamma=float(point.gamma),
        integer_flag=point.integer_flag,
        regime=str(classify(spec.params).tag),
    )
    exact_values = {}
    with mpmath.workprec(spec.precision.significand_bits):
        for route in spec.routes:
            rv, v, failure = _evaluate_route(route, point, spec)
            row.values[route] = rv
            if failure:
                row.failures[route] = failure
            if v is not None:
                exact_values[route] = v
        present = [r for r in COMPARABLE if r in spec.routes]
        for i, r1 in enumerate(present):
            for r2 in present[i + 1:]:
                a, b = row.values[r1], row.values[r2]
                if not (a.ok and b.ok) or a.kind == "upper_bound" or b.kind == "upper_bound":
                    continue
                va = exact_values.get(r1, _mp_value(a))
                vb = exact_values.get(r2, _mp_value(b))
                scale = max(abs(va), abs(vb))
                row.deviations[f"{r1}_{r2}"] = 0.0 if scale == 0 else float(abs(va - vb) / scale)
        if "bound" in spec.routes and "exact" in spec.routes:
            if "bound" in exact_values and "exact" in exact_values:
                row.dominates = bool(abs(exact_values["exact"]) <= exact_values["bound"])
    return row


def _row_task(args):
    spec, n = args
    return compute_row(spec, n)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list:
    """Rows in n order.  ``workers > 1`` computes rows in separate processes."""
    validate_spec(spec)
    if workers <= 1 or len(spec.n_values) == 1:
        return [compute_row(spec, n) for n in spec.n_values]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order whatever the completion order
        return list(pool.map(_row_task, [(spec, n) for n in spec.n_values], chunksize=1))


def sweep_status(rows: Sequence[SweepRow]) -> int:
    """Exit status implied by row failures: 4 consistency, 3 convergence, else 0."""
    kinds = {k for row in rows for k in row.failures.values()}
    if ConsistencyError.__name__ in kinds:
        return 4
    if ConvergenceError.__name__ in kinds:
        return 3
    return 0


# --- fitting ------------------------------------------------------------------


@dataclass(frozen=True)
class FitReport:
    fitted_slope: float
    slope_stderr: float
    points_used: int
    method: str
    intercept: float = 0.0


def _usable(rows: Sequence[SweepRow], route: str):
    ns, logs, signs = [], [], []
    for row in rows:
        rv = row.values.get(route)
        if rv is None or not rv.ok or rv.sign == 0:
            continue
        ns.append(row.n)
        logs.append(rv.log10 * math.log(10))
        signs.append(rv.sign)
    return np.array(ns, dtype=float), np.array(logs), np.array(signs)


def _linear_fit(x, y, method: str) -> FitReport:
    if len(x) < MIN_FIT_POINTS:
        raise InsufficientData(f"{len(x)} usable points, need at least {MIN_FIT_POINTS}")
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    dof = len(x) - 2
    sigma2 = float(resid @ resid) / dof if dof > 0 else 0.0
    cov = sigma2 * np.linalg.inv(A.T @ A)
    return FitReport(
        fitted_slope=float(coef[0]),
        slope_stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
        points_used=len(x),
        method=method,
        intercept=float(coef[1]),
    )


def local_maxima(values) -> np.ndarray:
    """Indices i with values[i] strictly above both neighbours (endpoints excluded)."""
    v = np.asarray(values)
    if len(v) < 3:
        return np.array([], dtype=int)
    inner = (v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])
    return np.nonzero(inner)[0] + 1


def fit_decay_exponent(rows: Sequence[SweepRow], route: str = "exact", method: str = "all_points") -> FitReport:
    """Slope of ln|value| against ln n (or against n for ``log_rate``).

    ``envelope_maxima`` keeps only the local maxima of |value| over
    consecutive rows; ``log_rate`` returns the exponential rate per step.
    """
    if method not in FIT_METHODS:
        raise ConfigError(f"unknown fit method {method!r}; choose from {list(FIT_METHODS)}")
    ns, logs, signs = _usable(rows, route)
    if method == "log_rate":
        return _linear_fit(ns, logs, method)
    if np.any(ns <= 0):
        keep = ns > 0
        ns, logs, signs = ns[keep], logs[keep], signs[keep]
    if method == "envelope_maxima":
        if len(signs) and np.all(signs == signs[0]):
            raise InsufficientData("values do not change sign; no oscillation to take an envelope of")
        idx = local_maxima(logs)
        ns, logs = ns[idx], logs[idx]
    return _linear_fit(np.log(ns), logs, method)


# --- regime table -------------------------------------------------------------


@dataclass(frozen=True)
class PhaseCell:
    lam: float
    a: float
    regime: str
    lower: float
    upper: float
    laplace_case: int


def phase_diagram(lambda_grid: Sequence, a_grid: Sequence) -> list:
    cells = []
    for lam in lambda_grid:
        for a in a_grid:
            p = ParamSet(a=a, alpha=0, beta=0, lam=lam)
            r = classify(p)
            cells.append(PhaseCell(float(lam), float(a), str(r.tag), r.lower, r.upper, laplace_case(p)))
    return cells


def phase_diagram_csv(cells: Sequence[PhaseCell]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "a", "regime", "lower", "upper", "laplace_case"])
    for c in cells:
        w.writerow([repr(c.lam), repr(c.a), c.regime, repr(c.lower), repr(c.upper), c.laplace_case])
    return buf.getvalue()


# --- serialisation ------------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _parse_float(s: str) -> Optional[float]:
    return None if s == "" else float(s)


def _parse_bool(s: str) -> Optional[bool]:
    return None if s == "" else s == "true"


def _columns(routes: Sequence[str]) -> list:
    cols = ["n", "gamma", "integer_flag", "regime"]
    for r in routes:
        cols += [f"{r}_sign", f"{r}_log10", f"{r}_value", f"{r}_kind", f"{r}_error"]
    present = [r for r in COMPARABLE if r in routes]
    for i, r1 in enumerate(present):
        for r2 in present[i + 1:]:
            cols.append(f"dev_{r1}_{r2}")
    if "bound" in routes and "exact" in routes:
        cols.append("bound_dominates")
    return cols


def _row_record(row: SweepRow, routes: Sequence[str]) -> dict:
    rec = {"n": row.n, "gamma": row.gamma, "integer_flag": row.integer_flag, "regime": row.regime}
    for r in routes:
        rv = row.values[r]
        rec.update({
            f"{r}_sign": rv.sign,
            f"{r}_log10": rv.log10,
            f"{r}_value": rv.value,
            f"{r}_kind": rv.kind,
            f"{r}_error": rv.error,
        })
    for c in _columns(routes):
        if c.startswith("dev_"):
            rec[c] = row.deviations.get(c[4:])
    if "bound_dominates" in _columns(routes):
        rec["bound_dominates"] = row.dominates
    return rec


def _record_row(rec: dict, routes: Sequence[str]) -> SweepRow:
    row = SweepRow(n=int(rec["n"]), gamma=rec["gamma"], integer_flag=rec["integer_flag"], regime=rec["regime"])
    for r in routes:
        err = rec.get(f"{r}_error") or ""
        row.values[r] = RouteValue(
            sign=rec.get(f"{r}_sign"),
            log10=rec.get(f"{r}_log10"),
            value=rec.get(f"{r}_value"),
            error=err,
            kind=rec.get(f"{r}_kind") or "",
        )
        if err:
            row.failures[r] = err.split(":", 1)[0]
    for key, v in rec.items():
        if key.startswith("dev_") and v is not None:
            row.deviations[key[4:]] = v
    row.dominates = rec.get("bound_dominates")
    return row


def rows_to_csv(rows: Sequence[SweepRow], routes: Sequence[str]) -> str:
    cols = _columns(routes)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        rec = _row_record(row, routes)
        w.writerow([_fmt(rec[c]) for c in cols])
    return buf.getvalue()


def _routes_from_header(header: Sequence[str]) -> list:
    return [c[: -len("_sign")] for c in header if c.endswith("_sign")]


def rows_from_csv(text: str):
    """(rows, routes) parsed from :func:`rows_to_csv` output."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    routes = _routes_from_header(header)
    rows = []
    for values in reader:
        raw = dict(zip(header, values))
        rec = {}
        for k, s in raw.items():
            if k == "n":
                rec[k] = int(s)
            elif k in ("integer_flag", "bound_dominates"):
                rec[k] = _parse_bool(s)
            elif k == "regime" or k.endswith("_error") or k.endswith("_kind"):
                rec[k] = s
            elif k.endswith("_sign"):
                rec[k] = None if s == "" else int(s)
            else:
                rec[k] = _parse_float(s)
        rows.append(_record_row(rec, routes))
    return rows, routes


def _json_float(x):
    # JSON has no inf/nan; non-finite values travel as strings
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def rows_to_json(rows: Sequence[SweepRow], spec: SweepSpec) -> str:
    records = [
        {k: _json_float(v) for k, v in _row_record(row, spec.routes).items()} for row in rows
    ]
    meta = {
        "version": __version__,
        "spec": spec.echo(),
        "precision_bits": spec.precision.significand_bits,
        "columns": _columns(spec.routes),
    }
    return json.dumps({"metadata": meta, "rows": records}, indent=1, sort_keys=True) + "\n"


def rows_from_json(text: str):
    doc = json.loads(text)
    routes = _routes_from_header(doc["metadata"]["columns"])
    rows = []
    for rec in doc["rows"]:
        rec = {k: (float(v) if isinstance(v, str) and v in ("inf", "-inf", "nan") else v) for k, v in rec.items()}
        rows.append(_record_row(rec, routes))
    return rows, routes


def read_rows(path: str):
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return rows_from_json(text)
    return rows_from_csv(text)

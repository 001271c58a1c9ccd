"""Command-line front end.

    varjacobi eval --a=0.2 --alpha=0.3 --beta=0.5 --lambda=0.5 --n=500 --route exact
    varjacobi sweep --a=2 --lambda=0.5 --n-from 100 --n-to 2000 --n-step 50 --routes exact,asym
    varjacobi classify --a=-0.8 --lambda=0.5
    varjacobi phase-diagram --lambda-list 0.3,0.5 --a-list=-0.9,0,3
    varjacobi fit --in sweep.csv --method envelope
    varjacobi verify-bounds --a=-4/5 --lambda=0.5 --n-max 100

Negative numbers must be attached with '=' (``--a=-2/3``).  Parameters
accept fractions, which keeps a*n + alpha exactly integral where intended.

Exit codes: 0 success, 2 configuration error, 3 convergence failure (rows
are still written), 4 internal consistency failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

import mpmath

from .asymptotics import bound_certificate, estimate
from .contour import QuadratureConfig, scaled_via_integrals
from .errors import (
    CertificateRefused,
    ConfigError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    InsufficientData,
    RegimeError,
)
from .exact import PrecisionConfig, scaled_exact
from .numeric import SignedLog
from .params import EvalPoint, ParamSet, as_fraction, classify, laplace_case
from .sweep import (
    SweepSpec,
    fit_decay_exponent,
    integer_gamma_n_values,
    phase_diagram,
    phase_diagram_csv,
    read_rows,
    rows_to_csv,
    rows_to_json,
    run_sweep,
    sweep_status,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_CONSISTENCY = 4

ROUTE_ALIASES = {
    "exact": "exact",
    "quad": "quadrature",
    "quadrature": "quadrature",
    "asym": "asymptotic",
    "asymptotic": "asymptotic",
    "bound": "bound",
}
FIT_ALIASES = {"envelope": "envelope_maxima", "all": "all_points", "lograte": "log_rate"}


def _number(text: str):
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def _number_list(text: str) -> list:
    return [_number(t) for t in text.split(",") if t.strip()]


def _params(args) -> ParamSet:
    try:
        return ParamSet(a=_number(args.a), alpha=_number(args.alpha), beta=_number(args.beta), lam=_number(args.lam))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _precision(args) -> PrecisionConfig:
    try:
        return PrecisionConfig(significand_bits=args.precision_bits)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _quad(args) -> QuadratureConfig:
    try:
        return QuadratureConfig(x_contour=args.x_contour)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _route(name: str) -> str:
    try:
        return ROUTE_ALIASES[name.strip()]
    except KeyError:
        raise ConfigError(f"unknown route {name!r}; choose from {sorted(ROUTE_ALIASES)}") from None


def _signed(value) -> dict:
    sl = SignedLog.from_value(value)
    plain = sl.to_float(warn=False)
    return {"sign": sl.sign, "log10": sl.log10_abs, "value": plain if math.isfinite(plain) else None}


def _emit(obj, out=None):
    text = json.dumps(obj, indent=1, sort_keys=True, default=str) + "\n"
    (out or sys.stdout).write(text)


def _write(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands --------------------------------------------------------------


def cmd_eval(args) -> int:
    params = _params(args)
    if args.n is None or args.n < 0:
        raise ConfigError("--n must be a nonnegative integer")
    point = EvalPoint(params, args.n)
    route = _route(args.route)
    report = {
        "n": point.n,
        "gamma": str(point.gamma),
        "integer_flag": point.integer_flag,
        "regime": str(classify(params).tag),
        "route": route,
    }
    with mpmath.workprec(args.precision_bits):
        if route == "exact":
            sv = scaled_exact(point, _precision(args))
            report.update(_signed(sv.value))
            report.update(working_bits=sv.working_bits, cancellation_bits=sv.cancellation_bits)
        elif route == "quadrature":
            parts = scaled_via_integrals(point, _quad(args))
            report.update(_signed(parts.reconstructed))
            report.update(
                fourier_part=float(parts.fourier_part),
                laplace_part=float(parts.laplace_part),
                sin_factor=parts.sin_factor,
                error_estimate=parts.error,
                precision_bits=parts.precision_bits,
            )
        elif route == "asymptotic":
            est = estimate(point)
            sl = est.signed_log
            report.update(sign=sl.sign, log10=sl.log10_abs, value=sl.to_float(warn=False))
            report.update(
                kind=est.kind,
                decay_exponent=est.decay_exponent,
                error_order_exponent=est.error_order_exponent,
                correction_term=est.correction_term,
                envelope=est.envelope,
                phase=est.phase,
            )
        else:
            cert = bound_certificate(point)
            report.update(_signed(cert.bound(point.n)))
            report.update(certificate=asdict(cert))
    _emit(report)
    return EXIT_OK


def _n_values(args, params: ParamSet) -> list:
    if args.n_list:
        values = [int(t) for t in args.n_list.split(",") if t.strip()]
    else:
        if args.n_from is None or args.n_to is None:
            raise ConfigError("give --n-list or both --n-from and --n-to")
        if args.integer_gamma:
            values = integer_gamma_n_values(params, args.n_from, args.n_to)
            if args.n_step and args.n_step > 1:
                values = values[:: args.n_step]
        else:
            if args.n_step < 1:
                raise ConfigError("--n-step must be positive")
            values = list(range(args.n_from, args.n_to + 1, args.n_step))
    if not values:
        raise ConfigError("no degrees selected")
    return values


def cmd_sweep(args) -> int:
    params = _params(args)
    routes = tuple(_route(r) for r in args.routes.split(",") if r.strip())
    spec = SweepSpec(
        params=params,
        n_values=tuple(_n_values(args, params)),
        routes=routes,
        precision=_precision(args),
        quad=_quad(args),
    )
    rows = run_sweep(spec, workers=args.workers)
    text = rows_to_json(rows, spec) if args.out == "json" else rows_to_csv(rows, spec.routes)
    _write(text, args.output)
    return sweep_status(rows)


def cmd_classify(args) -> int:
    params = _params(args)
    r = classify(params)
    _emit({"regime": str(r.tag), "lower": r.lower, "upper": r.upper, "laplace_case": laplace_case(params)})
    return EXIT_OK


def cmd_phase_diagram(args) -> int:
    try:
        cells = phase_diagram(_number_list(args.lambda_list), _number_list(args.a_list))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    _write(phase_diagram_csv(cells), args.output)
    return EXIT_OK


def cmd_fit(args) -> int:
    method = FIT_ALIASES.get(args.method, args.method)
    try:
        rows, routes = read_rows(args.input)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc}") from exc
    route = _route(args.route)
    if route not in routes:
        raise ConfigError(f"route {route!r} not in file (has {routes})")
    try:
        report = fit_decay_exponent(rows, route, method)
    except InsufficientData as exc:
        raise ConfigError(str(exc)) from exc
    _emit(asdict(report))
    return EXIT_OK


def cmd_verify_bounds(args) -> int:
    params = _params(args)
    prec = _precision(args)
    checked, violations, refused = [], [], 0
    for n in range(args.n_max + 1):
        point = EvalPoint(params, n)
        try:
            cert = bound_certificate(point)
        except CertificateRefused:
            refused += 1
            continue
        except RegimeError as exc:
            raise ConfigError(str(exc)) from exc
        with mpmath.workprec(prec.significand_bits):
            s = scaled_exact(point, prec).value
            b = cert.bound(n)
            ok = bool(abs(s) <= b)
            margin = float(mpmath.log10(b) - mpmath.log10(abs(s))) if s != 0 else math.inf
        checked.append(n)
        if not ok:
            violations.append({"n": n, "log10_margin": margin})
    _emit({
        "regime": str(classify(params).tag),
        "checked": len(checked),
        "refused": refused,
        "violations": violations,
        "all_dominated": not violations,
    })
    return EXIT_OK if not violations else EXIT_CONSISTENCY


# --- parser -------------------------------------------------------------------


def _add_params(p):
    p.add_argument("--a", required=True, help="slope a > -1 (fractions allowed: --a=-2/3)")
    p.add_argument("--alpha", default="0")
    p.add_argument("--beta", default="0")
    p.add_argument("--lambda", dest="lam", required=True, help="lambda in (0, 1)")


def _add_numerics(p):
    p.add_argument("--precision-bits", type=int, default=256)
    p.add_argument("--x-contour", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varjacobi", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate S_n at one degree")
    _add_params(p)
    _add_numerics(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--route", default="exact", choices=["exact", "quad", "asym", "bound"])
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate over a range of degrees")
    _add_params(p)
    _add_numerics(p)
    p.add_argument("--n-from", type=int)
    p.add_argument("--n-to", type=int)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--n-list", help="comma-separated degrees")
    p.add_argument("--integer-gamma", action="store_true", help="keep only n with a*n + alpha integral")
    p.add_argument("--routes", default="exact", help="comma list of exact,quad,asym,bound")
    p.add_argument("--out", choices=["csv", "json"], default="csv")
    p.add_argument("--output", help="file to write (default stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="regime and boundaries for (a, lambda)")
    _add_params(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("phase-diagram", help="regime table over lambda x a grids")
    p.add_argument("--lambda-list", required=True)
    p.add_argument("--a-list", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("fit", help="fit a decay exponent to a sweep file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--method", default="all", choices=sorted(FIT_ALIASES))
    p.add_argument("--route", default="exact")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify-bounds", help="check bound certificates against the explicit sum")
    _add_params(p)
    p.add_argument("--precision-bits", type=int, default=256)
    p.add_argument("--n-max", type=int, default=100)
    p.set_defaults(func=cmd_verify_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())

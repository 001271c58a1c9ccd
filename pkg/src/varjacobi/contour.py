"""S_n from its two-integral representation, by numerical quadrature.

For any radius x in (lam, 1/lam):

    S_n = (1/pi) Re int_0^pi F(x e^{i phi}) dphi  -  sin(pi gamma)/pi * int_0^x L(t) dt

    F(z) = z^(alpha+1) (1 - lam z)^beta / (z - lam) * (z^(a+1)(1 - lam z)/(z - lam))^n
    L(t) = (1 + lam t)^beta t^alpha / (t + lam) * (t^(a+1)(1 + lam t)/(t + lam))^n

Both integrands are handled through their logarithms with the maximum
subtracted, so g(t_-)^n never overflows; the parts are returned as mpf.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2
import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError
from .numeric import to_mpf
from .params import EvalPoint, ParamSet, as_fraction, laplace_case, laplace_data, sin_pi_gamma
from .quadrature import integrate

_GRID = 513


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature settings.

    ``precision_bits`` None starts in float64 (or with extra bits when the
    Fourier integrand on the chosen radius is much larger than on the unit
    circle) and escalates until max(abs_tol, rel_tol*|S_n|) is met.  A value
    fixes the starting precision of both integrals.
    """

    x_contour: float = 1.0
    panels_per_oscillation: int = 8
    abs_tol: float = 1e-14
    rel_tol: float = 1e-11
    max_subdivisions: int = 20000
    nodes_per_panel: int = 10
    precision_bits: Optional[int] = None

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.panels_per_oscillation < 1 or self.max_subdivisions < 1:
            raise DomainError("panel counts must be positive")

    def check_radius(self, params: ParamSet):
        _check_radius(params, self.x_contour)


@dataclass(frozen=True)
class IntegralParts:
    """fourier_part = (1/pi) Re int_0^pi F dphi; laplace_part = int_0^x L dt (raw)."""

    fourier_part: mpmath.mpf
    laplace_part: mpmath.mpf
    sin_factor: float
    reconstructed: mpmath.mpf
    fourier_error: float = 0.0
    laplace_error: float = 0.0
    precision_bits: int = 53
    panels: int = 0

    @property
    def error(self) -> float:
        """Absolute error estimate of ``reconstructed``."""
        return self.fourier_error + abs(self.sin_factor) / math.pi * self.laplace_error


def _check_radius(params: ParamSet, x: float):
    lam = float(params.lam)
    if not lam < x < 1 / lam:
        raise DomainError(f"contour radius {x} outside ({lam}, {1 / lam})")


def _fourier_log(point: EvalPoint, x: float, phi):
    """(log|F|, arg F) on z = x e^{i phi}, vectorised over phi (float64)."""
    p = point.params
    lam = float(p.lam)
    n = point.n
    zpow = float(point.gamma + n + 1)
    phi = np.asarray(phi, dtype=float)
    z = x * np.exp(1j * phi)
    w1 = 1 - lam * z
    w2 = z - lam
    beta = float(p.beta)
    logmod = zpow * math.log(x) + (beta + n) * np.log(np.abs(w1)) - (n + 1) * np.log(np.abs(w2))
    arg = zpow * phi + (beta + n) * np.angle(w1) - (n + 1) * np.angle(w2)
    return logmod, arg


def fourier_integrand(point: EvalPoint, x: float, phi):
    """F(x e^{i phi}) with the continuous branch x^y e^{i y phi} for powers of z
    and principal branches for every other non-integer power."""
    _check_radius(point.params, x)
    logmod, arg = _fourier_log(point, x, phi)
    out = np.exp(logmod + 1j * arg)
    return complex(out) if np.ndim(out) == 0 else out


def laplace_integrand(point: EvalPoint, t):
    """L(t) for t in (0, x]; at t = 0 returns the limiting value."""
    p = point.params
    lam, beta = float(p.lam), float(p.beta)
    n = point.n
    tpow = float(point.gamma + n)
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        logv = tpow * np.log(t) + (beta + n) * np.log1p(lam * t) - (n + 1) * np.log(t + lam)
    out = np.exp(logv)
    if np.any(t == 0):
        at0 = 0.0 if tpow > 0 else (1 / lam if tpow == 0 else math.inf)
        out = np.where(t == 0, at0, out)
    return float(out) if out.ndim == 0 else out


def _phase_variation(point: EvalPoint, x: float) -> float:
    grid = np.linspace(0, math.pi, _GRID)
    _, arg = _fourier_log(point, x, grid)
    return float(np.sum(np.abs(np.diff(arg))))


def _fourier_peak(point: EvalPoint, x: float) -> float:
    grid = np.linspace(0, math.pi, _GRID)
    logmod, _ = _fourier_log(point, x, grid)
    return float(np.max(logmod))


def initial_fourier_precision(point: EvalPoint, cfg: QuadratureConfig) -> Optional[int]:
    """Starting precision for the Fourier integral, None meaning float64.

    Off the unit circle the integrand can exceed the integral by the ratio of
    its peak modulus at radius x to that at radius 1; those bits are added.
    """
    if cfg.precision_bits is not None:
        return None if cfg.precision_bits <= 53 else cfg.precision_bits
    excess = _fourier_peak(point, cfg.x_contour) - _fourier_peak(point, 1.0)
    lost_bits = excess / math.log(2)
    if lost_bits <= 8:
        return None
    return 53 + int(math.ceil(lost_bits)) + 16


@dataclass(frozen=True)
class _Part:
    value: mpmath.mpf
    error: mpmath.mpf
    bits: int
    panels: int


def _rescale(res, shift: float, bits: int, divisor=1):
    with mpmath.workprec(max(bits, 64)):
        scale = mpmath.exp(shift) / divisor
        return to_mpf(res.value) * scale, to_mpf(res.error) * scale


def fourier_part(point: EvalPoint, cfg: QuadratureConfig = QuadratureConfig(),
                 prec: Optional[int] = None, abs_tol: Optional[float] = None,
                 rel_tol: Optional[float] = None) -> _Part:
    """(1/pi) Re int_0^pi F(x e^{i phi}) dphi at radius ``cfg.x_contour``."""
    x = cfg.x_contour
    _check_radius(point.params, x)
    shift = _fourier_peak(point, x)
    variation = _phase_variation(point, x)
    panels = max(64, cfg.panels_per_oscillation * math.ceil(variation / (2 * math.pi)))
    # phases reach (gamma + 2n + 1) * pi; their rounding error dominates evaluation noise
    noise = max(1.0, abs(float(point.gamma)) + 2 * point.n + 1 + abs(float(point.params.beta)))
    if prec is None:

        def f(phi):
            logmod, arg = _fourier_log(point, x, phi)
            return np.exp(logmod - shift) * np.cos(arg)

        hi = math.pi
    else:
        f = _fourier_mp(point, x, shift)
        with mpmath.workprec(prec):
            hi = +mpmath.pi
    tol = cfg.abs_tol if abs_tol is None else abs_tol
    res = integrate(
        f, 0.0, hi,
        initial_panels=panels,
        abs_tol=_scaled_tol(tol * math.pi, shift),
        rel_tol=cfg.rel_tol if rel_tol is None else rel_tol,
        max_subdivisions=cfg.max_subdivisions,
        nodes=cfg.nodes_per_panel,
        prec=prec,
        noise=noise,
    )
    value, error = _rescale(res, shift, prec or 53, mpmath.pi)
    return _Part(value, error, prec or 53, res.panels)


def _scaled_tol(tol: float, shift: float) -> float:
    return max(tol * math.exp(max(-shift, -700.0)), 1e-300)


def _mpfr(q):
    """Fraction, int or float as an mpfr at the current gmpy2 precision."""
    if isinstance(q, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator))
    return gmpy2.mpfr(q)


def _fourier_mp(point: EvalPoint, x: float, shift: float):
    """Fourier integrand in gmpy2 arithmetic; runs inside the quadrature's precision context."""
    p = point.params
    n = point.n
    nb = as_fraction(p.beta) + n
    zpow_q = point.gamma + n + 1

    def f(phis):
        lam, beta_n, zpow, xm = _mpfr(as_fraction(p.lam)), _mpfr(nb), _mpfr(zpow_q), _mpfr(x)
        base = zpow * gmpy2.log(xm) - shift
        lx = lam * xm
        out = []
        for phi in phis:
            s, c = gmpy2.sin_cos(phi)
            re1, im1 = 1 - lx * c, -lx * s
            re2, im2 = xm * c - lam, xm * s
            logmod = base + beta_n / 2 * gmpy2.log(re1 * re1 + im1 * im1) - (n + 1) / 2 * gmpy2.log(re2 * re2 + im2 * im2)
            arg = zpow * phi + beta_n * gmpy2.atan2(im1, re1) - (n + 1) * gmpy2.atan2(im2, re2)
            out.append(gmpy2.exp(logmod) * gmpy2.cos(arg))
        return out

    return f


def laplace_part(point: EvalPoint, cfg: QuadratureConfig = QuadratureConfig(),
                 prec: Optional[int] = None, abs_tol: Optional[float] = None,
                 rel_tol: Optional[float] = None) -> _Part:
    """int_0^x L(t) dt, integrated in u with t = x u^m.

    The substitution makes the integrand vanish like u^(m(p+1)-1) with p the
    endpoint exponent gamma + n > -1, removing the t = 0 singularity.
    """
    p = point.params
    x = cfg.x_contour
    _check_radius(p, x)
    lam, beta = float(p.lam), float(p.beta)
    n = point.n
    tpow = float(point.gamma + n)
    m = max(1, math.ceil(3.0 / (tpow + 1)))

    def logf(u):
        with np.errstate(divide="ignore"):
            t = x * u**m
            lt = math.log(x) + m * np.log(u)
            return (
                tpow * lt
                + (beta + n) * np.log1p(lam * t)
                - (n + 1) * np.log(t + lam)
                + math.log(m * x)
                + (m - 1) * np.log(u)
            )

    grid = np.linspace(0, 1, _GRID)[1:]
    candidates = list(logf(grid))
    if laplace_case(p) == 3:
        t_minus = laplace_data(p).t_minus
        if 0 < t_minus < x:
            candidates.append(float(logf(np.array([(t_minus / x) ** (1 / m)]))[0]))
    shift = max(candidates)

    if prec is None:

        def f(u):
            return np.exp(logf(u) - shift)

    else:
        f = _laplace_mp(point, x, m, shift)
    tol = cfg.abs_tol if abs_tol is None else abs_tol
    # exponent terms of size ~(gamma + 2n + |beta|) cancel against the shift
    noise = 1.0 + abs(tpow) + abs(beta) + 2 * n + abs(shift)
    res = integrate(
        f, 0.0, 1.0,
        initial_panels=64,
        noise=noise,
        abs_tol=_scaled_tol(tol, shift),
        rel_tol=cfg.rel_tol if rel_tol is None else rel_tol,
        max_subdivisions=cfg.max_subdivisions,
        nodes=cfg.nodes_per_panel,
        prec=prec,
    )
    value, error = _rescale(res, shift, prec or 53)
    return _Part(value, error, prec or 53, res.panels)


def _laplace_mp(point: EvalPoint, x: float, m: int, shift: float):
    p = point.params
    n = point.n
    tpow_q = point.gamma + n
    nb = as_fraction(p.beta) + n

    def f(us):
        lam, beta_n, tpow, xm = _mpfr(as_fraction(p.lam)), _mpfr(nb), _mpfr(tpow_q), _mpfr(x)
        const = gmpy2.log(m * xm) - shift
        out = []
        for u in us:
            t = xm * u**m
            logv = (tpow * gmpy2.log(t) + beta_n * gmpy2.log1p(lam * t) - (n + 1) * gmpy2.log(t + lam)
                    + const + (m - 1) * gmpy2.log(u))
            out.append(gmpy2.exp(logv))
        return out

    return f


def _sin_pi_gamma_mp(point: EvalPoint):
    """sin(pi*gamma) at the working precision; the parts may cancel far below float64."""
    g = point.gamma
    m = round(g)
    value = mpmath.sinpi(to_mpf(g - m))
    return -value if m % 2 else value


MAX_ATTEMPTS = 8
MAX_BITS = 4096


def scaled_via_integrals(point: EvalPoint, cfg: QuadratureConfig = QuadratureConfig()) -> IntegralParts:
    """Both integrals and the reconstructed S_n.

    The result is accepted once its error estimate is below
    max(abs_tol, rel_tol*|S_n|).  When the two parts (or the oscillating
    Fourier integrand) cancel beyond float64 reach, the affected integral is
    recomputed with more bits.
    """
    cfg.check_radius(point.params)
    s = sin_pi_gamma(point)
    prec_f = initial_fourier_precision(point, cfg)
    prec_l = None if cfg.precision_bits is None or cfg.precision_bits <= 53 else cfg.precision_bits
    tol_f = tol_l = cfg.abs_tol
    part_rel = None
    lap = None
    for _ in range(MAX_ATTEMPTS):
        four = fourier_part(point, cfg, prec_f, tol_f, part_rel)
        if lap is None or s != 0:
            lap = laplace_part(point, cfg, prec_l, tol_l, part_rel)
        bits = max(four.bits, lap.bits, 64)
        with mpmath.workprec(bits):
            s_mp = _sin_pi_gamma_mp(point)
            weight = abs(s_mp) / mpmath.pi
            recon = four.value - s_mp / mpmath.pi * lap.value
            err_f, err_l = four.error, weight * lap.error
            error = err_f + err_l
            target = max(mpmath.mpf(cfg.abs_tol), cfg.rel_tol * abs(recon))
        if error <= target:
            return IntegralParts(
                fourier_part=four.value,
                laplace_part=lap.value,
                sin_factor=s,
                reconstructed=recon,
                fourier_error=float(err_f),
                laplace_error=float(lap.error),
                precision_bits=bits,
                panels=four.panels,
            )
        deficit = int(math.ceil(float(mpmath.log(error / target, 2)))) + 8
        step = max(32, deficit)
        # later passes aim at an absolute target derived from |S_n|
        part_rel = 0.0
        tol_f = float(target / 4)
        tol_l = float(target / 4 / weight) if weight else cfg.abs_tol
        if err_f > target / 4:
            prec_f = (prec_f or 53) + step
        if err_l > target / 4:
            prec_l = (prec_l or 53) + step
        if max(prec_f or 0, prec_l or 0) > MAX_BITS:
            break
    raise ConvergenceError(
        f"contour quadrature stalled at error {float(error):.3g} vs target {float(target):.3g}",
        estimate=recon,
        error=float(error),
    )

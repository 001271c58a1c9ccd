"""Leading-order asymptotics of S_n in each regime, and decaying bounds.

Everything exponential is carried as (sign, natural log of magnitude) so
that g(t_-)^n never has to exist as a float.  ``AsymptoticEstimate.value``
converts on request and saturates with a warning.

Regime summary (b_lo = -2 lam/(1+lam), b_up = 2 lam/(1-lam)):

* b_lo < a < b_up      ~ n^(-1/2) * cos(...)          (stationary phase at z_+)
* a = b_up             ~ n^(-1/3)                      (degenerate stationary point at z = 1)
* a = b_lo             ~ n^(-1/3) * trig(gamma)        (both integrals degenerate at 1)
* a > b_up             decays, bound only
* a < b_lo             decays if gamma is an integer (bound), grows otherwise
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import (
    CertificateRefused,
    ConsistencyError,
    DomainError,
    IntegerGammaError,
    RegimeError,
)
from .errors import BreakdownWarning
from .numeric import SignedLog
from .params import (
    SADDLE_TOL,
    EvalPoint,
    ParamSet,
    Regime,
    RegimeTag,
    classify,
    h_laplace,
    laplace_data,
    near_boundary,
    radius_critical_points,
    sin_pi_gamma,
    stationary_data,
)
from .quadrature import integrate

CONSISTENCY_TOL = 1e-12

ASYMPTOTE = "asymptote"
UPPER_BOUND = "upper_bound"


def _cos_pi(q: Fraction) -> float:
    """cos(pi*q) after exact reduction of q modulo 2."""
    return math.cos(math.pi * float(q % 2))


def _sin_pi(q: Fraction) -> float:
    return math.sin(math.pi * float(q % 2))


# --- bound certificates -------------------------------------------------------


def psi_beta(u: float, beta: float) -> float:
    """Bound for |1 - lam z|^(beta-1) on |z| = x with u = lam*x in (0, 1)."""
    if not 0 < u < 1:
        raise DomainError(f"u must lie in (0, 1), got {u}")
    return (1 + u) ** (beta - 1) if beta >= 1 else (1 - u) ** (beta - 1)


@dataclass(frozen=True)
class BoundCertificate:
    """|S_n| <= fourier_prefactor * fourier_base^(n+1) [+ laplace_prefactor * laplace_base^n]."""

    x_used: float
    fourier_base: float
    fourier_prefactor: float
    laplace_base: Optional[float] = None
    laplace_prefactor: Optional[float] = None
    applies_to_integer_gamma_only: bool = False

    def log_bound(self, n: int) -> float:
        """Natural log of bound(n)."""
        out = math.log(self.fourier_prefactor) + (n + 1) * math.log(self.fourier_base)
        if self.laplace_base is not None:
            lap = math.log(self.laplace_prefactor) + n * math.log(self.laplace_base)
            hi, lo = max(out, lap), min(out, lap)
            out = hi + math.log1p(math.exp(lo - hi))
        return out

    def bound(self, n: int):
        """bound(n) as an mpf (no underflow for large n)."""
        total = mpmath.mpf(self.fourier_prefactor) * mpmath.mpf(self.fourier_base) ** (n + 1)
        if self.laplace_base is not None:
            total += mpmath.mpf(self.laplace_prefactor) * mpmath.mpf(self.laplace_base) ** n
        return total

    def dominates(self, n: int, value) -> bool:
        return abs(value) <= self.bound(n)


def fourier_bound_base(params: ParamSet, x: float) -> float:
    """Largest modulus of z^(a+1)(1 - lam z)/(z - lam) on |z| = x.

    Attained at z = x for x <= 1 and at z = -x for x > 1.
    """
    a, lam = float(params.a), float(params.lam)
    ratio = max((1 - lam * x) / (x - lam), (1 + lam * x) / (x + lam))
    return x ** (a + 1) * ratio


def laplace_mass(params: ParamSet) -> float:
    """int_0^1 (1 + lam t)^beta t^alpha / (t + lam) dt."""
    alpha, beta, lam = float(params.alpha), float(params.beta), float(params.lam)
    # t = u^m makes the integrand bounded at u = 0
    m = max(1, math.ceil(2.0 / (alpha + 1)))

    def f(u):
        t = u**m
        return m * u ** (m - 1) * (1 + lam * t) ** beta * t**alpha / (t + lam)

    return float(integrate(f, 0.0, 1.0, rel_tol=1e-13, abs_tol=1e-300).value)


def bound_certificate(point: EvalPoint, saddle_tol: float = SADDLE_TOL) -> BoundCertificate:
    p = point.params
    regime = classify(p, saddle_tol)
    lam = float(p.lam)
    if regime.tag == RegimeTag.EXPONENTIAL_UPPER:
        x = radius_critical_points(p, saddle_tol)[0]
        laplace = not point.integer_flag
        only_integer = False
    elif regime.tag == RegimeTag.EXPONENTIAL_LOWER:
        if not point.integer_flag:
            raise CertificateRefused(
                f"gamma = {float(point.gamma)} is not an integer: S_n grows here, "
                "use estimate_exponential_lower"
            )
        t_plus = laplace_data(p, saddle_tol).t_plus
        x = 0.5 * (1 + min(1 / lam, t_plus))
        laplace = False
        only_integer = True
    else:
        raise RegimeError(f"no exponential bound in regime {regime.tag}")

    base = fourier_bound_base(p, x)
    if not 0 < base < 1:
        raise CertificateRefused(f"bound base {base} at x = {x} is not below 1")
    pref = x ** (float(p.alpha) - float(p.a)) * psi_beta(lam * x, float(p.beta))
    lap_base = lap_pref = None
    if laplace:
        lap_base = x ** (float(p.a) + 1) * (1 + lam * x) / (x + lam)
        lap_pref = laplace_mass(p)
    return BoundCertificate(
        x_used=x,
        fourier_base=base,
        fourier_prefactor=pref,
        laplace_base=lap_base,
        laplace_prefactor=lap_pref,
        applies_to_integer_gamma_only=only_integer,
    )


# --- estimates ----------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Leading-order prediction of S_n, stored as sign and natural log of magnitude.

    For ``kind == "upper_bound"`` the magnitude is a bound on |S_n| and the
    sign carries no information.
    """

    sign: int
    log_abs: float
    decay_exponent: float
    error_order_exponent: float
    regime: Regime
    correction_term: Optional[float] = None
    envelope: Optional[float] = None
    phase: Optional[float] = None
    kind: str = ASYMPTOTE
    certificate: Optional[BoundCertificate] = None

    @property
    def signed_log(self) -> SignedLog:
        return SignedLog.from_log(self.sign, self.log_abs)

    @property
    def value(self) -> float:
        return self.signed_log.to_float()

    @property
    def trig_factor(self) -> Optional[float]:
        if self.phase is None:
            return None
        return math.cos(self.phase)

    @classmethod
    def from_value(cls, value: float, **fields) -> "AsymptoticEstimate":
        if value == 0:
            return cls(sign=0, log_abs=-math.inf, **fields)
        return cls(sign=1 if value > 0 else -1, log_abs=math.log(abs(value)), **fields)


def _require(point: EvalPoint, tag: RegimeTag, saddle_tol: float) -> Regime:
    regime = classify(point.params, saddle_tol)
    if regime.tag != tag:
        raise RegimeError(f"point is in regime {regime.tag}, not {tag}")
    return regime


def oscillatory_terms(params: ParamSet, n: int) -> tuple[float, float]:
    """(envelope, phase) of the leading n^(-1/2) term; S_n ~ envelope * cos(phase)."""
    a, alpha, beta, lam = (float(v) for v in (params.a, params.alpha, params.beta, params.lam))
    st = stationary_data(params)
    q = 1 - lam * lam
    disc = q * ((a + 2) * lam + a) * ((a + 2) * lam - a)
    envelope = math.sqrt(2 / (n * math.pi)) * (q * (a + 1)) ** (-beta / 2) * q**beta / disc**0.25
    phase = (n + 1) * st.h_at_phi_plus + (alpha - a) * st.phi_plus + (beta - 1) * st.psi + math.pi / 4
    return envelope, phase


def estimate_oscillatory(point: EvalPoint, saddle_tol: float = SADDLE_TOL) -> AsymptoticEstimate:
    """Stationary-phase leading term for lower < a < upper.

    ``correction_term`` is the n^(-1) endpoint term of the Fourier integral.
    In S_n it is cancelled exactly by the leading Laplace term, so it is not
    part of ``value``.
    """
    regime = _require(point, RegimeTag.OSCILLATORY, saddle_tol)
    p = point.params
    if point.n < 1:
        raise DomainError("the oscillatory estimate needs n >= 1")
    if near_boundary(p):
        warnings.warn(
            f"a = {float(p.a)} is close to a regime boundary; the amplitude factor degrades",
            BreakdownWarning,
            stacklevel=2,
        )
    a, beta, lam = float(p.a), float(p.beta), float(p.lam)
    envelope, phase = oscillatory_terms(p, point.n)
    correction = sin_pi_gamma(point) / (point.n * math.pi) * (1 + lam) ** beta / (a * (1 + lam) + 2 * lam)
    return AsymptoticEstimate.from_value(
        envelope * math.cos(phase),
        decay_exponent=-0.5,
        error_order_exponent=-1.0,
        regime=regime,
        correction_term=correction,
        envelope=envelope,
        phase=phase,
    )


def stationary_phase_value(point: EvalPoint) -> float:
    """Generic stationary-phase formula (1/pi) Re{g e^{i n h} sqrt(2 pi/(n h'')) e^{i pi/4}} at phi_+.

    Built from g and h'' directly, without the closed-form simplification;
    used to cross-check :func:`oscillatory_terms`.
    """
    p = point.params
    alpha, beta, lam = float(p.alpha), float(p.beta), float(p.lam)
    st = stationary_data(p)
    z = st.z_plus
    g = cmath.exp(1j * (alpha + 1) * st.phi_plus) * (1 - lam * z) ** beta / (z - lam)
    n = point.n
    lead = g * cmath.exp(1j * (n * st.h_at_phi_plus + math.pi / 4)) * math.sqrt(2 * math.pi / (n * st.h2))
    return lead.real / math.pi


def saddle_upper_constant() -> float:
    return 1 / (3 ** (2 / 3) * math.gamma(2 / 3))


def estimate_saddle_upper(point: EvalPoint, saddle_tol: float = SADDLE_TOL) -> AsymptoticEstimate:
    regime = _require(point, RegimeTag.SADDLE_UPPER, saddle_tol)
    p = point.params
    if point.n < 1:
        raise DomainError("the saddle estimate needs n >= 1")
    a, beta, lam = float(p.a), float(p.beta), float(p.lam)
    n = point.n
    value = (1 - lam) ** beta * saddle_upper_constant() / (n * lam * (1 + lam)) ** (1 / 3)
    # Laplace part, O(1/n) here
    correction = -sin_pi_gamma(point) / math.pi * (1 + lam) ** beta / (n * (lam * (a + 2) + a))
    return AsymptoticEstimate.from_value(
        value,
        decay_exponent=-1 / 3,
        error_order_exponent=-1 / 3,
        regime=regime,
        correction_term=correction,
    )


def saddle_lower_constant(lam: float, beta: float) -> float:
    """Gamma(1/3)/(3^(2/3) pi) * (1+lam)^beta / (lam(1-lam))^(1/3)."""
    return math.gamma(1 / 3) / (3 ** (2 / 3) * math.pi) * (1 + lam) ** beta / (lam * (1 - lam)) ** (1 / 3)


def saddle_lower_trig(gamma: Fraction) -> tuple[float, float]:
    """The bracket in both forms: cos((g+1/6)pi) - sin(g pi) and (sqrt3/2)(cos(g pi) - sqrt3 sin(g pi))."""
    assembled = _cos_pi(gamma + Fraction(1, 6)) - _sin_pi(gamma)
    r3 = math.sqrt(3)
    closed = r3 / 2 * (_cos_pi(gamma) - r3 * _sin_pi(gamma))
    return assembled, closed


def estimate_saddle_lower(point: EvalPoint, saddle_tol: float = SADDLE_TOL) -> AsymptoticEstimate:
    """Fourier term C cos((gamma+1/6)pi) minus Laplace term C sin(gamma pi), times n^(-1/3)."""
    regime = _require(point, RegimeTag.SADDLE_LOWER, saddle_tol)
    p = point.params
    if point.n < 1:
        raise DomainError("the saddle estimate needs n >= 1")
    assembled, closed = saddle_lower_trig(point.gamma)
    if abs(assembled - closed) > CONSISTENCY_TOL:
        raise ConsistencyError(
            f"saddle-lower forms disagree: {assembled!r} vs {closed!r} at gamma = {point.gamma}"
        )
    scale = saddle_lower_constant(float(p.lam), float(p.beta)) * point.n ** (-1 / 3)
    # the bracket is sqrt(3) cos((gamma + 1/3) pi); envelope and phase use that unit-cosine form
    return AsymptoticEstimate.from_value(
        scale * assembled,
        decay_exponent=-1 / 3,
        error_order_exponent=-1 / 3,
        regime=regime,
        envelope=math.sqrt(3) * scale,
        phase=math.pi * float((point.gamma + Fraction(1, 3)) % 2),
    )


def exponential_lower_log_terms(params: ParamSet, n: int) -> tuple[float, float]:
    """(n * h(t_-), log of the n-independent and sqrt(1/n) factors) of the Laplace peak."""
    alpha, beta, lam = float(params.alpha), float(params.beta), float(params.lam)
    ld = laplace_data(params)
    t = ld.t_minus
    denom = n * lam * ((1 + lam * t) ** 2 - (lam + t) ** 2)
    log_pref = (beta + 1) * math.log1p(lam * t) + alpha * math.log(t) + 0.5 * math.log(2 * math.pi * t / denom)
    return n * h_laplace(params, t), log_pref


def estimate_exponential_lower(point: EvalPoint, saddle_tol: float = SADDLE_TOL) -> AsymptoticEstimate:
    """-(sin(pi gamma)/pi) times the Laplace peak contribution at t_-; grows like g(t_-)^n."""
    regime = _require(point, RegimeTag.EXPONENTIAL_LOWER, saddle_tol)
    if point.integer_flag:
        raise IntegerGammaError(
            f"gamma = {point.gamma} is an integer: S_n decays, use bound_certificate"
        )
    if point.n < 1:
        raise DomainError("the Laplace estimate needs n >= 1")
    p = point.params
    s = sin_pi_gamma(point)
    growth, log_pref = exponential_lower_log_terms(p, point.n)
    t = laplace_data(p).t_minus
    return AsymptoticEstimate(
        sign=-1 if s > 0 else 1,
        log_abs=math.log(abs(s) / math.pi) + growth + log_pref,
        decay_exponent=h_laplace(p, t),
        error_order_exponent=-1.0,
        regime=regime,
    )


def bound_estimate(point: EvalPoint, saddle_tol: float = SADDLE_TOL) -> AsymptoticEstimate:
    """The certificate bound presented as an estimate of kind ``upper_bound``."""
    cert = bound_certificate(point, saddle_tol)
    rate = math.log(cert.fourier_base)
    if cert.laplace_base is not None:
        rate = max(rate, math.log(cert.laplace_base))
    return AsymptoticEstimate(
        sign=1,
        log_abs=cert.log_bound(point.n),
        decay_exponent=rate,
        error_order_exponent=math.nan,
        regime=classify(point.params, saddle_tol),
        kind=UPPER_BOUND,
        certificate=cert,
    )


def estimate(point: EvalPoint, saddle_tol: float = SADDLE_TOL) -> AsymptoticEstimate:
    tag = classify(point.params, saddle_tol).tag
    if tag == RegimeTag.OSCILLATORY:
        return estimate_oscillatory(point, saddle_tol)
    if tag == RegimeTag.SADDLE_UPPER:
        return estimate_saddle_upper(point, saddle_tol)
    if tag == RegimeTag.SADDLE_LOWER:
        return estimate_saddle_lower(point, saddle_tol)
    if tag == RegimeTag.EXPONENTIAL_LOWER and not point.integer_flag:
        return estimate_exponential_lower(point, saddle_tol)
    return bound_estimate(point, saddle_tol)


# --- fixed-parameter Jacobi asymptotics ---------------------------------------


def darboux_terms(alpha: float, beta: float, theta: float, n: int) -> tuple[float, float]:
    """(envelope, phase) with P_n^(alpha,beta)(cos theta) ~ envelope * cos(phase).

    envelope = n^(-1/2) k(theta), k = pi^(-1/2) sin(theta/2)^(-alpha-1/2) cos(theta/2)^(-beta-1/2),
    phase = (n + (alpha+beta+1)/2) theta - (alpha + 1/2) pi/2.
    """
    if not 0 < theta < math.pi:
        raise DomainError("theta must lie in (0, pi)")
    if n < 1:
        raise DomainError("n must be positive")
    k = math.sin(theta / 2) ** (-alpha - 0.5) * math.cos(theta / 2) ** (-beta - 0.5) / math.sqrt(math.pi)
    N = n + (alpha + beta + 1) / 2
    return k / math.sqrt(n), N * theta - (alpha + 0.5) * math.pi / 2


def estimate_darboux(alpha: float, beta: float, theta: float, n: int) -> float:
    envelope, phase = darboux_terms(alpha, beta, theta, n)
    return envelope * math.cos(phase)

"""Parameter model, regime classification and closed-form critical points.

The family studied is S_n = lam^(an+alpha) (1-lam^2)^beta P_n^(an+alpha, beta)(1 - 2 lam^2).
Two phase functions drive everything downstream:

* on the unit circle z = e^{i phi}, ``h_phase`` is the continuous argument of
  z^(a+1) (1 - lam z) / (z - lam);
* on the positive axis, ``h_laplace`` is the log of t^(a+1) (1 + lam t) / (t + lam).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import Optional

import numpy as np

from .errors import DomainError

INTEGER_TOL = 1e-9
SADDLE_TOL = 1e-9
BREAKDOWN_FRACTION = 0.05


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction, float or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


@dataclass(frozen=True)
class ParamSet:
    """The quadruple (a, alpha, beta, lambda).

    ``a`` and ``alpha`` may be given as :class:`~fractions.Fraction` so that
    a*n + alpha is exactly an integer on the intended subsequence of n.
    """

    a: Real
    alpha: Real
    beta: Real
    lam: Real

    def __post_init__(self):
        for name in ("a", "alpha", "beta", "lam"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (Real, np.floating, np.integer)):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(float(value)):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if not self.a > -1:
            raise DomainError(f"a must exceed -1, got {self.a}")
        if not self.alpha > -1:
            raise DomainError(f"alpha must exceed -1, got {self.alpha}")
        if not self.beta > -1:
            raise DomainError(f"beta must exceed -1, got {self.beta}")
        if not 0 < self.lam < 1:
            raise DomainError(f"lambda must lie strictly inside (0, 1), got {self.lam}")

    @property
    def lower(self) -> float:
        lam = float(self.lam)
        return -2 * lam / (1 + lam)

    @property
    def upper(self) -> float:
        lam = float(self.lam)
        return 2 * lam / (1 - lam)

    def replace(self, **changes) -> "ParamSet":
        fields = dict(a=self.a, alpha=self.alpha, beta=self.beta, lam=self.lam)
        fields.update(changes)
        return ParamSet(**fields)


@dataclass(frozen=True)
class EvalPoint:
    """A parameter set together with a degree n."""

    params: ParamSet
    n: int
    integer_tol: float = INTEGER_TOL

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise DomainError(f"n must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def gamma(self) -> Fraction:
        """a*n + alpha, exact in the rational values of a and alpha."""
        return as_fraction(self.params.a) * self.n + as_fraction(self.params.alpha)

    @property
    def gamma_distance(self) -> float:
        """Distance from gamma to the nearest integer."""
        g = self.gamma
        return float(abs(g - round(g)))

    @property
    def integer_flag(self) -> bool:
        return self.gamma_distance < self.integer_tol

    @property
    def near_integer(self) -> bool:
        """Within ten times the integer tolerance but not flagged integer."""
        return not self.integer_flag and self.gamma_distance < 10 * self.integer_tol


def sin_pi_gamma(point: EvalPoint) -> float:
    """sin(pi*gamma) evaluated from the fractional part of gamma."""
    g = point.gamma
    m = round(g)
    frac = float(g - m)
    return math.sin(math.pi * frac) * (-1.0 if m % 2 else 1.0)


class RegimeTag(str, Enum):
    EXPONENTIAL_LOWER = "ExponentialLower"
    SADDLE_LOWER = "SaddleLower"
    OSCILLATORY = "Oscillatory"
    SADDLE_UPPER = "SaddleUpper"
    EXPONENTIAL_UPPER = "ExponentialUpper"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    lower: float
    upper: float

    @property
    def boundaries(self) -> tuple[float, float]:
        return (self.lower, self.upper)


def _near(a: float, boundary: float, tol: float) -> bool:
    return abs(a - boundary) <= tol * abs(boundary)


def classify(params: ParamSet, saddle_tol: float = SADDLE_TOL) -> Regime:
    if not saddle_tol > 0:
        raise DomainError("saddle_tol must be positive")
    a = float(params.a)
    lo, up = params.lower, params.upper
    if _near(a, lo, saddle_tol):
        tag = RegimeTag.SADDLE_LOWER
    elif _near(a, up, saddle_tol):
        tag = RegimeTag.SADDLE_UPPER
    elif a < lo:
        tag = RegimeTag.EXPONENTIAL_LOWER
    elif a > up:
        tag = RegimeTag.EXPONENTIAL_UPPER
    else:
        tag = RegimeTag.OSCILLATORY
    return Regime(tag, lo, up)


def near_boundary(params: ParamSet, fraction: float = BREAKDOWN_FRACTION) -> bool:
    """True when a is within ``fraction`` of the oscillatory interval width of either boundary."""
    a = float(params.a)
    width = params.upper - params.lower
    return min(abs(a - params.lower), abs(a - params.upper)) < fraction * width


def laplace_case(params: ParamSet, saddle_tol: float = SADDLE_TOL) -> int:
    """Which of the three shapes h_laplace takes on (0, 1].

    1: increasing with h <= 0; 2: degenerate maximum at t = 1; 3: interior maximum t_- with h(t_-) > 0.
    """
    a = float(params.a)
    lo = params.lower
    if _near(a, lo, saddle_tol):
        return 2
    return 3 if a < lo else 1


def critical_ratio(params: ParamSet) -> float:
    """(a + a lam^2 + 2 lam^2) / (2 lam (a+1)): Re z_+ on the circle, -(t_+ + t_-)/2 on the axis."""
    a, lam = float(params.a), float(params.lam)
    return (a + a * lam * lam + 2 * lam * lam) / (2 * lam * (a + 1))


# --- phase on the unit circle -------------------------------------------------


def h_phase(params: ParamSet, phi):
    """Continuous phase of z^(a+1)(1 - lam z)/(z - lam) at z = e^{i phi}, phi in [0, pi].

    Summed term by term so that it has no 2*pi jumps; h(0) = 0 and h(pi) = a*pi.
    Accepts scalars or numpy arrays.
    """
    a, lam = float(params.a), float(params.lam)
    phi = np.asarray(phi, dtype=float)
    s, c = np.sin(phi), np.cos(phi)
    out = (a + 1) * phi + np.arctan2(-lam * s, 1 - lam * c) - np.arctan2(s, c - lam)
    return float(out) if out.ndim == 0 else out


def _log_derivatives(a: float, lam: float, z: complex):
    """L = G'/G and its first two z-derivatives for G = z^(a+1)(1 - lam z)/(z - lam)."""
    L0 = (a + 1) / z - lam / (1 - lam * z) - 1 / (z - lam)
    L1 = -(a + 1) / z**2 - lam**2 / (1 - lam * z) ** 2 + 1 / (z - lam) ** 2
    L2 = 2 * (a + 1) / z**3 - 2 * lam**3 / (1 - lam * z) ** 3 - 2 / (z - lam) ** 3
    return L0, L1, L2


def h_phase_derivatives(params: ParamSet, phi: float) -> tuple[float, float, float]:
    """(h', h'', h''') at phi via the chain rule d/dphi = i z d/dz."""
    a, lam = float(params.a), float(params.lam)
    z = cmath.exp(1j * phi)
    L0, L1, L2 = _log_derivatives(a, lam, z)
    d1 = z * L0
    d2 = 1j * z * (L0 + z * L1)
    d3 = -z * (L0 + 3 * z * L1 + z * z * L2)
    return d1.real, d2.real, d3.real


@dataclass(frozen=True)
class StationaryData:
    z_plus: complex
    phi_plus: float
    psi: float
    h_at_phi_plus: float
    h1: float
    h2: float
    h3: float


def stationary_data(params: ParamSet, saddle_tol: float = SADDLE_TOL) -> StationaryData:
    """Stationary point z_+ = e^{i phi_+} of h_phase with phi_+ in [0, pi].

    Requires a in the closed interval [lower, upper] (up to ``saddle_tol``).
    ``psi`` is the principal argument of 1 - lam z_+, which is <= 0.
    """
    a, lam = float(params.a), float(params.lam)
    lo, up = params.lower, params.upper
    if (a < lo and not _near(a, lo, saddle_tol)) or (a > up and not _near(a, up, saddle_tol)):
        raise DomainError(
            f"a={a} outside [{lo}, {up}]: no stationary point on the unit circle"
        )
    y = min(1.0, max(-1.0, critical_ratio(params)))
    phi = math.acos(y)
    z = complex(y, math.sqrt(max(0.0, 1 - y * y)))
    psi = cmath.phase(1 - lam * z)
    d1, d2, d3 = h_phase_derivatives(params, phi)
    return StationaryData(
        z_plus=z,
        phi_plus=phi,
        psi=psi,
        h_at_phi_plus=h_phase(params, phi),
        h1=d1,
        h2=d2,
        h3=d3,
    )


# --- phase on the positive axis -----------------------------------------------


def h_laplace(params: ParamSet, t):
    """log(t^(a+1) (1 + lam t)/(t + lam)) for t in (0, 1/lam); h(1) = 0."""
    a, lam = float(params.a), float(params.lam)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("h_laplace is defined for t > 0 only")
    out = (a + 1) * np.log(t) + np.log1p(lam * t) - np.log(t + lam)
    return float(out) if out.ndim == 0 else out


def h_laplace_prime(params: ParamSet, t):
    """Rational form of h_laplace'(t); also meaningful at negative t away from poles."""
    a, lam = float(params.a), float(params.lam)
    return (a + 1) / t - 1 / (t + lam) + lam / (1 + lam * t)


def h_laplace_second(params: ParamSet, t):
    a, lam = float(params.a), float(params.lam)
    return -(a + 1) / t**2 + 1 / (t + lam) ** 2 - lam**2 / (1 + lam * t) ** 2


@dataclass(frozen=True)
class LaplaceData:
    """Roots of h_laplace' = 0.

    ``g_at_t_minus`` and ``h2_at_t_minus`` are only defined when t_minus > 0,
    i.e. for a at or below the lower boundary.
    """

    t_minus: float
    t_plus: float
    g_at_t_minus: Optional[float]
    h2_at_t_minus: Optional[float]


def _real_roots(params: ParamSet, saddle_tol: float) -> tuple[float, float]:
    a = float(params.a)
    lo, up = params.lower, params.upper
    if lo < a < up and not (_near(a, lo, saddle_tol) or _near(a, up, saddle_tol)):
        raise DomainError(f"a={a} inside ({lo}, {up}): critical points are complex")
    y = critical_ratio(params)
    return y, math.sqrt(max(0.0, y * y - 1))


def laplace_data(params: ParamSet, saddle_tol: float = SADDLE_TOL) -> LaplaceData:
    lam = float(params.lam)
    y, root = _real_roots(params, saddle_tol)
    t_minus, t_plus = -y - root, -y + root
    g = h2 = None
    if t_minus > 0:
        g = math.exp(h_laplace(params, t_minus))
        h2 = (lam / t_minus) * (-1 / (lam + t_minus) ** 2 + 1 / (1 + lam * t_minus) ** 2)
    return LaplaceData(t_minus=t_minus, t_plus=t_plus, g_at_t_minus=g, h2_at_t_minus=h2)


def radius_critical_points(params: ParamSet, saddle_tol: float = SADDLE_TOL) -> tuple[float, float]:
    """Critical points (x_-, x_+) of x -> x^(a+1)(1 - lam x)/(x - lam); equal to (-t_+, -t_-)."""
    y, root = _real_roots(params, saddle_tol)
    return y - root, y + root


def g_fourier(params: ParamSet, x: float) -> float:
    """x^(a+1)(1 - lam x)/(x - lam): the largest modulus of the n-th power factor on |z| = x."""
    a, lam = float(params.a), float(params.lam)
    return x ** (a + 1) * (1 - lam * x) / (x - lam)


def g_laplace(params: ParamSet, t: float) -> float:
    a, lam = float(params.a), float(params.lam)
    return t ** (a + 1) * (1 + lam * t) / (t + lam)

"""Ground-truth values of S_n from the explicit finite sum in extended precision.

    P_n^(A,B)(x) = sum_mu C(n+A, n-mu) C(n+B, mu) ((x-1)/2)^mu ((x+1)/2)^(n-mu)

The three-term recurrence in n is not usable here because A = a*n + alpha
moves with n.  At x = 1 - 2 lam^2 the terms alternate in sign and the sum
loses roughly 0.3 decimal digits per degree, so the working precision is
raised until the measured cancellation is covered.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError, PrecisionWarning
from .numeric import SignedLog, to_mpf
from .params import EvalPoint, as_fraction

DEFINITION_TAG = "lambda^(an+alpha)*(1-lambda^2)^beta * P_n"
_LOG2_10 = math.log2(10)


@dataclass(frozen=True)
class PrecisionConfig:
    """Extended-precision settings for the explicit sum.

    ``significand_bits`` is the number of bits the result should carry after
    cancellation.  With ``adaptive`` off the sum is evaluated at exactly that
    precision and a :class:`PrecisionWarning` flags excessive cancellation.
    """

    significand_bits: int = 256
    summation_mode: str = "direct"
    adaptive: bool = True
    max_bits: int = 1 << 16

    def __post_init__(self):
        if self.significand_bits < 64:
            raise DomainError("significand_bits must be at least 64")
        if self.summation_mode not in ("direct", "compensated"):
            raise DomainError(f"unknown summation mode {self.summation_mode!r}")


@dataclass(frozen=True)
class ScaledValue:
    value: mpmath.mpf
    n: int
    working_bits: int = 0
    cancellation_bits: float = 0.0
    definition_tag: str = DEFINITION_TAG

    @property
    def signed_log(self) -> SignedLog:
        return SignedLog.from_value(self.value)

    def to_float(self) -> float:
        return self.signed_log.to_float()


def binom_real(y, k: int):
    """Generalised binomial coefficient C(y, k) = prod_{j=1..k} (y - k + j)/j.

    Valid for every real y; exact for int/Fraction input.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    out = 1
    for j in range(1, k + 1):
        out = out * (y - k + j) / j
    return out


def _binomial_row(y, n: int) -> list:
    """[C(y, 0), ..., C(y, n)] by the forward ratio C(y, k+1) = C(y, k)(y - k)/(k + 1)."""
    row = [y * 0 + 1]
    for k in range(n):
        row.append(row[-1] * (y - k) / (k + 1))
    return row


def jacobi_terms(alpha_eff, beta, u, v, n: int) -> list:
    """Terms C(n+alpha_eff, n-mu) C(n+beta, mu) u^mu v^(n-mu) for mu = 0..n.

    u = (x-1)/2 and v = (x+1)/2; generic over numeric type (Fraction, mpf).
    """
    c1 = _binomial_row(alpha_eff + n, n)
    terms = []
    c2 = c1[0] * 0 + 1
    w = v**n
    step = u / v
    for mu in range(n + 1):
        terms.append(c1[n - mu] * c2 * w)
        c2 = c2 * (beta + n - mu) / (mu + 1)
        w = w * step
    return terms


def _accumulate(terms, mode: str):
    if mode == "direct":
        total = mpmath.mpf(0)
        for t in terms:
            total += t
        return total
    # Neumaier compensated summation
    total = mpmath.mpf(0)
    comp = mpmath.mpf(0)
    for t in terms:
        s = total + t
        if abs(total) >= abs(t):
            comp += (total - s) + t
        else:
            comp += (t - s) + total
        total = s
    return total + comp


def _lost_bits(total, biggest) -> float:
    if biggest == 0:
        return 0.0
    if total == 0:
        return math.inf
    return max(0.0, float(mpmath.log(abs(biggest) / abs(total), 2)))


def _with_escalation(compute, prec: PrecisionConfig):
    """Run ``compute()`` (returning (sum, largest |term|)) at increasing precision.

    Returns (sum, working bits, cancellation bits).
    """
    target = prec.significand_bits
    work = target + 32 if prec.adaptive else target
    while True:
        with mpmath.workprec(work):
            total, biggest = compute()
            total = +total
        lost = _lost_bits(total, biggest)
        if work - lost >= target + 16:
            return total, work, lost
        if not prec.adaptive or work >= prec.max_bits:
            budget_digits = work / _LOG2_10 - 12
            if lost / _LOG2_10 > budget_digits:
                warnings.warn(
                    f"explicit sum lost {lost / _LOG2_10:.1f} digits of "
                    f"{work / _LOG2_10:.1f} available",
                    PrecisionWarning,
                    stacklevel=3,
                )
            return total, work, lost
        if lost > work - 40:
            work = 2 * work
        else:
            work = target + int(math.ceil(lost)) + 64
        work = min(work, prec.max_bits)


def jacobi_general(alpha_eff, beta, x, n: int, prec: PrecisionConfig = PrecisionConfig()):
    """P_n^(alpha_eff, beta)(x) by the explicit sum; returns an mpf.

    ``x`` may be a float, Fraction or mpf in (-1, 1).
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if not -1 < x < 1:
        raise DomainError("x must lie in (-1, 1)")

    def compute():
        A = to_mpf(alpha_eff) if not isinstance(alpha_eff, mpmath.mpf) else alpha_eff
        B = to_mpf(beta) if not isinstance(beta, mpmath.mpf) else beta
        X = to_mpf(x) if not isinstance(x, mpmath.mpf) else x
        terms = jacobi_terms(A, B, (X - 1) / 2, (X + 1) / 2, n)
        return _accumulate(terms, prec.summation_mode), max(abs(t) for t in terms)

    total, _, _ = _with_escalation(compute, prec)
    return total


def scaled_exact(point: EvalPoint, prec: PrecisionConfig = PrecisionConfig()) -> ScaledValue:
    """S_n = lam^gamma (1 - lam^2)^beta P_n^(gamma, beta)(1 - 2 lam^2).

    The argument enters only through (x-1)/2 = -lam^2 and (x+1)/2 = 1 - lam^2,
    both formed exactly from lam.  mpf exponents are unbounded, so the
    prefactor is applied once after summation.
    """
    p = point.params
    n = point.n
    lam_q = as_fraction(p.lam)
    beta_q = as_fraction(p.beta)
    gamma_q = point.gamma

    def compute():
        lam = to_mpf(lam_q)
        lam2 = lam * lam
        terms = jacobi_terms(to_mpf(gamma_q), to_mpf(beta_q), -lam2, 1 - lam2, n)
        pref = lam ** to_mpf(gamma_q) * (1 - lam2) ** to_mpf(beta_q)
        total = _accumulate(terms, prec.summation_mode)
        return pref * total, pref * max(abs(t) for t in terms)

    total, work, lost = _with_escalation(compute, prec)
    return ScaledValue(value=total, n=n, working_bits=work, cancellation_bits=lost)


def scaled_exact_rational(point: EvalPoint) -> Fraction:
    """Exact rational sum sum_mu (...) without the lam^gamma (1-lam^2)^beta prefactor.

    Only for tests and small n: every input is taken as its exact rational value.
    """
    p = point.params
    lam = as_fraction(p.lam)
    terms = jacobi_terms(point.gamma, as_fraction(p.beta), -lam * lam, 1 - lam * lam, point.n)
    return sum(terms, Fraction(0))

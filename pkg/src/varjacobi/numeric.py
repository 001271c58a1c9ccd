"""Small helpers for extended-precision scalars and (sign, log-magnitude) pairs."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import SaturationWarning


def to_mpf(x):
    """Convert int, float, Fraction or mpf to mpf at the current working precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as sign * 10**log10_abs; zero has sign 0."""

    sign: int
    log10_abs: float

    @classmethod
    def from_value(cls, value) -> "SignedLog":
        if value == 0:
            return cls(0, -math.inf)
        if isinstance(value, (mpmath.mpf, mpmath.mpc)):
            return cls(1 if value > 0 else -1, float(mpmath.log10(abs(value))))
        return cls(1 if value > 0 else -1, math.log10(abs(value)))

    @classmethod
    def from_log(cls, sign: int, log_abs: float) -> "SignedLog":
        """From a natural-log magnitude."""
        if sign == 0:
            return cls(0, -math.inf)
        return cls(int(math.copysign(1, sign)), log_abs / math.log(10))

    @property
    def log_abs(self) -> float:
        return self.log10_abs * math.log(10)

    def to_float(self, warn: bool = True) -> float:
        """Plain float; overflow saturates to +-inf with a SaturationWarning."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * 10.0**self.log10_abs
        except OverflowError:
            if warn:
                warnings.warn(
                    f"magnitude 1e{self.log10_abs:.1f} exceeds float range", SaturationWarning, stacklevel=2
                )
            return self.sign * math.inf

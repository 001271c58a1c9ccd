"""Globally adaptive panel quadrature with a fixed Gauss-Legendre rule per panel.

Each panel is integrated once whole and once as two halves; the difference is
the panel's error estimate.  Panels with the largest estimates are bisected
until the total falls under max(abs_tol, rel_tol*|I|), or until the
remaining error is at the roundoff floor.  Gauss-Legendre nodes are interior
points, so integrable endpoint singularities are never evaluated.

Two backends share the driver: numpy float64 (vectorised) and gmpy2 (MPFR)
at a given binary precision (for integrands whose size on the contour far exceeds
the size of the integral).
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import mpmath
import numpy as np

from .errors import ConvergenceError

ROUNDOFF_FACTOR = 4.0


@dataclass
class QuadResult:
    value: float
    error: float
    panels: int
    evaluations: int


@lru_cache(maxsize=None)
def _gl_double(m: int):
    return np.polynomial.legendre.leggauss(m)


@lru_cache(maxsize=None)
def gauss_legendre_mp(m: int, prec: int):
    """Gauss-Legendre nodes/weights on [-1, 1] as gmpy2 mpfr, Newton-refined at ``prec`` bits."""
    x0, _ = _gl_double(m)
    nodes, weights = [], []
    with gmpy2.context(gmpy2.get_context(), precision=prec + 20):
        tiny = gmpy2.mpfr(2) ** (-prec - 10)
        for guess in x0:
            x = gmpy2.mpfr(float(guess))
            for _ in range(100):
                p0, p1 = gmpy2.mpfr(1), x
                for k in range(2, m + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = m * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < tiny:
                    break
            p0, p1 = gmpy2.mpfr(1), x
            for k in range(2, m + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = m * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        return tuple(+x for x in nodes), tuple(+w for w in weights)


def mpfr_to_mpf(x):
    """Exact conversion of a gmpy2 mpfr to an mpmath mpf."""
    if not gmpy2.is_finite(x):
        return mpmath.mpf(float(x))
    man, exp = x.as_mantissa_exp()
    # the mpf constructor rounds to the ambient mpmath precision
    with mpmath.workprec(max(53, x.precision)):
        return mpmath.mpf((int(man), int(exp)))


def mpf_to_mpfr(x):
    """Exact conversion of an mpmath mpf (or anything float() accepts) to mpfr."""
    if isinstance(x, mpmath.mpf):
        # man_exp drops the sign for some mpmath backends; read the raw tuple
        sign, man, exp, _ = x._mpf_
        if not man:
            return gmpy2.mpfr(float(x))
        out = gmpy2.mpfr(man) * gmpy2.exp2(exp)
        return -out if sign else out
    return gmpy2.mpfr(x)


class _DoubleBackend:
    eps = 2.0**-53

    def __init__(self, m):
        self.x, self.w = _gl_double(m)

    def split(self, lo, hi, k):
        edges = np.linspace(lo, hi, k + 1)
        return list(zip(edges[:-1], edges[1:]))

    def mid(self, lo, hi):
        return 0.5 * (lo + hi)

    def rules(self, f, panels):
        """For each panel: (whole, halves, sum|f|w over halves)."""
        lo = np.array([p[0] for p in panels])
        hi = np.array([p[1] for p in panels])
        mid = 0.5 * (lo + hi)
        bounds = [(lo, hi), (lo, mid), (mid, hi)]
        pts, scales = [], []
        for a, b in bounds:
            c, r = 0.5 * (a + b), 0.5 * (b - a)
            pts.append(c[:, None] + r[:, None] * self.x[None, :])
            scales.append(r)
        vals = np.asarray(f(np.concatenate([p.ravel() for p in pts])), dtype=float)
        k, m = len(panels), len(self.x)
        vals = vals.reshape(3, k, m)
        whole = scales[0] * (vals[0] @ self.w)
        left = scales[1] * (vals[1] @ self.w)
        right = scales[2] * (vals[2] @ self.w)
        absint = scales[1] * (np.abs(vals[1]) @ self.w) + scales[2] * (np.abs(vals[2]) @ self.w)
        return list(zip(whole, left + right, absint)), 3 * k * m

    def to_float(self, v):
        return float(v)


class _MpBackend:
    """gmpy2 mpfr arithmetic; callers run it inside a gmpy2 precision context."""

    def __init__(self, m, prec):
        self.prec = prec
        self.eps = gmpy2.mpfr(2) ** (-prec)
        self.x, self.w = gauss_legendre_mp(m, prec)

    def split(self, lo, hi, k):
        lo, hi = mpf_to_mpfr(lo), mpf_to_mpfr(hi)
        step = (hi - lo) / k
        edges = [lo + j * step for j in range(k)] + [hi]
        return list(zip(edges[:-1], edges[1:]))

    def mid(self, lo, hi):
        return (lo + hi) / 2

    def rules(self, f, panels):
        out = []
        count = 0
        for lo, hi in panels:
            mid = (lo + hi) / 2
            res, absint = [], gmpy2.mpfr(0)
            for k, (a, b) in enumerate(((lo, hi), (lo, mid), (mid, hi))):
                c, r = (a + b) / 2, (b - a) / 2
                vals = f([c + r * x for x in self.x])
                count += len(vals)
                res.append(r * gmpy2.fsum([v * w for v, w in zip(vals, self.w)]))
                if k:
                    absint += r * gmpy2.fsum([abs(v) * w for v, w in zip(vals, self.w)])
            out.append((res[0], res[1] + res[2], absint))
        return out, count

    def to_float(self, v):
        return float(v)


def integrate(
    f,
    lo,
    hi,
    *,
    initial_panels: int = 64,
    abs_tol: float = 1e-15,
    rel_tol: float = 1e-12,
    max_subdivisions: int = 20000,
    nodes: int = 10,
    prec: int | None = None,
    noise: float = 1.0,
):
    """Integrate ``f`` over [lo, hi].

    ``f`` maps a batch of points to real values: a numpy array in float64
    mode, a list of gmpy2 mpfr when ``prec`` is given.  In the latter case
    ``f`` runs inside a gmpy2 context at ``prec`` bits and the returned value
    is converted to an mpmath mpf.
    ``noise`` scales the roundoff floor: the relative error of one evaluation
    of ``f`` in units of the working epsilon.
    """
    if prec is None:
        backend, ctx = _DoubleBackend(nodes), contextlib.nullcontext()
    else:
        backend, ctx = _MpBackend(nodes, prec), gmpy2.context(gmpy2.get_context(), precision=prec)
    with ctx:
        panels = backend.split(lo, hi, max(1, int(initial_panels)))
        stats, evals = backend.rules(f, panels)
        splits = 0
        while True:
            total = sum(s[1] for s in stats)
            tol = max(abs_tol, rel_tol * abs(total))
            floors = [ROUNDOFF_FACTOR * noise * backend.eps * s[2] for s in stats]
            errs = [abs(s[0] - s[1]) for s in stats]
            active = [(e, i) for i, (e, fl) in enumerate(zip(errs, floors)) if e > fl]
            active_err = sum(e for e, _ in active)
            floor = sum(floors)
            # below the rounding floor bisection cannot help; the caller
            # sees the floor in the error and may retry with more bits
            if active_err <= max(tol, floor):
                error = backend.to_float(active_err + floor)
                if prec is not None:
                    total = mpfr_to_mpf(total)
                return QuadResult(total, error, len(panels), evals)
            active.sort(reverse=True)
            chosen = []
            remaining = active_err
            for e, i in active:
                if remaining <= 0.5 * tol and chosen:
                    break
                chosen.append(i)
                remaining -= e
            if splits + len(chosen) > max_subdivisions:
                raise ConvergenceError(
                    f"quadrature did not converge within {max_subdivisions} subdivisions "
                    f"(error estimate {float(active_err):.3g}, target {float(tol):.3g})",
                    estimate=total if prec is None else mpfr_to_mpf(total),
                    error=float(active_err),
                )
            splits += len(chosen)
            chosen_set = set(chosen)
            new_panels = []
            for i in chosen:
                lo_i, hi_i = panels[i]
                m = backend.mid(lo_i, hi_i)
                new_panels += [(lo_i, m), (m, hi_i)]
            new_stats, more = backend.rules(f, new_panels)
            evals += more
            panels = [p for i, p in enumerate(panels) if i not in chosen_set] + new_panels
            stats = [s for i, s in enumerate(stats) if i not in chosen_set] + new_stats


def bits_for_digits(digits: float) -> int:
    return int(math.ceil(digits * math.log2(10)))

"""Ratio |S_n| / bound(n) for the decaying regimes, to see how tight the certificates are.

    python scripts/check_bounds.py --n-max 200
"""
import argparse
from fractions import Fraction as F

import mpmath

from varjacobi import EvalPoint, ParamSet, bound_certificate, scaled_exact
from varjacobi.errors import CertificateRefused

CASES = [
    ParamSet(2, 0, 0, F(3, 10)),
    ParamSet(2, F(1, 2), F(1, 2), F(3, 10)),
    ParamSet(F(-4, 5), 0, 0, F(1, 2)),
    ParamSet(3, F(1, 3), 2, F(1, 2)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=100)
    args = ap.parse_args()
    for p in CASES:
        worst, worst_n, checked = 0.0, None, 0
        for n in range(args.n_max + 1):
            pt = EvalPoint(p, n)
            try:
                cert = bound_certificate(pt)
            except CertificateRefused:
                continue
            with mpmath.workprec(256):
                ratio = float(abs(scaled_exact(pt).value) / cert.bound(n))
            checked += 1
            if ratio > worst:
                worst, worst_n = ratio, n
        print(f"a={p.a} alpha={p.alpha} beta={p.beta} lam={p.lam}: {checked} certificates, "
              f"max |S|/bound = {worst:.3g} at n={worst_n}")


if __name__ == "__main__":
    main()

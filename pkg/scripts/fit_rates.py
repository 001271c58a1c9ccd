"""Fit decay exponents to sweep CSVs and compare with the predicted rates.

    python scripts/fit_rates.py results/*.csv
"""
import argparse
import os

from varjacobi.errors import InsufficientData
from varjacobi.sweep import fit_decay_exponent, read_rows

# predicted ln|S_n| slope against ln n, or None for exponential rates
PREDICTED = {"Oscillatory": -0.5, "SaddleUpper": -1 / 3, "SaddleLower": -1 / 3}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="+")
    ap.add_argument("--route", default="exact")
    args = ap.parse_args()
    for path in args.files:
        rows, routes = read_rows(path)
        if args.route not in routes or not rows:
            continue
        regime = rows[0].regime
        name = os.path.basename(path)
        if regime in PREDICTED:
            for method in ("envelope_maxima", "all_points"):
                try:
                    fit = fit_decay_exponent(rows, args.route, method)
                except InsufficientData as exc:
                    print(f"{name:24s} {method:16s} skipped: {exc}")
                    continue
                print(f"{name:24s} {method:16s} slope {fit.fitted_slope:+.4f} +- {fit.slope_stderr:.4f}"
                      f"  predicted {PREDICTED[regime]:+.4f}  ({fit.points_used} points)")
        else:
            fit = fit_decay_exponent(rows, args.route, "log_rate")
            print(f"{name:24s} log_rate         {fit.fitted_slope:+.5f} per step ({fit.points_used} points)")


if __name__ == "__main__":
    main()

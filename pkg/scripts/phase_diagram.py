"""Regime table on a (lambda, a) grid, as CSV, with a coarse text map.

    python scripts/phase_diagram.py --out results/phase.csv
"""
import argparse

import numpy as np

from varjacobi.sweep import phase_diagram, phase_diagram_csv

SYMBOL = {
    "ExponentialLower": "L",
    "SaddleLower": "l",
    "Oscillatory": ".",
    "SaddleUpper": "u",
    "ExponentialUpper": "U",
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambdas", type=int, default=19)
    ap.add_argument("--a-min", type=float, default=-0.95)
    ap.add_argument("--a-max", type=float, default=6.0)
    ap.add_argument("--a-count", type=int, default=70)
    ap.add_argument("--out")
    args = ap.parse_args()
    lams = np.linspace(0.05, 0.95, args.lambdas)
    a_grid = np.linspace(args.a_min, args.a_max, args.a_count)
    cells = phase_diagram(list(lams), list(a_grid))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(phase_diagram_csv(cells))
    for i, lam in enumerate(lams):
        row = cells[i * len(a_grid):(i + 1) * len(a_grid)]
        print(f"{lam:5.2f} " + "".join(SYMBOL[c.regime] for c in row))
    print(f"      a from {args.a_min} to {args.a_max}")


if __name__ == "__main__":
    main()

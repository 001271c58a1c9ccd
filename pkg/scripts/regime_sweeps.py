"""Sweep S_n over n in each regime and write one CSV per regime.

    python scripts/regime_sweeps.py --out results/ --n-to 2000 --step 10
"""
import argparse
import os
import time
from dataclasses import dataclass
from fractions import Fraction as F

from varjacobi import ParamSet
from varjacobi.sweep import SweepSpec, integer_gamma_n_values, rows_to_csv, run_sweep, sweep_status


@dataclass(frozen=True)
class Preset:
    name: str
    params: ParamSet
    routes: tuple
    integer_gamma: bool = False


PRESETS = [
    Preset("oscillatory", ParamSet(F(1, 5), F(3, 10), F(1, 2), F(1, 2)), ("exact", "asymptotic")),
    Preset("saddle_upper", ParamSet(2, F(3, 10), F(1, 5), F(1, 2)), ("exact", "asymptotic")),
    Preset("saddle_lower", ParamSet(F(-2, 3), F(1, 4), 0, F(1, 2)), ("exact", "asymptotic")),
    Preset("saddle_lower_int", ParamSet(F(-2, 3), 0, 0, F(1, 2)), ("exact", "asymptotic"), True),
    Preset("exp_upper", ParamSet(2, F(1, 2), F(1, 2), F(3, 10)), ("exact", "bound")),
    Preset("exp_lower_int", ParamSet(F(-4, 5), 0, 0, F(1, 2)), ("exact", "bound"), True),
    Preset("exp_lower_growth", ParamSet(F(-4, 5), F(1, 4), 0, F(1, 2)), ("exact", "asymptotic")),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--n-from", type=int, default=100)
    ap.add_argument("--n-to", type=int, default=2000)
    ap.add_argument("--step", type=int, default=10)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", help="comma list of preset names")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    wanted = set(args.only.split(",")) if args.only else None
    for preset in PRESETS:
        if wanted and preset.name not in wanted:
            continue
        if preset.integer_gamma:
            ns = integer_gamma_n_values(preset.params, args.n_from, args.n_to)
        else:
            ns = list(range(args.n_from, args.n_to + 1, args.step))
        spec = SweepSpec(preset.params, tuple(ns), preset.routes)
        t0 = time.time()
        rows = run_sweep(spec, workers=args.workers)
        path = os.path.join(args.out, f"{preset.name}.csv")
        with open(path, "w") as fh:
            fh.write(rows_to_csv(rows, spec.routes))
        print(f"{preset.name:18s} {len(rows):5d} rows  status {sweep_status(rows)}  {time.time() - t0:6.1f}s -> {path}")


if __name__ == "__main__":
    main()

"""Truncation convergence of the reaction-coordinate master equation.

Three studies, each written as CSV:
  weak:      lambda_x = lambda_z = 1, T = 1, M = 2..5 (deviation from M = 5)
  strong:    lambda_x = lambda_z = 8, T = 1, M = 3..5 (deviation from M = 5)
  dephasing: lambda_z = 8, T = 0.1, M = 4..8 against the exact solution

    python scripts/convergence.py --out results/convergence --jobs 4
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from spinbath.cli import CONV_HEADER, write_csv, write_trajectory
from spinbath.oracle import DephasingKernel, dephasing_trajectory
from spinbath.rcmap import ModelConfig, simulate_rc_qme
from spinbath.spectral import BathSpec

RHO0 = np.full((2, 2), 0.5, dtype=complex)

STUDIES = {
    "weak": (ModelConfig(1.0, 0.0, (BathSpec("x", 1.0), BathSpec("z", 1.0))), (2, 3, 4, 5), 10.0),
    "strong": (ModelConfig(1.0, 0.0, (BathSpec("x", 8.0), BathSpec("z", 8.0))), (3, 4, 5), 10.0),
    "dephasing": (ModelConfig(1.0, 0.0, (BathSpec("z", 8.0, temperature=0.1),)),
                  (4, 5, 6, 7, 8), 5.0),
}


def run(args):
    model, M, times = args
    return simulate_rc_qme(model, M, RHO0, times)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results/convergence")
    p.add_argument("--study", choices=sorted(STUDIES), action="append")
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name in args.study or list(STUDIES):
        model, levels, t_max = STUDIES[name]
        times = 0.02 * np.arange(int(round(t_max / 0.02)) + 1)
        work = [(model, M, times) for M in levels]
        if args.jobs > 1:
            with ProcessPoolExecutor(min(args.jobs, len(work))) as pool:
                trajs = list(pool.map(run, work))
        else:
            trajs = [run(w) for w in work]
        exact = None
        if name == "dephasing":
            ex = dephasing_trajectory(DephasingKernel(model.baths[0]), times, RHO0)
            write_trajectory(out / f"{name}_exact.csv", ex)
            exact = ex.sx
        rows = []
        for M, tr in zip(levels, trajs):
            write_trajectory(out / f"{name}_M{M}.csv", tr)
            dev_ex = np.max(np.abs(tr.sx - exact)) if exact is not None else np.nan
            rows.append((M, np.max(np.abs(tr.sx - trajs[-1].sx)), dev_ex))
        write_csv(out / f"{name}_summary.csv", CONV_HEADER, rows)
        print(name)
        for M, d_ref, d_ex in rows:
            print(f"  M={M}: sup|sx - sx(M={levels[-1]})| = {d_ref:.4f}   "
                  f"sup|sx - exact| = {d_ex:.4f}")


if __name__ == "__main__":
    main()

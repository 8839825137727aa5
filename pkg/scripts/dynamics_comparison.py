"""Coherence dynamics at strong dephasing (lambda_z = 8) for increasing lambda_x.

Runs the reaction-coordinate master equation (M levels per RC) and the
closed-form effective-Hamiltonian solution side by side, writes one dynamics
CSV per run and prints the time at which |<sigma_x>| first drops below 0.1.

    python scripts/dynamics_comparison.py --out results/dynamics --jobs 4
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from spinbath.cli import write_trajectory
from spinbath.effh import simulate_effh_analytic
from spinbath.rcmap import ModelConfig, simulate_rc_qme
from spinbath.spectral import BathSpec

RHO0 = np.full((2, 2), 0.5, dtype=complex)


def model(lx, T):
    return ModelConfig(1.0, 0.0, (BathSpec("x", lx, temperature=T),
                                  BathSpec("z", 8.0, temperature=T)))


def rc_run(args):
    lx, T, M, times = args
    return simulate_rc_qme(model(lx, T), M, RHO0, times)


def first_below(tr, level=0.1):
    idx = np.flatnonzero(np.abs(tr.sx) < level)
    return tr.times[idx[0]] if idx.size else np.inf


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results/dynamics")
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    times = 0.02 * np.arange(int(round(args.t_max / 0.02)) + 1)
    cases = [(lx, T) for T in (0.1, 1.0) for lx in (0.0, 2.0, 4.0, 8.0)]

    work = [(lx, T, args.levels, times) for lx, T in cases]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rc = list(pool.map(rc_run, work))
    else:
        rc = [rc_run(w) for w in work]

    print(f"{'T':>5} {'lambda_x':>8} {'RC t(0.1)':>10} {'EFFH t(0.1)':>11}")
    for (lx, T), tr in zip(cases, rc):
        ef = simulate_effh_analytic(model(lx, T), RHO0, times)
        tag = f"T{T:g}_lx{lx:g}"
        write_trajectory(out / f"rc_M{args.levels}_{tag}.csv", tr)
        write_trajectory(out / f"effh_{tag}.csv", ef)
        print(f"{T:5g} {lx:8g} {first_below(tr):10.2f} {first_below(ef):11.2f}")


if __name__ == "__main__":
    main()

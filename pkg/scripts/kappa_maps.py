"""Dressing-function maps and cuts.

  kappa_xz.csv        kappa_x, kappa_y, kappa_z over the (eps_x, eps_z) plane
  kappa_xyz_cuts.csv  three-bath cuts: eps_x = eps_y = eps_z, and eps_y = eps_z at eps_x = 1

Each row also carries the closed forms where they exist (equal couplings).

    python scripts/kappa_maps.py --out results/kappa
"""
import argparse
from pathlib import Path

import numpy as np

from spinbath.cli import write_csv
from spinbath.dressing import dawson, kappa_triple


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results/kappa")
    p.add_argument("--points", type=int, default=31)
    p.add_argument("--eps-max", type=float, default=3.0)
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(0.0, args.eps_max, args.points)

    rows = []
    for ez in grid:
        for ex in grid:
            ds = kappa_triple(ex, 0.0, ez)
            rows.append((ex, ez, ds.kappa_x, ds.kappa_y, ds.kappa_z))
    write_csv(out / "kappa_xz.csv", ("eps_x", "eps_z", "kappa_x", "kappa_y", "kappa_z"), rows)

    worst = 0.0
    rows = []
    for e in grid:
        ds = kappa_triple(e, e, e)
        closed = (2 / 3) * np.exp(-2 * e * e) * (1 - 4 * e * e) + 1 / 3
        worst = max(worst, abs(ds.kappa_x - closed))
        rows.append(("diagonal", e, e, e, ds.kappa_x, ds.kappa_y, ds.kappa_z, closed))
    for e in grid:
        ds = kappa_triple(1.0, e, e)
        rows.append(("x=1", 1.0, e, e, ds.kappa_x, ds.kappa_y, ds.kappa_z, np.nan))
    header = ("cut", "eps_x", "eps_y", "eps_z", "kappa_x", "kappa_y", "kappa_z", "closed_form")
    lines = [",".join(header)] + [
        ",".join([r[0]] + [f"{v:.12g}" for v in r[1:]]) for r in rows]
    (out / "kappa_xyz_cuts.csv").write_text("\n".join(lines) + "\n")

    s = np.sqrt(2) * grid
    pair = np.array([kappa_triple(e, 0.0, e).kappa_x for e in grid])
    print(f"equal-coupling two-bath max |h - closed form| = "
          f"{np.max(np.abs(pair - (1 - s * dawson(s)))):.1e}")
    print(f"equal-coupling three-bath max |kappa - closed form| = {worst:.1e}")
    print(f"wrote {out}/kappa_xz.csv and {out}/kappa_xyz_cuts.csv")


if __name__ == "__main__":
    main()

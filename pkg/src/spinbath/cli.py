"""Command-line entry point: ``spinbath <command> --config FILE [--out DIR] [--jobs N]``.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures (integration, quadrature or steady-state errors).
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config, manifest_text
from .dressing import kappa_triple
from .effh import RATEMAP_FIELDS, rate_map, simulate_effh_analytic, simulate_effh_qme
from .oracle import DephasingKernel, dephasing_trajectory
from .rcmap import simulate_rc_qme
from .redfield import IntegrationError, NonUniqueSteadyStateError, Trajectory
from .spectral import QuadratureError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

DYNAMICS_HEADER = ("t", "re_rho12", "im_rho12", "sx", "sz", "trace_err")
RATEMAP_HEADER = ("eps_x", "eps_z") + RATEMAP_FIELDS
KAPPA_HEADER = ("eps_x", "eps_y", "eps_z", "kappa_x", "kappa_y", "kappa_z",
                "err_x", "err_y", "err_z", "ok")
CONV_HEADER = ("levels", "dev_reference", "dev_exact")

NUMERIC_ERRORS = (IntegrationError, QuadratureError, NonUniqueSteadyStateError,
                  FloatingPointError, np.linalg.LinAlgError)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.12g}"


def write_csv(path: Path, header, rows) -> Path:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_trajectory(path: Path, traj: Trajectory) -> Path:
    cols = traj.columns()
    return write_csv(path, DYNAMICS_HEADER, zip(*(cols[k] for k in DYNAMICS_HEADER)))


def simulate(cfg: RunConfig, method: str | None = None, levels: int | None = None) -> Trajectory:
    sim = cfg.simulation
    method = method or sim.method
    times = sim.times()
    if method == "rc-qme":
        return simulate_rc_qme(cfg.model, levels or sim.levels, sim.rho0, times, h=sim.integrator_step)
    if method == "effh-qme":
        return simulate_effh_qme(cfg.model, sim.rho0, times, h=sim.integrator_step)
    if method == "effh-analytic":
        if cfg.model.tunneling != 0:
            raise ConfigError("effh-analytic needs zero tunneling")
        return simulate_effh_analytic(cfg.model, sim.rho0, times)
    if method == "exact-dephasing":
        cfg.require_single_z()
        kernel = DephasingKernel(cfg.model.baths[0], cfg.model.delta)
        return dephasing_trajectory(kernel, times, sim.rho0)
    raise ConfigError(f"unknown method {method!r}")


def _prepare(cfg: RunConfig, command: str) -> Path:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / f"{cfg.stem}_manifest").write_text(manifest_text(cfg, command))
    return cfg.out_dir


def run_dynamics(cfg: RunConfig, jobs: int = 1) -> list[Path]:
    out = _prepare(cfg, "dynamics")
    return [write_trajectory(out / f"{cfg.stem}_dynamics.csv", simulate(cfg))]


def run_exact(cfg: RunConfig, jobs: int = 1) -> list[Path]:
    cfg.require_single_z()
    cfg = dataclasses.replace(
        cfg, simulation=dataclasses.replace(cfg.simulation, method="exact-dephasing"))
    out = _prepare(cfg, "exact")
    return [write_trajectory(out / f"{cfg.stem}_exact.csv", simulate(cfg))]


def _with_temperature(model, temperature):
    if temperature is None:
        return model
    baths = tuple(dataclasses.replace(b, temperature=temperature) for b in model.baths)
    return dataclasses.replace(model, baths=baths)


def run_ratemap(cfg: RunConfig, jobs: int = 1) -> list[Path]:
    cfg.require_xz()
    sw = cfg.sweep
    if sw.eps_x is None or sw.eps_z is None:
        raise ConfigError("ratemap needs eps_x and eps_z grids")
    model = _with_temperature(cfg.model, sw.temperature)
    rm = rate_map(model, sw.eps_x, sw.eps_z, jobs=jobs)
    out = _prepare(cfg, "ratemap")
    return [write_csv(out / f"{cfg.stem}_ratemap.csv", RATEMAP_HEADER, rm.rows())]


def _kappa_cell(eps):
    try:
        ds = kappa_triple(*eps)
    except QuadratureError:
        return eps + (np.nan,) * 6 + (0,)
    return eps + (ds.kappa_x, ds.kappa_y, ds.kappa_z) + ds.errors + (1,)


def _kappa_points(cfg: RunConfig):
    sw = cfg.sweep
    grids = [sw.eps_x, sw.eps_y, sw.eps_z]
    given = [g for g in grids if g is not None]
    if len(given) < 2:
        raise ConfigError("kappa needs at least two of eps_x, eps_y, eps_z")
    if sw.mode == "diagonal":
        n = {len(g) for g in given}
        if len(n) != 1:
            raise ConfigError("diagonal sweeps need grids of equal length")
        n = n.pop()
        cols = [g if g is not None else np.zeros(n) for g in grids]
        return [tuple(float(c[i]) for c in cols) for i in range(n)]
    gx, gy, gz = (g if g is not None else np.zeros(1) for g in grids)
    return [(float(x), float(y), float(z)) for z in gz for y in gy for x in gx]


def run_kappa(cfg: RunConfig, jobs: int = 1) -> list[Path]:
    points = _kappa_points(cfg)
    rows = _map(_kappa_cell, points, jobs)
    out = _prepare(cfg, "kappa")
    path = write_csv(out / f"{cfg.stem}_kappa.csv", KAPPA_HEADER, rows)
    failed = sum(1 for r in rows if r[-1] == 0)
    if failed:
        print(f"spinbath: warning: {failed} kappa cell(s) failed to converge", file=sys.stderr)
    return [path]


def _conv_cell(args):
    cfg, M = args
    return simulate(cfg, "rc-qme", M)


def run_convergence(cfg: RunConfig, jobs: int = 1) -> list[Path]:
    if cfg.simulation.method != "rc-qme":
        raise ConfigError("convergence runs need method = rc-qme")
    levels = sorted(set(cfg.sweep.levels))
    trajs = _map(_conv_cell, [(cfg, M) for M in levels], jobs)
    out = _prepare(cfg, "convergence")
    paths = [write_trajectory(out / f"{cfg.stem}_M{M}_dynamics.csv", tr)
             for M, tr in zip(levels, trajs)]
    ref = trajs[-1].sx
    exact = None
    try:
        cfg.require_single_z()
    except ConfigError:
        pass
    else:
        exact = simulate(cfg, "exact-dephasing").sx
    rows = []
    for M, tr in zip(levels, trajs):
        dev_ex = np.max(np.abs(tr.sx - exact)) if exact is not None else np.nan
        rows.append((M, np.max(np.abs(tr.sx - ref)), dev_ex))
    paths.append(write_csv(out / f"{cfg.stem}_conv_summary.csv", CONV_HEADER, rows))
    return paths


def _map(fn, items, jobs):
    """Ordered map, fanned out over processes when jobs > 1."""
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


COMMANDS = {
    "dynamics": run_dynamics,
    "ratemap": run_ratemap,
    "kappa": run_kappa,
    "convergence": run_convergence,
    "exact": run_exact,
}


def available_cpus() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:          # not available on every platform
        return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinbath", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="INI run configuration")
    p.add_argument("--out", help="output directory (overrides [output] dir)")
    p.add_argument("--jobs", type=int, default=available_cpus(),
                   help="worker processes for sweeps (default: available CPUs)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        cfg = load_config(args.config)
        if args.out:
            cfg = dataclasses.replace(cfg, out_dir=Path(args.out))
        with np.errstate(over="raise", invalid="raise"):
            paths = COMMANDS[args.command](cfg, jobs=args.jobs)
    except NUMERIC_ERRORS as exc:
        print(f"spinbath: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as exc:
        print(f"spinbath: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

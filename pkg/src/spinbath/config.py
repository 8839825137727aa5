"""Run configuration: an INI file with [qubit], [bath <axis>], [simulation],
[sweep] and [output] sections. Unknown sections or keys are errors.

Example::

    [qubit]
    delta = 1.0

    [bath z]
    lambda = 8.0
    temperature = 0.1

    [simulation]
    method = rc-qme
    levels = 5
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .rcmap import ModelConfig
from .spectral import DEFAULT_CUTOFF, BathSpec

METHODS = ("rc-qme", "effh-qme", "effh-analytic", "exact-dephasing")

DEFAULT_OMEGA = 8.0
DEFAULT_GAMMA = 0.05 / math.pi
DEFAULT_GRID = "0:1.2:41"

QUBIT_KEYS = {"delta", "tunneling", "unit_delta"}
BATH_KEYS = {"lambda", "epsilon", "omega", "gamma", "temperature", "cutoff"}
SIM_KEYS = {"method", "levels", "t_max", "step", "rho11", "re_rho12", "im_rho12", "integrator_step"}
SWEEP_KEYS = {"eps_x", "eps_y", "eps_z", "temperature", "levels", "mode"}
OUTPUT_KEYS = {"dir", "stem"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Simulation:
    method: str = "rc-qme"
    levels: int = 5
    t_max: float = 10.0
    step: float = 0.02
    rho0: np.ndarray = field(default_factory=lambda: np.full((2, 2), 0.5, dtype=complex))
    integrator_step: float | None = None

    def times(self) -> np.ndarray:
        n = int(round(self.t_max / self.step))
        if not math.isclose(n * self.step, self.t_max, rel_tol=1e-9, abs_tol=1e-12):
            raise ConfigError("t_max must be a whole number of output steps")
        return self.step * np.arange(n + 1)


@dataclass(frozen=True)
class Sweep:
    eps_x: np.ndarray | None = None
    eps_y: np.ndarray | None = None
    eps_z: np.ndarray | None = None
    temperature: float | None = None
    levels: tuple = (3, 4, 5)
    mode: str = "grid"          # grid (Cartesian product) or diagonal (zipped)


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig
    simulation: Simulation
    sweep: Sweep
    out_dir: Path
    stem: str
    unit_delta: float = 1.0
    source: str = ""

    def require_single_z(self):
        if len(self.model.baths) != 1 or self.model.baths[0].axis != "z":
            raise ConfigError("exact dephasing needs exactly one bath, on the z axis")
        if self.model.tunneling != 0:
            raise ConfigError("exact dephasing needs zero tunneling")

    def require_xz(self):
        axes = sorted(b.axis for b in self.model.baths)
        if axes != ["x", "z"]:
            raise ConfigError("rate maps need exactly an x and a z bath")


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive, evenly spaced) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ConfigError(f"grid needs at least one point: {text!r}")
            return np.linspace(float(a), float(b), n)
        vals = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from None
    if vals.size == 0:
        raise ConfigError("empty grid")
    return vals


def _float(sec, key, default=None):
    if key not in sec:
        if default is None:
            raise ConfigError(f"[{sec.name}] missing required key {key!r}")
        return float(default)
    try:
        v = float(sec[key])
    except ValueError:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r} is not a number") from None
    if not math.isfinite(v):
        raise ConfigError(f"[{sec.name}] {key} must be finite")
    return v


def _check_keys(sec, allowed):
    extra = set(sec.keys()) - allowed
    if extra:
        raise ConfigError(f"[{sec.name}] unknown keys: {', '.join(sorted(extra))}")


def _parse_bath(sec, axis: str, unit: float) -> BathSpec:
    _check_keys(sec, BATH_KEYS)
    omega = _float(sec, "omega", DEFAULT_OMEGA * unit) / unit
    if "lambda" in sec and "epsilon" in sec:
        raise ConfigError(f"[{sec.name}] give lambda or epsilon, not both")
    if "epsilon" in sec:
        lam = _float(sec, "epsilon") * omega
    else:
        lam = _float(sec, "lambda") / unit
    try:
        return BathSpec(
            axis=axis, lam=lam, omega=omega,
            gamma=_float(sec, "gamma", DEFAULT_GAMMA),
            temperature=_float(sec, "temperature", 1.0 * unit) / unit,
            cutoff=_float(sec, "cutoff", DEFAULT_CUTOFF * unit) / unit,
        )
    except ValueError as exc:
        raise ConfigError(f"[{sec.name}] {exc}") from None


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, base=path.parent, default_stem=path.stem)


def parse_config(text: str, base: Path = Path("."), default_stem: str = "run") -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}".splitlines()[0]) from None

    known = {"qubit", "simulation", "sweep", "output"}
    bath_secs = {}
    for name in cp.sections():
        parts = name.split()
        if len(parts) == 2 and parts[0] == "bath":
            if parts[1] not in ("x", "y", "z"):
                raise ConfigError(f"[{name}] bath axis must be x, y or z")
            bath_secs[parts[1]] = cp[name]
        elif name not in known:
            raise ConfigError(f"unknown section [{name}]")
    if not bath_secs:
        raise ConfigError("at least one [bath x|y|z] section is required")

    q = cp["qubit"] if cp.has_section("qubit") else cp["DEFAULT"]
    _check_keys(q, QUBIT_KEYS)
    unit = _float(q, "unit_delta", 1.0)
    if unit <= 0:
        raise ConfigError("unit_delta must be positive")
    baths = tuple(_parse_bath(bath_secs[ax], ax, unit) for ax in "xyz" if ax in bath_secs)
    try:
        model = ModelConfig(
            delta=_float(q, "delta", unit) / unit,
            tunneling=_float(q, "tunneling", 0.0) / unit,
            baths=baths,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    s = cp["simulation"] if cp.has_section("simulation") else {}
    if s:
        _check_keys(s, SIM_KEYS)
    method = s.get("method", "rc-qme").strip() if s else "rc-qme"
    if method not in METHODS:
        raise ConfigError(f"method must be one of {', '.join(METHODS)}, got {method!r}")
    sim_sec = s if s else cp["DEFAULT"]
    rho11 = _float(sim_sec, "rho11", 0.5)
    rho12 = complex(_float(sim_sec, "re_rho12", 0.5), _float(sim_sec, "im_rho12", 0.0))
    rho0 = np.array([[1 - rho11, np.conj(rho12)], [rho12, rho11]], dtype=complex)
    if np.linalg.eigvalsh(rho0)[0] < -1e-12:
        raise ConfigError("initial state is not positive semidefinite")
    try:
        levels = int(sim_sec.get("levels", "5"))
    except ValueError:
        raise ConfigError("levels must be an integer") from None
    sim = Simulation(
        method=method,
        levels=levels,
        t_max=_float(sim_sec, "t_max", 10.0),
        step=_float(sim_sec, "step", 0.02),
        rho0=rho0,
        integrator_step=_float(sim_sec, "integrator_step") if "integrator_step" in sim_sec else None,
    )
    if sim.levels < 1:
        raise ConfigError("levels must be >= 1")
    if sim.t_max <= 0 or sim.step <= 0:
        raise ConfigError("t_max and step must be positive")
    if sim.integrator_step is not None and sim.integrator_step <= 0:
        raise ConfigError("integrator_step must be positive")
    sim.times()

    sw = cp["sweep"] if cp.has_section("sweep") else None
    sweep = Sweep(eps_x=parse_grid(DEFAULT_GRID), eps_z=parse_grid(DEFAULT_GRID))
    if sw is not None:
        _check_keys(sw, SWEEP_KEYS)
        grids = {k: parse_grid(sw[k]) if k in sw else None for k in ("eps_x", "eps_y", "eps_z")}
        if grids["eps_x"] is None and grids["eps_z"] is None and grids["eps_y"] is None:
            grids["eps_x"], grids["eps_z"] = sweep.eps_x, sweep.eps_z
        for k, g in grids.items():
            if g is not None and np.any(g < 0):
                raise ConfigError(f"[sweep] {k} must be non-negative")
        try:
            lv = tuple(int(v) for v in sw.get("levels", "3, 4, 5").split(","))
        except ValueError:
            raise ConfigError("[sweep] levels must be a comma-separated list of integers") from None
        if not lv or min(lv) < 1:
            raise ConfigError("[sweep] levels must be positive")
        mode = sw.get("mode", "grid").strip()
        if mode not in ("grid", "diagonal"):
            raise ConfigError("[sweep] mode must be grid or diagonal")
        temp = _float(sw, "temperature") / unit if "temperature" in sw else None
        if temp is not None and temp <= 0:
            raise ConfigError("[sweep] temperature must be positive")
        sweep = Sweep(grids["eps_x"], grids["eps_y"], grids["eps_z"], temp, lv, mode)

    o = cp["output"] if cp.has_section("output") else None
    out_dir, stem = base / "out", default_stem
    if o is not None:
        _check_keys(o, OUTPUT_KEYS)
        out_dir = base / o.get("dir", "out")
        stem = o.get("stem", default_stem).strip()
    if not stem or "/" in stem:
        raise ConfigError("output stem must be a plain file-name prefix")
    return RunConfig(model, sim, sweep, out_dir, stem, unit, text)


def manifest_text(cfg: RunConfig, command: str) -> str:
    """Resolved parameters as a config that reproduces the run (energies in units of Delta)."""
    m, s, w = cfg.model, cfg.simulation, cfg.sweep
    lines = [f"# spinbath {command}", "", "[qubit]",
             f"delta = {m.delta!r}", f"tunneling = {m.tunneling!r}", ""]
    for b in m.baths:
        lines += [f"[bath {b.axis}]", f"# eps_{b.axis} = {b.epsilon!r}",
                  f"lambda = {b.lam!r}", f"omega = {b.omega!r}", f"gamma = {b.gamma!r}",
                  f"temperature = {b.temperature!r}", f"cutoff = {b.cutoff!r}", ""]
    lines += ["[simulation]", f"method = {s.method}", f"levels = {s.levels}",
              f"t_max = {s.t_max!r}", f"step = {s.step!r}",
              f"rho11 = {float(s.rho0[1, 1].real)!r}", f"re_rho12 = {float(s.rho0[1, 0].real)!r}",
              f"im_rho12 = {float(s.rho0[1, 0].imag)!r}"]
    if s.integrator_step is not None:
        lines.append(f"integrator_step = {s.integrator_step!r}")
    lines += ["", "[sweep]"]
    for k in ("eps_x", "eps_y", "eps_z"):
        g = getattr(w, k)
        if g is not None:
            lines.append(f"{k} = " + ", ".join(repr(float(v)) for v in g))
    if w.temperature is not None:
        lines.append(f"temperature = {float(w.temperature)!r}")
    lines += [f"levels = {', '.join(str(v) for v in w.levels)}", f"mode = {w.mode}", "",
              "[output]", f"dir = {cfg.out_dir.resolve()}", f"stem = {cfg.stem}", ""]
    return "\n".join(lines)

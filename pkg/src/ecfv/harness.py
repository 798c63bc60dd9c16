"""Experiment orchestration: configuration, the run loop and file outputs."""
import argparse
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import EntropyBudget, step_total_entropy_balance
from .euler import GasModel, InvalidStateError, cons_to_prim, specific_entropy
from .fluxes import FLUX_NAMES, DissipationSpec, make_flux
from .integrators import (
    BALANCE_WEIGHTS,
    DEFAULT_EC_ORDER,
    SCHEMES,
    BlowUpError,
    Discretization,
    NewtonConfig,
    SolverError,
    TimeState,
    advance,
    combine_levels,
    flux_level_fields,
)
from .mesh import BOUNDARY_CONDITIONS, ConfigError, Mesh1D, apply_transmissive_bc, build_mesh
from .problems import RecedingIC, RiemannIC, init_fields, init_riemann

__all__ = [
    "ConfigError", "Mesh1D", "RecedingIC", "RiemannIC", "RunConfig", "RunArtifacts", "Snapshot",
    "apply_transmissive_bc", "build_mesh", "init_riemann", "run", "parse_config",
    "write_snapshot_csv", "write_entropy_series_csv", "write_config_echo", "emit_plot_script",
    "write_outputs",
]

SERIES_HEADER = "step,t,total_U,total_rhoS,F_left,F_right,production"
SNAPSHOT_HEADER = "x,rho,u,p,S"


@dataclass
class RunConfig:
    dt: float
    t_final: float
    n_cells: int = 100
    x_min: float = -0.5
    x_max: float = 0.5
    gamma: float = 1.4
    flux: str = "ec-roe"
    time: str = "fe"
    ic: RecedingIC | RiemannIC = field(default_factory=RecedingIC)
    snapshots: tuple = ()
    out_dir: str | None = None
    newton_tol: float = 1e-12
    quad_order: int | None = None
    es_coeff: float = 0.5
    es_kind: str = "scaled-temporal-jacobian"
    entropy_fix: float = 0.0
    bc: str = "transmissive"
    diagnostics: bool = True

    def validate(self):
        if not self.dt > 0.0:
            raise ConfigError(f"dt must be > 0, got {self.dt!r}", "dt")
        if not self.t_final >= self.dt:
            raise ConfigError(f"tfinal ({self.t_final!r}) must be >= dt ({self.dt!r})", "tfinal")
        build_mesh(self.x_min, self.x_max, self.n_cells)
        if not self.gamma > 1.0:
            raise ConfigError(f"gamma must be > 1, got {self.gamma!r}", "gamma")
        if self.flux not in FLUX_NAMES:
            raise ConfigError(f"unknown flux {self.flux!r}; valid: {', '.join(FLUX_NAMES)}", "flux")
        if self.time not in SCHEMES:
            raise ConfigError(f"unknown time scheme {self.time!r}; valid: {', '.join(SCHEMES)}", "time")
        if self.bc not in BOUNDARY_CONDITIONS:
            raise ConfigError(f"unknown bc {self.bc!r}; valid: {', '.join(BOUNDARY_CONDITIONS)}", "bc")
        if isinstance(self.ic, RecedingIC) and self.n_cells % 2:
            raise ConfigError("receding runs need an even cell count so the initial "
                              "discontinuity sits on an interface", "cells")
        for t in self.snapshots:
            if not 0.0 <= t <= self.t_final:
                raise ConfigError(f"snapshot time {t!r} outside [0, tfinal]", "snapshots")
        if not self.newton_tol > 0.0:
            raise ConfigError("newton-tol must be > 0", "newton-tol")
        if self.quad_order is not None and self.quad_order < 2:
            raise ConfigError("quad-order must be >= 2", "quad-order")
        if not self.es_coeff >= 0.0:
            raise ConfigError("es-coeff must be >= 0", "es-coeff")
        if self.es_kind not in DissipationSpec.KINDS:
            raise ConfigError(f"unknown es-kind {self.es_kind!r}", "es-kind")
        if not self.entropy_fix >= 0.0:
            raise ConfigError("entropy-fix must be >= 0", "entropy-fix")

    @property
    def gas(self):
        return GasModel(self.gamma)

    @property
    def mesh(self):
        return build_mesh(self.x_min, self.x_max, self.n_cells)

    @property
    def n_steps(self):
        return steps_to_reach(self.t_final, self.dt)

    @property
    def ec_order(self):
        return self.quad_order if self.quad_order is not None else DEFAULT_EC_ORDER

    @property
    def snapshot_times(self):
        return tuple(self.snapshots) if self.snapshots else (self.t_final,)

    def discretization(self):
        kwargs = {"dissipation": DissipationSpec(self.es_kind, self.es_coeff),
                  "entropy_fix": self.entropy_fix}
        if self.quad_order is not None:
            kwargs["tadmor_order"] = self.quad_order
        return Discretization(self.mesh, make_flux(self.flux, **kwargs), self.gas, self.bc)

    def newton(self):
        return NewtonConfig(residual_tol=self.newton_tol)

    def echo(self):
        """Fully resolved configuration as ``key=value`` lines (parseable by :func:`parse_config`)."""
        items = [
            ("cells", str(self.n_cells)),
            ("xmin", repr(float(self.x_min))),
            ("xmax", repr(float(self.x_max))),
            ("dt", repr(float(self.dt))),
            ("tfinal", repr(float(self.t_final))),
            ("gamma", repr(float(self.gamma))),
            ("flux", self.flux),
            ("time", self.time),
            ("ic", self.ic.spec()),
            ("snapshots", ",".join(repr(float(t)) for t in self.snapshot_times)),
            ("newton-tol", repr(float(self.newton_tol))),
            ("quad-order", "" if self.quad_order is None else str(self.quad_order)),
            ("es-coeff", repr(float(self.es_coeff))),
            ("es-kind", self.es_kind),
            ("entropy-fix", repr(float(self.entropy_fix))),
            ("bc", self.bc),
            ("diagnostics", "true" if self.diagnostics else "false"),
        ]
        if self.out_dir is not None:
            items.append(("out", str(self.out_dir)))
        return "".join(f"{k}={v}\n" for k, v in items)


def steps_to_reach(t, dt):
    """Index of the first step whose time ``k * dt`` is >= ``t``."""
    return int(math.ceil(t / dt - 1e-9))


@dataclass
class Snapshot:
    t: float
    step: int
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray
    S: np.ndarray


@dataclass
class RunArtifacts:
    config: RunConfig
    snapshots: list = field(default_factory=list)
    budgets: list = field(default_factory=list)
    complete: bool = True
    error: str | None = None
    steps_taken: int = 0
    fields: np.ndarray | None = None
    initial_totals: np.ndarray | None = None
    boundary_flux_integral: np.ndarray | None = None
    conservation_defects: list = field(default_factory=list)
    newton_iterations: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def cumulative_production(self):
        return np.cumsum([b.production for b in self.budgets])


def _snapshot(fields, mesh, gas, t, step):
    w = cons_to_prim(fields, gas)
    return Snapshot(t, step, mesh.centers.copy(), w[:, 0].copy(), w[:, 1].copy(), w[:, 2].copy(),
                    specific_entropy(w, gas))


def run(config):
    """Integrate ``config`` from t = 0 to ``t_final`` with a fixed step.

    Blow-ups and solver failures do not raise: the returned artifacts carry
    ``complete = False``, the error text, and everything recorded so far.
    """
    config.validate()
    gas, mesh, dt = config.gas, config.mesh, config.dt
    disc = config.discretization()
    newton = config.newton()
    order = config.ec_order

    u0 = init_fields(mesh, config.ic, gas)
    art = RunArtifacts(config=config, fields=u0, initial_totals=mesh.dx * u0.sum(axis=0),
                       boundary_flux_integral=np.zeros(3))
    pending = sorted((steps_to_reach(t, dt), t) for t in config.snapshot_times)
    state = TimeState(u0)

    def take_snapshots(st):
        while pending and pending[0][0] <= st.step_index:
            pending.pop(0)
            art.snapshots.append(_snapshot(st.fields, mesh, gas, st.t, st.step_index))

    take_snapshots(state)
    start = time.perf_counter()
    try:
        for n in range(config.n_steps):
            prev = state
            state, used = advance(prev, dt, disc, config.time, newton, order)
            state.t = (n + 1) * dt
            hist = prev.history if used in ("bdf2", "leapfrog") else None

            level = flux_level_fields(used, prev.fields, state.fields, gas, order)
            f = disc.interface_fluxes(level)
            boundary = BALANCE_WEIGHTS[used][1] * dt * (f[-1] - f[0])
            if used in ("fe", "be", "ec", "ec-quadrature"):
                art.boundary_flux_integral += boundary
            lhs = combine_levels(used, state.fields, prev.fields, hist)
            art.conservation_defects.append(mesh.dx * lhs.sum(axis=0) + boundary)
            art.newton_iterations.append(state.newton_iterations)
            if config.diagnostics:
                art.budgets.append(step_total_entropy_balance(
                    prev.fields, state.fields, used, dt, disc, hist, order,
                    step_index=state.step_index, t=state.t))
            art.steps_taken = state.step_index
            art.fields = state.fields
            take_snapshots(state)
    except (InvalidStateError, BlowUpError, SolverError) as exc:
        art.complete = False
        art.error = str(exc)
    art.wall_time = time.perf_counter() - start
    return art


def _fmt(x):
    return format(float(x), ".17g")


def _write_text(path, text):
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_snapshot_csv(artifacts, directory):
    """One ``snapshot_XXX.csv`` per snapshot (header ``x,rho,u,p,S``); returns the paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for i, snap in enumerate(artifacts.snapshots):
        rows = [SNAPSHOT_HEADER]
        for rec in zip(snap.x, snap.rho, snap.u, snap.p, snap.S):
            rows.append(",".join(map(_fmt, rec)))
        paths.append(_write_text(os.path.join(directory, f"snapshot_{i:03d}.csv"),
                                 "\n".join(rows) + "\n"))
    return paths


def write_entropy_series_csv(artifacts, path):
    if not artifacts.config.diagnostics:
        raise ConfigError("entropy series requested but diagnostics are disabled", "diagnostics")
    rows = [SERIES_HEADER]
    for b in artifacts.budgets:
        rows.append(",".join([str(b.step_index)] + [_fmt(v) for v in (
            b.t, b.total_U, b.total_rhoS, b.boundary_F_left, b.boundary_F_right, b.production)]))
    return _write_text(path, "\n".join(rows) + "\n")


def write_config_echo(config, path):
    return _write_text(path, config.echo())


_PANELS = (("Density", 2), ("Pressure", 4), ("Velocity", 3), ("Specific entropy", 5))


def emit_plot_script(artifacts, path, snapshot_files, series_file=None):
    """Write a gnuplot script rendering every snapshot as a 2x2 panel figure
    and, if given, the cumulative entropy production curve."""
    cfg = artifacts.config
    lines = [
        "# gnuplot script: receding-flow profiles and entropy production",
        "set datafile separator ','",
        "set key off",
        "set terminal pngcairo size 1200,900",
    ]
    for snap, csv in zip(artifacts.snapshots, snapshot_files):
        name = os.path.basename(csv)
        stem = os.path.splitext(name)[0]
        lines += [
            "",
            f"set output '{stem}.png'",
            f"set multiplot layout 2,2 title '{cfg.flux} / {cfg.time}, {cfg.n_cells} cells, "
            f"dt = {cfg.dt:.6g}, t = {snap.t:.6g}'",
        ]
        for title, col in _PANELS:
            lines += [f"set title '{title}'",
                      f"plot '{name}' using 1:{col} skip 1 with linespoints pt 7 ps 0.5"]
        lines.append("unset multiplot")
    if series_file is not None:
        name = os.path.basename(series_file)
        lines += [
            "",
            "set output 'entropy_production.png'",
            "set title 'Cumulative entropy production'",
            "set xlabel 't'",
            "cum = 0",
            f"plot '{name}' using 2:(cum = cum + $7, cum) skip 1 with lines lw 2",
        ]
    return _write_text(path, "\n".join(lines) + "\n")


def write_outputs(artifacts, directory):
    """Write snapshots, entropy series, config echo and plot script into ``directory``."""
    os.makedirs(directory, exist_ok=True)
    out = {"snapshots": write_snapshot_csv(artifacts, directory),
           "config": write_config_echo(artifacts.config, os.path.join(directory, "config.txt"))}
    series = None
    if artifacts.config.diagnostics:
        series = write_entropy_series_csv(artifacts, os.path.join(directory, "entropy_series.csv"))
        out["series"] = series
    out["plot"] = emit_plot_script(artifacts, os.path.join(directory, "plot.gp"),
                                   out["snapshots"], series)
    return out


# --- configuration parsing -------------------------------------------------

_KEYS = ("cells", "xmin", "xmax", "dt", "tfinal", "gamma", "flux", "time", "ic", "snapshots",
         "out", "newton-tol", "quad-order", "es-coeff", "es-kind", "entropy-fix", "bc",
         "diagnostics")
_REQUIRED = ("dt", "tfinal")


def _parse_ic(text):
    kind, _, body = text.partition(":")
    try:
        if kind == "receding":
            vals = [float(v) for v in body.split(",")]
            if len(vals) != 3:
                raise ValueError
            return RecedingIC(*vals)
        if kind == "riemann":
            left, right = body.split(";")
            l = tuple(float(v) for v in left.split(","))
            r = tuple(float(v) for v in right.split(","))
            if len(l) != 3 or len(r) != 3:
                raise ValueError
            return RiemannIC(l, r)
    except ValueError:
        pass
    raise ConfigError(f"cannot parse ic {text!r}; expected receding:<rho0>,<p0>,<u0> "
                      "or riemann:<rhoL,uL,pL;rhoR,uR,pR>", "ic")


def _convert(key, text, conv):
    try:
        return conv(text)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value {text!r} for {key}", key) from None


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def read_config_file(path):
    """Parse ``key=value`` lines (``#`` comments allowed); unknown keys are rejected."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key=value", key)
            if key not in _KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}", key)
            values[key] = value.strip()
    return values


def _argument_parser():
    p = argparse.ArgumentParser(prog="ecfv", description="1D entropy-conservative Euler runs",
                                argument_default=argparse.SUPPRESS)
    p.add_argument("--config", help="key=value file; command-line flags override it")
    for key in _KEYS:
        p.add_argument(f"--{key}", dest=key.replace("-", "_"))
    return p


def parse_config(argv=None, config_file=None):
    """Build a :class:`RunConfig` from command-line flags and an optional file.

    Raises :class:`ConfigError` (with ``key`` set) on unknown keys, missing
    required values or out-of-range settings.
    """
    args, extra = _argument_parser().parse_known_args(argv)
    if extra:
        raise ConfigError(f"unknown arguments: {' '.join(extra)}", extra[0].lstrip("-"))
    cli = {k.replace("_", "-"): v for k, v in vars(args).items()}
    path = cli.pop("config", None) or config_file
    values = read_config_file(path) if path else {}
    values.update(cli)

    for key in _REQUIRED:
        if values.get(key) in (None, ""):
            raise ConfigError(f"missing required setting {key}", key)

    kw = {
        "dt": _convert("dt", values["dt"], float),
        "t_final": _convert("tfinal", values["tfinal"], float),
    }
    simple = {"cells": ("n_cells", int), "xmin": ("x_min", float), "xmax": ("x_max", float),
              "gamma": ("gamma", float), "flux": ("flux", str), "time": ("time", str),
              "newton-tol": ("newton_tol", float), "es-coeff": ("es_coeff", float),
              "es-kind": ("es_kind", str), "entropy-fix": ("entropy_fix", float),
              "bc": ("bc", str), "diagnostics": ("diagnostics", _bool), "out": ("out_dir", str)}
    for key, (name, conv) in simple.items():
        if values.get(key) not in (None, ""):
            kw[name] = _convert(key, values[key], conv)
    if values.get("quad-order") not in (None, ""):
        kw["quad_order"] = _convert("quad-order", values["quad-order"], int)
    if values.get("ic") not in (None, ""):
        kw["ic"] = _parse_ic(values["ic"])
    if values.get("snapshots") not in (None, ""):
        kw["snapshots"] = tuple(_convert("snapshots", t, float)
                                for t in values["snapshots"].split(","))
    config = RunConfig(**kw)
    config.validate()
    return config

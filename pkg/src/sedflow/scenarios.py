"""Scenario assembly, probes/diagnostics, and all file output.

Output formats (CSV with a header row, floats at 17 significant digits so
files serve as bit-faithful regression baselines):

  probe_x<loc>.csv     t, h, ubar, cbar          (one row per step)
  snapshot_t<time>.csv x, y, b, h, ubar, vbar, cbar, froude
  summary.txt          key = value run statistics
  figure tables        named by figure key, see emit_figure_data
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import params as pm
from .config import ScenarioConfig, wavelength_divides
from .params import ModelParams, equilibrium_concentration, steady_equilibrium
from .profiles import (concentration_analytic, concentration_profile_steady,
                       sample_profile, shear_stress_profile,
                       velocity_profile_steady)
from .solver import (FlowState, Grid, SolverError, StepCounters,
                     regularized_speed, run)
from .spectrum import compute_spectrum

FLOAT_FMT = "%.17g"
FIGURE_KEYS = ("concentration_profiles", "velocity_profile", "shear_profile", "spectrum")
FIGURE_PARTICLE_SIZES = (0.6e-4, 1e-4, 1.5e-4)


def build_ripple_bed(grid: Grid, height: float, wavelength: float,
                     phase: float = 0.0) -> np.ndarray:
    """Sinusoidal zero-mean bed, uniform in y, peak-to-trough = height.

    b(x) = (height/2)*sin(2*pi*x/wavelength + phase).  The wavelength must
    divide Lx so the bed is periodic.  The reference scenario uses
    phase = pi/2, which places a trough at x=50 and a crest at x=60.
    """
    if height < 0:
        raise ValueError(f"height must be >= 0, got {height}")
    if wavelength <= 0 or not wavelength_divides(grid.Lx, wavelength):
        raise ValueError(f"wavelength {wavelength} does not divide Lx = {grid.Lx}")
    profile = 0.5 * height * np.sin(2.0 * math.pi * grid.x() / wavelength + phase)
    return np.tile(profile[:, None], (1, grid.ny))


def build_initial_state(config: ScenarioConfig, params: ModelParams) -> FlowState:
    """Initial condition on the configured grid and bed.

    equilibrium_with_perturbation: unit mean depth with a zero-mean
    perturbation A*sin(2*pi*x/Lx) applied to the depth field (the
    conventional seed for roll waves), velocities and concentration at the
    uniform equilibrium.  uniform: explicit constant fields.
    """
    grid = config.grid
    if config.bed.type == "ripple":
        bed = build_ripple_bed(grid, config.bed.height, config.bed.wavelength,
                               config.bed.phase)
    else:
        bed = np.zeros(grid.shape)

    init = config.initial
    if init.type == "equilibrium_with_perturbation":
        eq = steady_equilibrium(params)
        h1d = 1.0 + init.amplitude * np.sin(2.0 * math.pi * grid.x() / grid.Lx)
        h = np.tile(h1d[:, None], (1, grid.ny))
        return FlowState(grid, 0.0, h, np.full(grid.shape, eq.U),
                         np.zeros(grid.shape), np.full(grid.shape, eq.Cbar), bed)
    return FlowState(grid, 0.0, np.full(grid.shape, init.h),
                     np.full(grid.shape, init.ubar), np.full(grid.shape, init.vbar),
                     np.full(grid.shape, init.cbar), bed)


def froude(state: FlowState, params: ModelParams) -> np.ndarray:
    """Froude number qbar/sqrt(g*h) pointwise; > 1 means supercritical."""
    return regularized_speed(state.ubar, state.vbar) / np.sqrt(params.g * state.h)


@dataclass
class ProbeSeries:
    """Time series of (h, ubar, cbar) at the grid node nearest x_location.

    Purely observational: recording reads the state and never mutates it.
    """

    x_location: float
    ix: int
    times: list = field(default_factory=list)
    h: list = field(default_factory=list)
    ubar: list = field(default_factory=list)
    cbar: list = field(default_factory=list)

    @classmethod
    def at(cls, x_location: float, grid: Grid) -> "ProbeSeries":
        return cls(x_location=x_location, ix=int(round(x_location / grid.dx)) % grid.nx)

    def __call__(self, state: FlowState):
        self.times.append(state.t)
        self.h.append(float(state.h[self.ix, 0]))
        self.ubar.append(float(state.ubar[self.ix, 0]))
        self.cbar.append(float(state.cbar[self.ix, 0]))


class SnapshotWriter:
    """Writes snapshot CSVs when the run lands exactly on a requested time."""

    def __init__(self, times, params: ModelParams, out_dir: Path):
        self.remaining = sorted(float(t) for t in times)
        self.params = params
        self.out_dir = Path(out_dir)
        self.paths = []

    def __call__(self, state: FlowState):
        while self.remaining and state.t >= self.remaining[0]:
            target = self.remaining.pop(0)
            path = self.out_dir / f"snapshot_t{target:g}.csv"
            write_snapshot_csv(state, self.params, path)
            self.paths.append(path)


def write_probe_csv(series: ProbeSeries, path):
    data = np.column_stack([series.times, series.h, series.ubar, series.cbar])
    np.savetxt(path, data, fmt=FLOAT_FMT, delimiter=",",
               header="t,h,ubar,cbar", comments="")


def write_snapshot_csv(state: FlowState, params: ModelParams, path):
    grid = state.grid
    xx = np.repeat(grid.x(), grid.ny)
    yy = np.tile(grid.y(), grid.nx)
    fr = froude(state, params)
    data = np.column_stack([xx, yy, state.b.ravel(), state.h.ravel(),
                            state.ubar.ravel(), state.vbar.ravel(),
                            state.cbar.ravel(), fr.ravel()])
    np.savetxt(path, data, fmt=FLOAT_FMT, delimiter=",",
               header="x,y,b,h,ubar,vbar,cbar,froude", comments="")


@dataclass
class ScenarioResult:
    final_state: FlowState
    summary: dict
    probe_paths: list
    snapshot_paths: list
    out_dir: Path


def _write_summary(path, summary):
    with open(path, "w") as f:
        for key, value in summary.items():
            if isinstance(value, float):
                f.write(f"{key} = {value:.17g}\n")
            else:
                f.write(f"{key} = {value}\n")


def run_scenario(config: ScenarioConfig, out_dir=None) -> ScenarioResult:
    """Run the configured scenario and write probes, snapshots and summary.

    On solver failure the probe series and summary collected so far are
    still flushed before the error propagates.
    """
    out = Path(out_dir if out_dir is not None else config.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    params = config.params
    state0 = build_initial_state(config, params)
    probes = [ProbeSeries.at(x, config.grid) for x in config.output.probes]
    snapshots = SnapshotWriter(config.output.snapshot_times, params, out)
    counters = StepCounters()
    mass0 = float(state0.h.sum())
    started = time.perf_counter()
    summary = {"status": "running", "model": config.model.type}

    try:
        final = run(state0, params, config.model.type, config.model.t_end,
                    [*probes, snapshots], cfl=config.model.cfl,
                    stop_times=config.output.snapshot_times, counters=counters)
        summary["status"] = "ok"
    except SolverError as err:
        summary["status"] = f"failed: {err}"
        raise
    finally:
        wall = time.perf_counter() - started
        probe_paths = []
        for probe in probes:
            path = out / f"probe_x{probe.x_location:g}.csv"
            write_probe_csv(probe, path)
            probe_paths.append(path)
        last = probes[0].times[-1] if probes and probes[0].times else state0.t
        summary.update(t_final=last, steps=counters.steps,
                       clamped_cells=counters.clamped_cells, wall_time_s=wall)
        if summary["status"] == "ok":
            mass1 = float(final.h.sum())
            summary.update(
                mass_initial=mass0, mass_final=mass1,
                mass_drift_rel=abs(mass1 - mass0) / mass0,
                h_min=float(final.h.min()), h_max=float(final.h.max()),
                ubar_min=float(final.ubar.min()), ubar_max=float(final.ubar.max()),
                vbar_min=float(final.vbar.min()), vbar_max=float(final.vbar.max()),
                cbar_min=float(final.cbar.min()), cbar_max=float(final.cbar.max()),
            )
        _write_summary(out / "summary.txt", summary)

    return ScenarioResult(final_state=final, summary=summary,
                          probe_paths=probe_paths, snapshot_paths=snapshots.paths,
                          out_dir=out)


def _write_table(path, header, columns):
    np.savetxt(path, np.column_stack(columns), fmt=FLOAT_FMT, delimiter=",",
               header=header, comments="")


def emit_figure_data(which: str, params: ModelParams, out_dir, samples: int = 101,
                     n_modes: int = 5) -> list:
    """Write the CSV table(s) behind one figure key; returns the paths.

    concentration_profiles: steady polynomial profile next to the analytic
    approximation for three particle sizes at the configured slope, at the
    nominal steady operating point q = 18.7*sqrt(tan theta).
    velocity_profile: u(Z)/u(1) (slope-independent shape).
    shear_profile: tau_xz(Z)/tan(theta).
    spectrum: (family, k, lambda) table for velocity and concentration modes.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    zs = np.arange(samples) / (samples - 1)
    q = pm.EQUILIBRIUM_SPEED_COEFF * math.sqrt(params.tan_theta)
    paths = []

    if which == "concentration_profiles":
        for d in FIGURE_PARTICLE_SIZES:
            p = replace(params, d=d)
            cbar = equilibrium_concentration(p, q)
            steady = concentration_profile_steady(zs, cbar, p.c_ae, p.w_f, q)
            analytic = concentration_analytic(zs, p.c_ae, p.w_f, q)
            path = out / f"concentration_profiles_d{d:g}.csv"
            _write_table(path, "Z,c_steady,c_analytic", [zs, steady, analytic])
            paths.append(path)
    elif which == "velocity_profile":
        prof = sample_profile(
            lambda z: velocity_profile_steady(z, params.tan_theta, params.c_t),
            samples, kind="velocity")
        ratio = prof.values / prof.values[-1]
        path = out / "velocity_profile.csv"
        _write_table(path, "Z,u_ratio", [prof.zs, ratio])
        paths.append(path)
    elif which == "shear_profile":
        values = shear_stress_profile(zs, 1.0)
        path = out / "shear_profile.csv"
        _write_table(path, "Z,tau_ratio", [zs, values])
        paths.append(path)
    elif which == "spectrum":
        vel, conc = compute_spectrum(params.c_u, params.c_t, 1.0, q, n=n_modes)
        path = out / "spectrum.csv"
        with open(path, "w") as f:
            f.write("family,k,lambda\n")
            for name, res in (("velocity", vel), ("concentration", conc)):
                for k, lam in zip(res.ks, res.lambdas):
                    f.write(f"{name},{k:.17g},{lam:.17g}\n")
        paths.append(path)
    else:
        raise ValueError(f"unknown figure key {which!r}; expected one of {FIGURE_KEYS}")
    return paths

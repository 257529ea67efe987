"""Self-contained invariant suite behind the `check` CLI subcommand.

Each check returns (name, status, detail) with status "pass", "fail" or
"xfail".  "xfail" marks the one documented defect: the printed linearised
advection coefficients (1.01, 3.09) differ from the exponential form by up
to 3.0e-3 (the constant terms alone differ by 0.003), so the 2e-3
consistency bound cannot hold; it is reported, not hidden.
"""

from __future__ import annotations

import math

import numpy as np

from . import params as pm
from .params import ModelParams, steady_equilibrium
from .solver import (FlowState, Grid, cfl_dt, run, step_rk4, tendency_full,
                     tendency_leading)

ADVECTION_CONSISTENCY_BOUND = 2e-3


def _test_state(nx=32, ny=8, seed=0):
    grid = Grid(nx=nx, ny=ny, Lx=20.0, Ly=10.0)
    rng = np.random.default_rng(seed)
    x = grid.x()[:, None]
    y = grid.y()[None, :]
    h = 1.0 + 0.08 * np.sin(2 * math.pi * x / grid.Lx) * np.cos(2 * math.pi * y / grid.Ly)
    h = h + 0.01 * rng.random(grid.shape)
    u = 1.5 + 0.2 * rng.standard_normal(grid.shape)
    v = 0.1 * rng.standard_normal(grid.shape)
    c = 0.003 + 0.001 * rng.random(grid.shape)
    b = 0.05 * np.sin(2 * math.pi * x / 10.0) * np.ones(grid.shape)
    return FlowState(grid, 0.0, h, u, v, c, b)


def _transposed(state):
    grid = state.grid
    grid_t = Grid(nx=grid.ny, ny=grid.nx, Lx=grid.Ly, Ly=grid.Lx)
    return FlowState(grid_t, state.t, state.h.T.copy(), state.vbar.T.copy(),
                     state.ubar.T.copy(), state.cbar.T.copy(), state.b.T.copy())


def check_axis_symmetry_leading(params=None):
    """Transposing the state and moving the slope forcing to y must
    transpose the leading tendency bit-exactly."""
    p = params or ModelParams()
    state = _test_state()
    t = tendency_leading(state, p, forcing=(p.tan_theta, 0.0))
    tt = tendency_leading(_transposed(state), p, forcing=(0.0, p.tan_theta))
    ok = (np.array_equal(tt.dh, t.dh.T) and np.array_equal(tt.du, t.dv.T)
          and np.array_equal(tt.dv, t.du.T) and np.array_equal(tt.dc, t.dc.T))
    return ("axis symmetry (leading, exact)", "pass" if ok else "fail",
            "bitwise transpose equivariance")


def check_axis_symmetry_full(params=None):
    """Same for the comprehensive model with the asymmetric 0.00817/0.00809
    depth-gradient pair whitelisted (dropped on both sides)."""
    p = params or ModelParams()
    state = _test_state()
    t = tendency_full(state, p, forcing=(p.tan_theta, 0.0), depth_gradient_pair=False)
    tt = tendency_full(_transposed(state), p, forcing=(0.0, p.tan_theta),
                       depth_gradient_pair=False)
    ok = (np.array_equal(tt.dh, t.dh.T) and np.array_equal(tt.du, t.dv.T)
          and np.array_equal(tt.dv, t.du.T) and np.array_equal(tt.dc, t.dc.T))
    return ("axis symmetry (full, pair whitelisted)", "pass" if ok else "fail",
            "bitwise transpose equivariance without the depth-gradient pair")


def check_rest_state(params=None):
    """Zero slope, zero fields on a flat bed must stay exactly at rest."""
    p = ModelParams(tan_theta=0.0)
    grid = Grid(nx=16, ny=4, Lx=10.0, Ly=4.0)
    zeros = np.zeros(grid.shape)
    state = FlowState(grid, 0.0, np.ones(grid.shape), zeros, zeros, zeros, zeros)
    for rhs in ("leading", "full"):
        out = run(state, p, rhs, 0.5)
        if not (np.array_equal(out.h, state.h) and np.array_equal(out.ubar, zeros)
                and np.array_equal(out.vbar, zeros) and np.array_equal(out.cbar, zeros)):
            return ("rest-state preservation", "fail", f"{rhs} model drifted")
    return ("rest-state preservation", "pass", "leading and full models")


def check_mass_conservation(params=None):
    p = params or ModelParams()
    state = _test_state(nx=64, ny=4)
    mass0 = state.h.sum()
    for _ in range(300):
        state = step_rk4(state, p, cfl_dt(state, p), "full")
    drift = abs(state.h.sum() - mass0) / mass0
    ok = drift < 1e-10
    return ("mass conservation (300 steps)", "pass" if ok else "fail",
            f"relative drift {drift:.3e}")


def check_fixed_point(params=None):
    p = params or ModelParams()
    eq = steady_equilibrium(p)
    grid = Grid(nx=32, ny=4, Lx=20.0, Ly=4.0)
    state = FlowState(grid, 0.0, np.ones(grid.shape),
                      np.full(grid.shape, eq.U), np.zeros(grid.shape),
                      np.full(grid.shape, eq.Cbar), np.zeros(grid.shape))
    t = tendency_full(state, p)
    resid = max(abs(t.dh).max(), abs(t.du).max(), abs(t.dv).max(), abs(t.dc).max())
    ok = resid < 1e-10
    return ("uniform equilibrium residual", "pass" if ok else "fail",
            f"max |tendency| = {resid:.3e}")


def check_equilibrium_persistence(params=None):
    p = params or ModelParams()
    eq = steady_equilibrium(p)
    grid = Grid(nx=32, ny=4, Lx=20.0, Ly=4.0)
    state0 = FlowState(grid, 0.0, np.ones(grid.shape),
                       np.full(grid.shape, eq.U), np.zeros(grid.shape),
                       np.full(grid.shape, eq.Cbar), np.zeros(grid.shape))
    state = state0
    for _ in range(200):
        state = step_rk4(state, p, cfl_dt(state, p), "full")
    drift = max(abs(state.h - state0.h).max(), abs(state.ubar - state0.ubar).max(),
                abs(state.vbar - state0.vbar).max(), abs(state.cbar - state0.cbar).max())
    ok = drift < 1e-8
    return ("equilibrium persistence (200 steps)", "pass" if ok else "fail",
            f"max drift {drift:.3e}")


def check_translation_equivariance(params=None):
    """Rolling the initial fields by one ripple wavelength must roll the
    solution bit-exactly (periodic grid, matching shift)."""
    p = params or ModelParams()
    grid = Grid(nx=100, ny=2, Lx=100.0, Ly=10.0)
    from .scenarios import build_ripple_bed
    eq = steady_equilibrium(p)
    bed = build_ripple_bed(grid, 0.4, 20.0, phase=math.pi / 2)
    h = 1.0 + 0.2 * np.sin(2 * math.pi * grid.x() / grid.Lx)
    state = FlowState(grid, 0.0, np.tile(h[:, None], (1, grid.ny)),
                      np.full(grid.shape, eq.U), np.zeros(grid.shape),
                      np.full(grid.shape, eq.Cbar), bed)
    shift = int(round(20.0 / grid.dx))
    rolled = FlowState(grid, 0.0, np.roll(state.h, shift, 0), np.roll(state.ubar, shift, 0),
                       np.roll(state.vbar, shift, 0), np.roll(state.cbar, shift, 0),
                       np.roll(state.b, shift, 0))
    out = run(state, p, "full", 1.0)
    out_rolled = run(rolled, p, "full", 1.0)
    ok = all(np.array_equal(np.roll(getattr(out, f), shift, 0), getattr(out_rolled, f))
             for f in ("h", "ubar", "vbar", "cbar"))
    return ("translation equivariance", "pass" if ok else "fail",
            f"roll by {shift} cells over t=1")


def check_v_stays_zero(params=None):
    """y-uniform data with vbar = 0 must keep vbar identically zero."""
    p = params or ModelParams()
    grid = Grid(nx=64, ny=4, Lx=40.0, Ly=10.0)
    eq = steady_equilibrium(p)
    h = 1.0 + 0.2 * np.sin(2 * math.pi * grid.x() / grid.Lx)
    state = FlowState(grid, 0.0, np.tile(h[:, None], (1, grid.ny)),
                      np.full(grid.shape, eq.U), np.zeros(grid.shape),
                      np.full(grid.shape, eq.Cbar), np.zeros(grid.shape))
    out = run(state, p, "full", 2.0)
    ok = np.all(out.vbar == 0.0)
    return ("vbar stays exactly zero (y-uniform)", "pass" if ok else "fail",
            f"max |vbar| = {abs(out.vbar).max():.3e}")


def check_probe_noninvasive(params=None):
    from .scenarios import ProbeSeries
    p = params or ModelParams()
    state = _test_state(nx=48, ny=4)
    probe = ProbeSeries.at(5.0, state.grid)
    out_plain = run(state, p, "full", 0.5)
    out_probed = run(state, p, "full", 0.5, [probe])
    ok = all(np.array_equal(getattr(out_plain, f), getattr(out_probed, f))
             for f in ("h", "ubar", "vbar", "cbar")) and out_plain.t == out_probed.t
    return ("probe extraction is non-invasive", "pass" if ok else "fail",
            f"{len(probe.times)} samples recorded")


def check_advection_consistency(params=None):
    """Exponential vs linearised advection factor on w_f/q in [0, 0.02].

    The printed rounding (1.007 vs 1.01) makes the max deviation 3.0e-3, so
    the 2e-3 bound is expected to fail; reported as xfail with the measured
    value.
    """
    r = np.linspace(0.0, 0.02, 2001)
    exp_form = pm.ADVECTION_EXP_AMP * np.exp(-pm.ADVECTION_EXP_RATE * r)
    lin_form = pm.ADVECTION_C0 - pm.ADVECTION_C1 * r
    dev = float(np.max(np.abs(exp_form - lin_form)))
    if dev < ADVECTION_CONSISTENCY_BOUND:
        return ("advection-form consistency < 2e-3", "pass", f"max deviation {dev:.3e}")
    return ("advection-form consistency < 2e-3", "xfail",
            f"max deviation {dev:.3e}: constant terms 1.007 vs 1.01 differ by 3e-3")


ALL_CHECKS = (
    check_rest_state,
    check_axis_symmetry_leading,
    check_axis_symmetry_full,
    check_mass_conservation,
    check_fixed_point,
    check_equilibrium_persistence,
    check_translation_equivariance,
    check_v_stays_zero,
    check_probe_noninvasive,
    check_advection_consistency,
)


def run_checks(report=print) -> bool:
    """Run every invariant check; returns True when none failed outright."""
    ok = True
    for check in ALL_CHECKS:
        name, status, detail = check()
        report(f"{status.upper():5s} {name}: {detail}")
        if status == "fail":
            ok = False
    return ok

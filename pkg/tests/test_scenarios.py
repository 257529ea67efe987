"""Configuration, scenario assembly, probes, file outputs, and the CLI."""

import math

import numpy as np
import pytest

from sedflow import (ConfigError, FlowState, Grid, ModelParams, ProbeSeries,
                     build_initial_state, build_ripple_bed, emit_figure_data,
                     froude, parse_config, parse_config_text, run_scenario,
                     serialize_config, steady_equilibrium)
from sedflow.checks import (check_probe_noninvasive,
                            check_translation_equivariance, check_v_stays_zero)
from sedflow.config import (BedConfig, InitialConfig, OutputConfig,
                            RunSettings, ScenarioConfig)
from sedflow.cli import main


def small_config(**overrides):
    base = dict(
        grid=Grid(nx=64, ny=2, Lx=100.0, Ly=10.0),
        model=RunSettings(type="full", t_end=2.0),
        output=OutputConfig(dir="out", probes=(50.0, 60.0), snapshot_times=(1.0, 2.0)),
    )
    base.update(overrides)
    return ScenarioConfig(**base)


# --- config parsing -----------------------------------------------------------

def test_empty_config_gives_reference_scenario_defaults():
    cfg = parse_config_text("")
    assert cfg == ScenarioConfig()
    assert cfg.grid == Grid(nx=512, ny=4, Lx=100.0, Ly=10.0)
    assert cfg.bed == BedConfig(type="ripple", height=0.4, wavelength=20.0,
                                phase=math.pi / 2)
    assert cfg.initial.type == "equilibrium_with_perturbation"
    assert cfg.initial.amplitude == 0.2
    assert cfg.model.type == "full"
    assert cfg.model.t_end == 180.0
    assert cfg.output.probes == (50.0, 60.0)
    assert cfg.output.snapshot_times == (180.0,)


def test_config_parses_values_and_comments():
    cfg = parse_config_text("""
# reduced run
params.tan_theta = 0.02
grid.nx = 128        # coarse
grid.ny = 2
bed.height = 0.1
model.t_end = 5.0
output.probes = 10, 30.5
""")
    assert cfg.params.tan_theta == 0.02
    assert cfg.grid.nx == 128
    assert cfg.bed.height == 0.1
    assert cfg.output.probes == (10.0, 30.5)


def test_config_unknown_key_reports_line():
    with pytest.raises(ConfigError, match=r":3: unknown key 'bed\.heihgt'"):
        parse_config_text("\n\nbed.heihgt = 0.4\n")


def test_config_bad_value_reports_line():
    with pytest.raises(ConfigError, match=":1"):
        parse_config_text("grid.nx = twelve\n")
    with pytest.raises(ConfigError, match="model.type"):
        parse_config_text("model.type = sideways\n")
    with pytest.raises(ConfigError, match="expected"):
        parse_config_text("just some words\n")


def test_config_validation_errors():
    with pytest.raises(ConfigError, match="bed.height"):
        parse_config_text("bed.height = -0.1\n")
    with pytest.raises(ConfigError, match="does not divide"):
        parse_config_text("bed.wavelength = 30\n")
    with pytest.raises(ConfigError, match="t_end"):
        parse_config_text("model.t_end = -1\n")
    with pytest.raises(ConfigError, match="probes"):
        parse_config_text("output.probes = 150\n")
    with pytest.raises(ConfigError, match="amplitude"):
        parse_config_text("initial.amplitude = 1.5\n")
    with pytest.raises(ConfigError, match="tan_theta"):
        parse_config_text("params.tan_theta = -0.5\n")


def test_config_round_trip():
    cfg = parse_config_text("""
params.tan_theta = 0.015
params.d = 1e-4
grid.nx = 200
grid.Lx = 50
bed.type = ripple
bed.wavelength = 10
initial.amplitude = 0.05
model.type = leading
model.t_end = 12.5
output.probes = 5, 25
output.snapshot_times = 6.25, 12.5
output.samples = 51
""")
    assert parse_config_text(serialize_config(cfg)) == cfg
    # and the default config round-trips too
    assert parse_config_text(serialize_config(ScenarioConfig())) == ScenarioConfig()


def test_parse_config_from_file(tmp_path):
    path = tmp_path / "case.cfg"
    path.write_text("model.t_end = 3.0\n")
    assert parse_config(path).model.t_end == 3.0
    with pytest.raises(ConfigError, match="case2"):
        path2 = tmp_path / "case2.cfg"
        path2.write_text("nonsense\n")
        parse_config(path2)


# --- bed and initial state ------------------------------------------------------

def test_ripple_bed_zero_mean_and_height():
    grid = Grid(nx=500, ny=3, Lx=100.0, Ly=10.0)
    bed = build_ripple_bed(grid, 0.4, 20.0, phase=math.pi / 2)
    assert abs(bed.sum()) / bed.size < 1e-12
    assert bed.max() - bed.min() == pytest.approx(0.4, abs=1e-10)
    # uniform in y
    assert np.all(bed[:, 0:1] == bed)


def test_ripple_bed_phase_places_trough_and_crest():
    # default scenario phase: trough at x=50, crest at x=60
    grid = Grid(nx=500, ny=1, Lx=100.0, Ly=10.0)
    bed = build_ripple_bed(grid, 0.4, 20.0, phase=math.pi / 2)
    i50 = int(round(50.0 / grid.dx))
    i60 = int(round(60.0 / grid.dx))
    assert bed[i50, 0] == pytest.approx(-0.2, abs=1e-12)
    assert bed[i60, 0] == pytest.approx(0.2, abs=1e-12)


def test_ripple_bed_flat_when_height_zero():
    grid = Grid(nx=100, ny=2, Lx=100.0, Ly=10.0)
    assert np.all(build_ripple_bed(grid, 0.0, 20.0) == 0.0)


def test_ripple_bed_rejects_nondivisible_wavelength():
    grid = Grid(nx=100, ny=2, Lx=100.0, Ly=10.0)
    with pytest.raises(ValueError):
        build_ripple_bed(grid, 0.4, 30.0)
    with pytest.raises(ValueError):
        build_ripple_bed(grid, -0.1, 20.0)


def test_initial_state_unperturbed_is_equilibrium():
    cfg = small_config(initial=InitialConfig(amplitude=0.0))
    params = cfg.params
    state = build_initial_state(cfg, params)
    eq = steady_equilibrium(params)
    assert np.all(state.h == 1.0)
    assert np.all(state.ubar == eq.U)
    assert np.all(state.vbar == 0.0)
    assert np.all(state.cbar == eq.Cbar)


def test_initial_state_perturbation_statistics():
    cfg = ScenarioConfig()  # nx=512, amplitude 0.2
    state = build_initial_state(cfg, cfg.params)
    assert abs(state.h.mean() - 1.0) < 1e-12
    assert state.h.max() == pytest.approx(1.2, abs=1e-12)
    assert state.h.min() == pytest.approx(0.8, abs=1e-12)


def test_initial_state_uniform_fields():
    cfg = small_config(initial=InitialConfig(type="uniform", h=0.7, ubar=1.1,
                                             vbar=0.0, cbar=0.002),
                       bed=BedConfig(type="flat"))
    state = build_initial_state(cfg, cfg.params)
    assert np.all(state.h == 0.7)
    assert np.all(state.ubar == 1.1)
    assert np.all(state.b == 0.0)


# --- froude ---------------------------------------------------------------------

def test_froude_values():
    p = ModelParams()
    grid = Grid(nx=4, ny=2, Lx=2.0, Ly=1.0)

    def state_with(h, u):
        return FlowState(grid, 0.0, np.full(grid.shape, h), np.full(grid.shape, u),
                         np.zeros(grid.shape), np.zeros(grid.shape), np.zeros(grid.shape))

    assert froude(state_with(1.0, 1.86), p)[0, 0] == pytest.approx(1.86, rel=1e-12)
    assert froude(state_with(1.0, 0.0), p)[0, 0] < 1e-6
    assert froude(state_with(4.0, 2.0), p)[0, 0] == pytest.approx(1.0, rel=1e-12)


# --- scenario runs ----------------------------------------------------------------

def test_run_scenario_outputs(tmp_path):
    cfg = small_config()
    result = run_scenario(cfg, out_dir=tmp_path)
    assert result.summary["status"] == "ok"
    assert result.summary["mass_drift_rel"] < 1e-12
    assert (tmp_path / "summary.txt").exists()

    for name in ("probe_x50.csv", "probe_x60.csv"):
        data = np.genfromtxt(tmp_path / name, delimiter=",", names=True)
        assert set(data.dtype.names) == {"t", "h", "ubar", "cbar"}
        assert np.all(np.diff(data["t"]) > 0)
        assert data["t"][0] == 0.0 and data["t"][-1] == 2.0

    for name in ("snapshot_t1.csv", "snapshot_t2.csv"):
        snap = np.genfromtxt(tmp_path / name, delimiter=",", names=True)
        assert set(snap.dtype.names) == {"x", "y", "b", "h", "ubar", "vbar", "cbar", "froude"}
        assert snap.size == cfg.grid.nx * cfg.grid.ny


def test_run_scenario_flat_equilibrium_probes_constant(tmp_path):
    cfg = small_config(bed=BedConfig(type="flat"),
                       initial=InitialConfig(amplitude=0.0),
                       output=OutputConfig(probes=(25.0,), snapshot_times=(2.0,)))
    result = run_scenario(cfg, out_dir=tmp_path)
    data = np.genfromtxt(tmp_path / "probe_x25.csv", delimiter=",", names=True)
    for name in ("h", "ubar", "cbar"):
        assert np.abs(data[name] - data[name][0]).max() < 1e-8
    assert result.summary["clamped_cells"] == 0


def test_run_scenario_flushes_on_failure(tmp_path):
    cfg = ScenarioConfig(
        grid=Grid(nx=100, ny=2, Lx=100.0, Ly=10.0),
        bed=BedConfig(type="ripple", height=0.6, wavelength=20.0),
        initial=InitialConfig(type="uniform", h=0.05, ubar=3.0),
        model=RunSettings(type="full", t_end=50.0),
        output=OutputConfig(probes=(50.0,), snapshot_times=(50.0,)),
    )
    from sedflow.solver import NonpositiveDepthError
    with pytest.raises(NonpositiveDepthError) as info:
        run_scenario(cfg, out_dir=tmp_path)
    assert info.value.t is not None
    assert (tmp_path / "probe_x50.csv").exists()
    summary = (tmp_path / "summary.txt").read_text()
    assert "failed" in summary


def test_run_scenario_leading_and_reference_models(tmp_path):
    for model in ("leading", "reference"):
        cfg = small_config(model=RunSettings(type=model, t_end=1.0),
                           output=OutputConfig(probes=(10.0,), snapshot_times=(1.0,)))
        result = run_scenario(cfg, out_dir=tmp_path / model)
        assert result.summary["status"] == "ok"


def test_probe_records_nearest_node():
    grid = Grid(nx=512, ny=4, Lx=100.0, Ly=10.0)
    probe = ProbeSeries.at(60.0, grid)
    assert probe.ix == 307  # 60/0.1953125 = 307.2 rounds down to the nearest node


def test_probe_noninvasive_and_symmetries():
    for check in (check_probe_noninvasive, check_v_stays_zero,
                  check_translation_equivariance):
        name, status, detail = check()
        assert status == "pass", f"{name}: {detail}"


# --- figure data -------------------------------------------------------------------

def test_emit_concentration_profiles(tmp_path):
    paths = emit_figure_data("concentration_profiles", ModelParams(), tmp_path)
    assert len(paths) == 3
    for path in paths:
        table = np.genfromtxt(path, delimiter=",", names=True)
        assert set(table.dtype.names) == {"Z", "c_steady", "c_analytic"}
        assert table["Z"][0] == 0.0 and table["Z"][-1] == 1.0
    # the smallest particle size tracks the analytic curve within 15%
    small = np.genfromtxt(tmp_path / "concentration_profiles_d6e-05.csv",
                          delimiter=",", names=True)
    mask = (small["Z"] >= 0.1) & (small["Z"] <= 0.9)
    dev = np.abs(small["c_steady"][mask] - small["c_analytic"][mask])
    assert np.max(dev / np.abs(small["c_analytic"][mask])) < 0.15


def test_emit_velocity_profile(tmp_path):
    (path,) = emit_figure_data("velocity_profile", ModelParams(), tmp_path)
    table = np.genfromtxt(path, delimiter=",", names=True)
    assert table["u_ratio"][-1] == 1.0
    assert np.all(np.diff(table["u_ratio"]) > 0)


def test_emit_shear_profile(tmp_path):
    (path,) = emit_figure_data("shear_profile", ModelParams(), tmp_path)
    table = np.genfromtxt(path, delimiter=",", names=True)
    assert table["tau_ratio"][0] == 0.997
    assert abs(table["tau_ratio"][-1]) < 0.01


def test_emit_spectrum(tmp_path):
    (path,) = emit_figure_data("spectrum", ModelParams(), tmp_path)
    table = np.genfromtxt(path, delimiter=",", names=True,
                          dtype=None, encoding="utf-8")
    assert set(table.dtype.names) == {"family", "k", "lambda_"} or \
        set(table.dtype.names) == {"family", "k", "lambda"}
    assert np.all(table["k"] > math.pi)


def test_emit_unknown_key(tmp_path):
    with pytest.raises(ValueError, match="unknown figure key"):
        emit_figure_data("wiggles", ModelParams(), tmp_path)


# --- CLI ----------------------------------------------------------------------------

def test_cli_equilibrium(capsys):
    assert main(["equilibrium", "--tan-theta", "0.01", "--d", "6e-5"]) == 0
    out = capsys.readouterr().out
    assert "U = " in out and "c_ae = " in out


def test_cli_spectrum(capsys):
    assert main(["spectrum", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert "family,k,lambda" in out
    assert out.count("velocity,") == 3


def test_cli_figures(tmp_path, capsys):
    assert main(["figures", "shear_profile", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "shear_profile.csv").exists()


def test_cli_run_small_scenario(tmp_path, capsys):
    cfg = tmp_path / "case.cfg"
    cfg.write_text(
        "grid.nx = 64\ngrid.ny = 2\nmodel.t_end = 1.0\n"
        "output.snapshot_times = 1.0\noutput.probes = 50\n")
    assert main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "snapshot_t1.csv").exists()
    assert "status = ok" in capsys.readouterr().out


def test_cli_run_parse_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bed.height = -1\n")
    assert main(["run", str(cfg)]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_run_missing_file(capsys):
    assert main(["run", "/nonexistent/path.cfg"]) == 1


def test_cli_run_solver_failure(tmp_path, capsys):
    cfg = tmp_path / "crash.cfg"
    cfg.write_text(
        "grid.nx = 100\ngrid.ny = 2\n"
        "bed.height = 0.6\n"
        "initial.type = uniform\ninitial.h = 0.05\ninitial.ubar = 3.0\n"
        "model.t_end = 50\noutput.probes = 50\noutput.snapshot_times = 50\n")
    assert main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 2
    assert "solver failure" in capsys.readouterr().err


def test_cli_figures_bad_key():
    with pytest.raises(SystemExit):
        main(["figures", "not-a-key"])


def test_cli_check_suite(capsys):
    assert main(["check"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    # the documented advection-coefficient defect is reported, not hidden
    assert "XFAIL" in out and "3e-3" in out

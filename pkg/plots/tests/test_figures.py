"""Rendering tests against real solver CSV outputs (frozen under data/)."""

import hashlib
from pathlib import Path

import pytest

from sedflow_plots import (load_csv, plot_profiles, plot_shear_profile,
                           plot_snapshot, plot_spectrum, plot_steepness,
                           plot_timeseries, plot_velocity_profile)
from sedflow_plots.cli import FIGURE_KEYS, main

DATA = Path(__file__).parent / "data"

PROFILE_CSVS = sorted(DATA.glob("concentration_profiles_d*.csv"))
PROBE_CSVS = [DATA / "probe_x50.csv", DATA / "probe_x60.csv"]


def file_hash(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def assert_svg(path):
    head = Path(path).read_bytes()[:200]
    assert head.startswith(b"<?xml"), f"{path} is not an SVG"


# --- individual figure functions -------------------------------------------------

def test_plot_profiles_three_sizes(tmp_path):
    out = plot_profiles(PROFILE_CSVS, tmp_path / "profiles.svg")
    assert_svg(out)


def test_plot_profiles_single_series(tmp_path):
    out = plot_profiles(PROFILE_CSVS[:1], tmp_path / "one.svg")
    assert_svg(out)


def test_plot_timeseries_two_probes(tmp_path):
    out = plot_timeseries(PROBE_CSVS, tmp_path / "ts.svg")
    assert_svg(out)


def test_plot_snapshot(tmp_path):
    out = plot_snapshot(DATA / "snapshot_t30.csv", tmp_path / "snap.svg")
    assert_svg(out)


def test_plot_steepness(tmp_path):
    out = plot_steepness(DATA / "snapshot_t30.csv", DATA / "snapshot_steep_t30.csv",
                         tmp_path / "steep.svg")
    assert_svg(out)


def test_plot_velocity_shear_spectrum(tmp_path):
    assert_svg(plot_velocity_profile(DATA / "velocity_profile.csv", tmp_path / "v.svg"))
    assert_svg(plot_shear_profile(DATA / "shear_profile.csv", tmp_path / "s.svg"))
    assert_svg(plot_spectrum(DATA / "spectrum.csv", tmp_path / "k.svg"))


def test_png_output(tmp_path):
    out = plot_shear_profile(DATA / "shear_profile.csv", tmp_path / "s.png", fmt="png")
    assert Path(out).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


# --- determinism and non-invasiveness ----------------------------------------------

def test_rerender_is_byte_identical(tmp_path):
    a = plot_profiles(PROFILE_CSVS, tmp_path / "a.svg")
    b = plot_profiles(PROFILE_CSVS, tmp_path / "b.svg")
    assert file_hash(a) == file_hash(b)
    c = plot_timeseries(PROBE_CSVS, tmp_path / "c.svg")
    d = plot_timeseries(PROBE_CSVS, tmp_path / "d.svg")
    assert file_hash(c) == file_hash(d)


def test_inputs_never_mutated(tmp_path):
    before = {p: file_hash(p) for p in PROFILE_CSVS + PROBE_CSVS}
    plot_profiles(PROFILE_CSVS, tmp_path / "x.svg")
    plot_timeseries(PROBE_CSVS, tmp_path / "y.svg")
    assert before == {p: file_hash(p) for p in PROFILE_CSVS + PROBE_CSVS}


# --- error handling -----------------------------------------------------------------

def test_missing_file_names_the_file(tmp_path):
    ghost = tmp_path / "ghost.csv"
    with pytest.raises(FileNotFoundError, match="ghost.csv"):
        plot_profiles([ghost], tmp_path / "out.svg")


def test_empty_csv_names_the_file(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError, match="empty.csv"):
        plot_profiles([empty], tmp_path / "out.svg")
    headers_only = tmp_path / "headers.csv"
    headers_only.write_text("Z,c_steady,c_analytic\n")
    with pytest.raises(ValueError, match="no data rows"):
        plot_profiles([headers_only], tmp_path / "out.svg")


def test_missing_column_is_reported(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("Z,c_steady\n0,1\n")
    with pytest.raises(ValueError, match="c_analytic"):
        plot_profiles([bad], tmp_path / "out.svg")


def test_ragged_rows_are_reported(tmp_path):
    bad = tmp_path / "ragged.csv"
    bad.write_text("Z,c_steady,c_analytic\n0,1\n")
    with pytest.raises(ValueError, match="ragged"):
        load_csv(bad)


# --- CLI ------------------------------------------------------------------------------

@pytest.mark.parametrize("key", [k for k in FIGURE_KEYS if k != "steepness"])
def test_cli_renders_every_discoverable_key(key, tmp_path):
    assert main([key, "--in", str(DATA), "--out", str(tmp_path)]) == 0
    assert (tmp_path / f"{key}.svg").exists()


def test_cli_steepness_with_explicit_inputs(tmp_path):
    rc = main(["steepness", "--out", str(tmp_path), "--inputs",
               str(DATA / "snapshot_t30.csv"), str(DATA / "snapshot_steep_t30.csv")])
    assert rc == 0
    assert (tmp_path / "steepness.svg").exists()


def test_cli_steepness_requires_inputs(tmp_path, capsys):
    assert main(["steepness", "--in", str(DATA), "--out", str(tmp_path)]) == 1
    assert "steepness" in capsys.readouterr().err


def test_cli_missing_inputs_dir(tmp_path, capsys):
    assert main(["timeseries", "--in", str(tmp_path / "nowhere"),
                 "--out", str(tmp_path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_rerender_byte_identical(tmp_path):
    main(["snapshot", "--in", str(DATA), "--out", str(tmp_path / "a")])
    main(["snapshot", "--in", str(DATA), "--out", str(tmp_path / "b")])
    assert file_hash(tmp_path / "a" / "snapshot.svg") == file_hash(tmp_path / "b" / "snapshot.svg")

"""Render sedflow CSV outputs as figures.

Consumes only the documented CSV schemas (profile tables with Z columns,
probe series t,h,ubar,cbar, snapshots x,y,b,h,ubar,vbar,cbar,froude, and the
family,k,lambda spectrum table); it has no access to solver internals.
Rendering is deterministic: fixed SVG hash salt, no date metadata, so
re-rendering identical inputs yields byte-identical files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

matplotlib.rcParams["svg.hashsalt"] = "sedflow-plots"

LINESTYLES = ("-", "--", "-.", ":")
SERIES_COLORS = ("tab:blue", "tab:green", "tab:red", "tab:orange", "tab:purple")


@dataclass
class FigureSpec:
    """One renderable figure: key, inputs, output path, and styling knobs."""

    key: str
    inputs: tuple
    output: Path
    xlabel: str = ""
    ylabel: str = ""
    linestyles: tuple = LINESTYLES

    def validate(self):
        for path in self.inputs:
            if not Path(path).exists():
                raise FileNotFoundError(f"input CSV does not exist: {path}")


def load_csv(path, required=()):
    """Load a header+rows CSV into a dict of numpy columns.

    Raises with the file named for missing files, empty tables, and missing
    columns; non-numeric columns (the spectrum's family) stay as strings.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input CSV does not exist: {path}")
    with open(path, newline="") as f:
        rows = [row for row in csv.reader(f) if any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError(f"empty CSV: {path}")
    header = [name.strip() for name in rows[0]]
    data = rows[1:]
    if not data:
        raise ValueError(f"no data rows in {path}")
    missing = set(required) - set(header)
    if missing:
        raise ValueError(f"{path} is missing columns {sorted(missing)}")
    if any(len(row) != len(header) for row in data):
        raise ValueError(f"ragged rows in {path}")
    columns = {}
    for j, name in enumerate(header):
        values = [row[j].strip() for row in data]
        try:
            columns[name] = np.array([float(v) for v in values])
        except ValueError:
            columns[name] = np.array(values)
    return columns


def _new_figure(width=6.0, height=4.5):
    return Figure(figsize=(width, height), dpi=100)


def _save(fig, out_path, fmt=None):
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fmt = fmt or (out_path.suffix.lstrip(".") or "svg")
    if fmt == "svg":
        fig.savefig(out_path, format="svg", metadata={"Date": None})
    else:
        fig.savefig(out_path, format=fmt)
    return out_path


def _y0_slice(table):
    # snapshots carry ny rows per x; plot the first y row
    y0 = table["y"].min()
    mask = table["y"] == y0
    order = np.argsort(table["x"][mask], kind="stable")
    return {name: col[mask][order] for name, col in table.items()}


def plot_profiles(csv_paths, out_path, fmt=None):
    """Concentration profiles: c(Z) on the x-axis against Z, one colour per
    particle size, solid polynomial curve plus dashed analytic curve."""
    if not csv_paths:
        raise ValueError("plot_profiles needs at least one profile CSV")
    fig = _new_figure()
    ax = fig.subplots()
    for i, path in enumerate(csv_paths):
        table = load_csv(path, required=("Z", "c_steady", "c_analytic"))
        color = SERIES_COLORS[i % len(SERIES_COLORS)]
        label = Path(path).stem.replace("concentration_profiles_", "")
        ax.plot(table["c_steady"], table["Z"], "-", color=color, label=label)
        ax.plot(table["c_analytic"], table["Z"], "--", color=color,
                label=f"{label} (analytic)")
    ax.set_xlabel("c(Z)")
    ax.set_ylabel("Z")
    ax.set_ylim(0, 1)
    ax.legend(fontsize=8)
    return _save(fig, out_path, fmt)


def plot_timeseries(probe_csvs, out_path, fmt=None):
    """Probe series: ubar (left axis, blue) and cbar (right axis, red)
    against t; successive probes cycle solid/dashed line styles."""
    if not probe_csvs:
        raise ValueError("plot_timeseries needs at least one probe CSV")
    fig = _new_figure(7.0, 4.0)
    ax_u = fig.subplots()
    ax_c = ax_u.twinx()
    for i, path in enumerate(probe_csvs):
        table = load_csv(path, required=("t", "h", "ubar", "cbar"))
        style = LINESTYLES[i % len(LINESTYLES)]
        label = Path(path).stem
        ax_u.plot(table["t"], table["ubar"], style, color="tab:blue",
                  label=f"ubar {label}")
        ax_c.plot(table["t"], table["cbar"], style, color="tab:red",
                  label=f"cbar {label}")
    ax_u.set_xlabel("t")
    ax_u.set_ylabel("ubar", color="tab:blue")
    ax_c.set_ylabel("cbar", color="tab:red")
    handles, labels = ax_u.get_legend_handles_labels()
    handles2, labels2 = ax_c.get_legend_handles_labels()
    ax_u.legend(handles + handles2, labels + labels2, fontsize=7)
    return _save(fig, out_path, fmt)


def plot_snapshot(snapshot_csv, out_path, fmt=None):
    """Snapshot along x: top panel bed (green, with the dashed zero-mean
    line), depth (black) and velocity (blue); bottom panel depth with the
    concentration (red) on a twin axis."""
    table = _y0_slice(load_csv(snapshot_csv,
                               required=("x", "y", "b", "h", "ubar", "cbar")))
    fig = _new_figure(7.0, 6.0)
    ax_top, ax_bot = fig.subplots(2, 1, sharex=True)
    ax_top.plot(table["x"], table["b"], color="tab:green", label="bed")
    ax_top.axhline(0.0, color="gray", linestyle="--", linewidth=0.8)
    ax_top.plot(table["x"], table["h"], color="black", label="h")
    ax_top.plot(table["x"], table["ubar"], color="tab:blue", label="ubar")
    ax_top.set_ylabel("b, h, ubar")
    ax_top.legend(fontsize=8)

    ax_bot.plot(table["x"], table["h"], color="black", label="h")
    ax_c = ax_bot.twinx()
    ax_c.plot(table["x"], table["cbar"], color="tab:red", label="cbar")
    ax_bot.set_xlabel("x")
    ax_bot.set_ylabel("h")
    ax_c.set_ylabel("cbar", color="tab:red")
    return _save(fig, out_path, fmt)


def plot_steepness(snapshot_low, snapshot_high, out_path, fmt=None):
    """Overlay two snapshots (lower ripple dashed, steeper solid): depth in
    black, concentration in red on a twin axis."""
    fig = _new_figure(7.0, 4.5)
    ax_h = fig.subplots()
    ax_c = ax_h.twinx()
    for path, style, tag in ((snapshot_low, "--", "low"), (snapshot_high, "-", "steep")):
        table = _y0_slice(load_csv(path, required=("x", "y", "h", "cbar")))
        ax_h.plot(table["x"], table["h"], style, color="black", label=f"h ({tag})")
        ax_c.plot(table["x"], table["cbar"], style, color="tab:red",
                  label=f"cbar ({tag})")
    ax_h.set_xlabel("x")
    ax_h.set_ylabel("h")
    ax_c.set_ylabel("cbar", color="tab:red")
    handles, labels = ax_h.get_legend_handles_labels()
    handles2, labels2 = ax_c.get_legend_handles_labels()
    ax_h.legend(handles + handles2, labels + labels2, fontsize=8)
    return _save(fig, out_path, fmt)


def plot_velocity_profile(csv_path, out_path, fmt=None):
    """Normalised velocity shape u(Z)/u(1) against Z."""
    table = load_csv(csv_path, required=("Z", "u_ratio"))
    fig = _new_figure(5.0, 4.5)
    ax = fig.subplots()
    ax.plot(table["u_ratio"], table["Z"], color="tab:blue")
    ax.set_xlabel("u(Z)/u(1)")
    ax.set_ylabel("Z")
    ax.set_ylim(0, 1)
    return _save(fig, out_path, fmt)


def plot_shear_profile(csv_path, out_path, fmt=None):
    """Shear-stress shape tau_xz(Z)/tan(theta) against Z."""
    table = load_csv(csv_path, required=("Z", "tau_ratio"))
    fig = _new_figure(5.5, 4.0)
    ax = fig.subplots()
    ax.plot(table["Z"], table["tau_ratio"], color="tab:blue")
    ax.set_xlabel("Z")
    ax.set_ylabel("tau_xz(Z)/tan(theta)")
    return _save(fig, out_path, fmt)


def plot_spectrum(csv_path, out_path, fmt=None):
    """Decay rates lambda against wavenumber k, one marker set per family."""
    table = load_csv(csv_path, required=("family", "k", "lambda"))
    fig = _new_figure(5.5, 4.0)
    ax = fig.subplots()
    for family, marker, color in (("velocity", "o", "tab:blue"),
                                  ("concentration", "s", "tab:red")):
        mask = table["family"] == family
        ax.plot(table["k"][mask], table["lambda"][mask], marker, color=color,
                linestyle="none", label=family)
    ax.set_xlabel("k")
    ax.set_ylabel("lambda")
    ax.legend(fontsize=8)
    return _save(fig, out_path, fmt)

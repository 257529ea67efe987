"""Figure-rendering CLI: `sedflow-plots <figure-key> --in DIR --out DIR`.

Figure keys mirror the solver's figure tables plus the run outputs:
concentration_profiles, velocity_profile, shear_profile, spectrum,
timeseries (probe_x*.csv), snapshot (latest snapshot_t*.csv), steepness
(two explicit snapshot CSVs via --inputs).  Exit codes: 0 success,
1 missing/ill-formed input or bad arguments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import figures

FIGURE_KEYS = ("concentration_profiles", "velocity_profile", "shear_profile",
               "spectrum", "timeseries", "snapshot", "steepness")


def _default_inputs(key, in_dir: Path):
    if key == "concentration_profiles":
        paths = sorted(in_dir.glob("concentration_profiles_d*.csv"))
        if not paths:
            raise FileNotFoundError(f"no concentration_profiles_d*.csv in {in_dir}")
        return paths
    if key == "velocity_profile":
        return [in_dir / "velocity_profile.csv"]
    if key == "shear_profile":
        return [in_dir / "shear_profile.csv"]
    if key == "spectrum":
        return [in_dir / "spectrum.csv"]
    if key == "timeseries":
        paths = sorted(in_dir.glob("probe_x*.csv"))
        if not paths:
            raise FileNotFoundError(f"no probe_x*.csv in {in_dir}")
        return paths
    if key == "snapshot":
        paths = sorted(in_dir.glob("snapshot_t*.csv"),
                       key=lambda p: float(p.stem.removeprefix("snapshot_t")))
        if not paths:
            raise FileNotFoundError(f"no snapshot_t*.csv in {in_dir}")
        return [paths[-1]]
    raise ValueError(f"steepness needs two snapshot CSVs passed via --inputs")


def render(key, inputs, out_path, fmt=None):
    if key == "concentration_profiles":
        return figures.plot_profiles(inputs, out_path, fmt)
    if key == "velocity_profile":
        return figures.plot_velocity_profile(inputs[0], out_path, fmt)
    if key == "shear_profile":
        return figures.plot_shear_profile(inputs[0], out_path, fmt)
    if key == "spectrum":
        return figures.plot_spectrum(inputs[0], out_path, fmt)
    if key == "timeseries":
        return figures.plot_timeseries(inputs, out_path, fmt)
    if key == "snapshot":
        return figures.plot_snapshot(inputs[0], out_path, fmt)
    if key == "steepness":
        if len(inputs) != 2:
            raise ValueError("steepness needs exactly two snapshot CSVs "
                             "(low ripple first, steep second)")
        return figures.plot_steepness(inputs[0], inputs[1], out_path, fmt)
    raise ValueError(f"unknown figure key {key!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sedflow-plots", description="Render sedflow CSV outputs as figures")
    parser.add_argument("key", choices=FIGURE_KEYS)
    parser.add_argument("--in", dest="in_dir", default="out",
                        help="directory holding the solver's CSV outputs")
    parser.add_argument("--out", dest="out_dir", default="figures",
                        help="directory for rendered images")
    parser.add_argument("--inputs", nargs="+", default=None,
                        help="explicit input CSVs (overrides --in discovery)")
    parser.add_argument("--format", choices=("svg", "png"), default="svg")
    args = parser.parse_args(argv)

    try:
        inputs = ([Path(p) for p in args.inputs] if args.inputs
                  else _default_inputs(args.key, Path(args.in_dir)))
        out_path = Path(args.out_dir) / f"{args.key}.{args.format}"
        written = render(args.key, inputs, out_path, args.format)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(written)
    return 0


if __name__ == "__main__":
    sys.exit(main())

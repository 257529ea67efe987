"""Command-line interface.

Subcommands: run (scenario), figures (profile/spectrum tables), spectrum
(print a (k, lambda) table), equilibrium (print derived constants and the
uniform fixed point), check (invariant suite).  Exit codes: 0 success,
1 validation/parse error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import math
import sys

from .checks import run_checks
from .config import ConfigError, parse_config
from .params import ModelParams, steady_equilibrium
from .scenarios import FIGURE_KEYS, emit_figure_data, run_scenario
from .solver import SolverError
from .spectrum import compute_spectrum
from . import params as pm


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sedflow",
        description="Depth-averaged suspended-sediment transport solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a config file")
    p_run.add_argument("config", help="scenario config file")
    p_run.add_argument("--out", default=None, help="output directory (overrides output.dir)")

    p_fig = sub.add_parser("figures", help="emit figure data tables as CSV")
    p_fig.add_argument("which", choices=FIGURE_KEYS)
    p_fig.add_argument("--out", default="out", help="output directory")
    p_fig.add_argument("--samples", type=int, default=101, help="Z samples per table")

    p_spec = sub.add_parser("spectrum", help="print the vertical mode spectrum as CSV")
    p_spec.add_argument("--n", type=int, default=5, help="modes per family")

    p_eq = sub.add_parser("equilibrium", help="print derived constants and the fixed point")
    p_eq.add_argument("--tan-theta", type=float, default=0.01)
    p_eq.add_argument("--d", type=float, default=6e-5)

    sub.add_parser("check", help="run the invariant suite")
    return parser


def _cmd_run(args) -> int:
    config = parse_config(args.config)
    result = run_scenario(config, out_dir=args.out)
    for key, value in result.summary.items():
        print(f"{key} = {value}")
    print(f"outputs written to {result.out_dir}")
    return 0


def _cmd_figures(args) -> int:
    params = ModelParams()
    paths = emit_figure_data(args.which, params, args.out, samples=args.samples)
    for path in paths:
        print(path)
    return 0


def _cmd_spectrum(args) -> int:
    params = ModelParams()
    q = pm.EQUILIBRIUM_SPEED_COEFF * math.sqrt(params.tan_theta)
    vel, conc = compute_spectrum(params.c_u, params.c_t, 1.0, q, n=args.n)
    print(f"# nu = {vel.nu:.17g}, spectral gap nu*pi^2 = {vel.gap:.17g}")
    print("family,k,lambda")
    for name, res in (("velocity", vel), ("concentration", conc)):
        for k, lam in zip(res.ks, res.lambdas):
            print(f"{name},{k:.17g},{lam:.17g}")
    return 0


def _cmd_equilibrium(args) -> int:
    params = ModelParams(tan_theta=args.tan_theta, d=args.d)
    eq = steady_equilibrium(params)
    print(f"tan_theta = {params.tan_theta}")
    print(f"d = {params.d}")
    print(f"w_f = {params.w_f:.17g}")
    print(f"c_ae = {params.c_ae:.17g}")
    print(f"c_t = {params.c_t:.17g}")
    print(f"U = {eq.U:.17g}")
    print(f"V = {eq.V:.17g}")
    print(f"Cbar = {eq.Cbar:.17g}")
    print(f"q = {eq.q:.17g}")
    print(f"froude = {eq.q / math.sqrt(params.g):.17g}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "figures":
            return _cmd_figures(args)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "equilibrium":
            return _cmd_equilibrium(args)
        if args.command == "check":
            return 0 if run_checks() else 1
    except (ConfigError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SolverError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
One-Bit Rao Detector Simulator
Monte Carlo studies of the Rao detector for one-bit MIMO radar in colored noise.

Usage:
    python -m skills.simulator pfa --rho 0,0.1            # False alarm vs threshold
    python -m skills.simulator avg-pfa --rho 0.02 --K 1000
    python -m skills.simulator pd --snr=-15,-10           # Detection vs threshold
    python -m skills.simulator roc --snr -12              # ROC against the white baseline
    python -m skills.simulator training --n1 100 --n2 400 # Estimated covariance
    python -m skills.simulator plot results/pfa/pfa_rho0.csv --x gamma --y pfa_theory,pfa_empirical --log-y
"""

import argparse
import sys
from datetime import datetime

from pydantic import ValidationError

from shared.errors import ConfigError
from shared.models.config import ExperimentConfig, PlotSpec
from shared.utils.progress import get_tracker
from skills.simulator.plotting import render_svg
from skills.simulator.runner import run_experiment

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

FAILURE_CODES = {"config": EXIT_CONFIG, "numeric": EXIT_NUMERIC, "io": EXIT_FAILURE}

COMMANDS = {
    "pfa": ("pfa", "False alarm probability versus threshold"),
    "avg-pfa": ("avg_pfa", "False alarm averaged over a covariance prior"),
    "pd": ("pd", "Detection probability versus threshold"),
    "roc": ("roc", "ROC against the white-noise detector"),
    "training": ("training", "Detector built on an estimated covariance"),
}


def _float_list(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _name_list(text: str):
    return [v.strip() for v in text.split(",") if v.strip()]


def _add_experiment_args(parser: argparse.ArgumentParser):
    parser.add_argument("--config", "-c", default=None, help="JSON config file")
    parser.add_argument("--m", type=int, default=None, help="Receive antennas (default: 2)")
    parser.add_argument("--p", type=int, default=None, help="Transmit antennas (default: 2)")
    parser.add_argument("--n", type=int, default=None, help="Snapshots (default: 500)")
    parser.add_argument("--alpha", type=float, default=None, help="Noise correlation scale (default: 1)")
    parser.add_argument("--rho", type=_float_list, default=None, help="Mismatch levels, e.g. 0,0.1,0.2")
    parser.add_argument("--snr", type=_float_list, default=None, dest="snr_db", help="SNR levels in dB")
    parser.add_argument("--n-trials", type=int, default=None, dest="n_trials", help="Monte Carlo trials")
    parser.add_argument("--K", type=int, default=None, help="Prior draws for avg-pfa")
    parser.add_argument("--n1", type=int, default=None, help="Training snapshots")
    parser.add_argument("--n2", type=int, default=None, help="Detection snapshots")
    parser.add_argument("--seed", type=int, default=None, help="Master seed")
    parser.add_argument("--threads", "-j", type=int, default=None, help="Worker threads")
    parser.add_argument("--out", "-o", default=None, dest="output_dir", help="Output directory")
    parser.add_argument("--no-cache", action="store_true", help="Rebuild detector tables")
    parser.add_argument("--quiet", "-q", action="store_true", help="Suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    """Create the CLI parser."""
    parser = argparse.ArgumentParser(
        prog="python -m skills.simulator",
        description="One-bit MIMO radar Rao detector simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m skills.simulator pfa --rho 0,0.1 --n-trials 100000
  python -m skills.simulator avg-pfa --rho 0.02 --K 1000
  python -m skills.simulator pd --snr=-15,-10 --rho 0,0.02
  python -m skills.simulator roc --snr -12 --threads 4
  python -m skills.simulator training --n1 100 --n2 400
  python -m skills.simulator plot results/roc/roc_snr-12_rho0.csv --x pfa --y pd_proposed,pd_white --log-x

Exit codes: 0 success, 1 interrupted or I/O failure, 2 configuration error, 3 numeric failure
        """
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    for command, (_, help_text) in COMMANDS.items():
        _add_experiment_args(subparsers.add_parser(command, help=help_text))

    plot_parser = subparsers.add_parser("plot", help="Render a CSV file as SVG")
    plot_parser.add_argument("csv", help="CSV file with a header row")
    plot_parser.add_argument("--x", required=True, help="Column for the horizontal axis")
    plot_parser.add_argument("--y", type=_name_list, required=True, help="Comma-separated columns to draw")
    plot_parser.add_argument("--log-x", action="store_true", help="Logarithmic horizontal axis")
    plot_parser.add_argument("--log-y", action="store_true", help="Logarithmic vertical axis")
    plot_parser.add_argument("--title", default=None, help="Figure title")
    plot_parser.add_argument("--out", "-o", default=None, help="SVG path (default: next to the CSV)")

    return parser


def _overrides(args) -> dict:
    overrides = {
        name: getattr(args, name)
        for name in ("m", "p", "n", "alpha", "rho", "snr_db", "n_trials", "K",
                     "n1", "n2", "seed", "threads", "output_dir")
    }
    if args.no_cache:
        overrides["table_cache"] = False
    if args.quiet:
        overrides["quiet"] = True
    return overrides


def _run_experiment(command: str, args) -> int:
    """Run an experiment command and return the exit code."""
    experiment = COMMANDS[command][0]
    try:
        config = ExperimentConfig.load(args.config, _overrides(args))
    except ConfigError as e:
        print(f"\n  Config error: {e}")
        return EXIT_CONFIG

    if not config.quiet:
        print("\n" + "=" * 70)
        print(f"  One-Bit Rao Detector - {command}")
        print("=" * 70)
        print(f"\n  m = {config.m}, p = {config.p}, n = {config.n}, alpha = {config.alpha:g}")
        print(f"  rho: {', '.join(f'{r:g}' for r in config.rho)}")
        print(f"  SNR (dB): {', '.join(f'{s:g}' for s in config.snr_db)}")
        print(f"  Trials: {config.n_trials}, seed: {config.seed}, threads: {config.threads}")
        print()

    start_time = datetime.now()
    try:
        state = run_experiment(experiment, config, show_progress=True)
    except KeyboardInterrupt:
        print("\n  Interrupted by user")
        return EXIT_FAILURE

    for error in state.get("errors", []):
        print(f"  Error: {error}")
    if state.get("failure"):
        return FAILURE_CODES.get(state["failure"], EXIT_FAILURE)

    if not config.quiet:
        elapsed = (datetime.now() - start_time).total_seconds()
        for warning in state.get("warnings", []):
            print(f"  Warning: {warning}")
        print(f"\n  Wrote {len(state['csv_paths'])} CSV and {len(state['svg_paths'])} SVG files "
              f"to {state['output_dir']} ({elapsed:.1f}s)")
        for path in state["csv_paths"][:10]:
            print(f"    - {path}")
        print()
        get_tracker().finish()

    return EXIT_OK


def _run_plot(args) -> int:
    """Render one CSV file."""
    try:
        spec = PlotSpec(x=args.x, y=args.y, log_x=args.log_x, log_y=args.log_y, title=args.title)
        svg = render_svg(args.csv, spec, args.out)
    except (ConfigError, ValidationError) as e:
        print(f"  Error: {e}")
        return EXIT_CONFIG
    except OSError as e:
        print(f"  Error: {e}")
        return EXIT_FAILURE

    print(f"  Wrote {svg}")
    return EXIT_OK


def main(argv=None):
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(EXIT_FAILURE)

    if args.command == "plot":
        sys.exit(_run_plot(args))
    sys.exit(_run_experiment(args.command, args))


if __name__ == "__main__":
    main()

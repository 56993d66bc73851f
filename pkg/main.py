"""
Gausswell - High-Precision Spectra of the Gaussian-Perturbed Oscillator

Main entry point for the Gausswell command-line front end, producing
machine-readable datasets of energies, critical couplings, exceptional
points and Hellmann-Feynman checks for H = -½ d²/dx² + ½ x² - λ·exp(-x²).

Features:
- λ sweeps by Rayleigh-Ritz, Riccati-Pade and perturbation theory
- Critical couplings to 50 digits (100 with --heroic)
- Exceptional points in the complex λ-plane
- CSV and JSON-lines output with a separate metadata block

Output columns (CSV header, JSON-lines keys):
    kind, method, state, sector, lambda_re, lambda_im, energy_re, energy_im,
    modulus, basis_size, digits, converged_digits, residual_1, residual_2,
    branch, conjugate_pair, status, error

Author: Gausswell Project
Project: Gausswell
Version: 1.0
"""

import argparse
import logging
import sys
from typing import List, Optional

import config
from src import __version__
from src.cli.commands import (SweepRequest, cmd_critical, cmd_eps, cmd_hft, cmd_sweep,
                              parse_box, parse_list)
from src.cli.interface import (display_critical_results, display_exceptional_points,
                               display_run_header, display_run_summary)
from src.core.records import COLUMNS, any_failed
from src.cli.writers import FORMATS, build_metadata, write_records
from src.core.engine import Engine

logger = logging.getLogger("gausswell")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-command per dataset."""
    parser = argparse.ArgumentParser(
        prog="gausswell",
        description="High-precision spectra of -½ d²/dx² + ½ x² - λ·exp(-x²).",
        epilog="Output columns: " + ", ".join(COLUMNS),
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="count", default=0,
                           help="log progress to stderr (-vv for solver iterations)")
    verbosity.add_argument("--quiet", "-q", action="store_true",
                           help="log errors only")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--digits", type=int, default=None,
                        help=f"working precision (overrides ${config.DIGITS_ENV_VAR})")
    output.add_argument("--out", default=None, help="output file (default: stdout)")
    output.add_argument("--format", choices=FORMATS, default=config.OUTPUT_CONFIG['format'])
    output.add_argument("--workers", type=int, default=config.PERFORMANCE_CONFIG['workers'],
                        help="worker processes for sweep points and EP seeds")

    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", parents=[output], help="energies on a λ grid")
    sweep.add_argument("--lmin", default=str(config.SWEEP_CONFIG['lambda_min']))
    sweep.add_argument("--lmax", default=str(config.SWEEP_CONFIG['lambda_max']))
    sweep.add_argument("--steps", type=int, default=config.SWEEP_CONFIG['steps'])
    sweep.add_argument("--states", default=",".join(map(str, config.SWEEP_CONFIG['states'])),
                       help="comma-separated state indices")
    sweep.add_argument("--methods", default=",".join(config.SWEEP_CONFIG['methods']),
                       help="comma-separated subset of RR,RPM,PT")
    sweep.add_argument("--guides", default=None,
                       help="JSON-lines file from 'eps' supplying ±|λ_EP| guide positions")

    critical = commands.add_parser("critical", parents=[output],
                                   help="critical coupling where E_n crosses zero")
    critical.add_argument("--n", type=int, required=True)
    critical.add_argument("--method", type=str.upper, choices=("RR", "RPM", "BOTH", "PT"),
                          default="BOTH")
    critical.add_argument("--heroic", action="store_true",
                          help="extended Hankel ladder at 110 digits (runs for hours)")

    eps = commands.add_parser("eps", parents=[output], help="exceptional points in complex λ")
    eps.add_argument("--sector", choices=("even", "odd"), required=True)
    eps.add_argument("--box", required=True, help="re0,re1,im0,im1")

    hft = commands.add_parser("hft", parents=[output], help="Hellmann-Feynman residual")
    hft.add_argument("--n", type=int, required=True)
    hft.add_argument("--lambda", dest="lam", required=True)

    return parser


def configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the Gausswell application.

    Returns:
        0 when every record was produced, 1 when any failed, 2 on bad arguments.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        digits = config.resolve_digits(args.command, args.digits)
    except ValueError as exc:
        parser.error(str(exc))
    if digits < 10:
        parser.error(f"--digits must be at least 10, got {digits}")

    engine = Engine()
    extra = {}
    try:
        if args.command == "sweep":
            request = SweepRequest(args.lmin, args.lmax, args.steps, parse_list(args.states, int),
                                   parse_list(args.methods), digits)
            if not args.quiet:
                display_run_header("sweep", digits, {
                    "Lambda range": f"[{args.lmin}, {args.lmax}], {args.steps} points",
                    "States": args.states, "Methods": ",".join(request.methods)})
            records, extra = cmd_sweep(request, args.workers, args.guides)
        elif args.command == "critical":
            if not args.quiet:
                display_run_header("critical", digits, {"State": args.n, "Method": args.method})
            records = cmd_critical(engine, args.n, args.method, digits, args.heroic)
            if not args.quiet:
                display_critical_results(records, digits)
        elif args.command == "eps":
            box = parse_box(args.box)
            if not args.quiet:
                display_run_header("eps", digits, {"Sector": args.sector, "Box": args.box})
            records = cmd_eps(engine, args.sector, box, digits, args.workers)
            if not args.quiet:
                display_exceptional_points(records, digits)
        else:
            records = cmd_hft(engine, args.n, args.lam, digits)
    except ValueError as exc:
        parser.error(str(exc))

    metadata = build_metadata(sys.argv[1:] if argv is None else argv, digits, __version__, extra)
    write_records(records, digits, metadata, args.format, args.out,
                  config.OUTPUT_CONFIG['metadata_suffix'])
    if not args.quiet:
        display_run_summary(records, args.out or "stdout")
    logger.info("%s produced %d records", args.command, len(records))
    return 1 if any_failed(records) else 0


if __name__ == "__main__":
    sys.exit(main())

"""
User Interface and Display Module

Handles terminal display for the Gausswell command-line front end. Data
records go to stdout or a file; everything printed here goes to stderr so
that piped datasets stay clean.

Author: Gausswell Project
Project: Gausswell
"""

import sys
from typing import Any, Dict, List

from ..core.records import STATUS_RUNG, ResultRecord


def _print(text: str = "") -> None:
    print(text, file=sys.stderr)


def display_run_header(command: str, digits: int, details: Dict[str, Any]) -> None:
    """
    Display the command banner and its settings.

    Args:
        command: Command name.
        digits: Working precision in decimal digits.
        details: Additional settings to list, in display order.
    """
    _print("\n" + "=" * 60)
    _print(f"GAUSSWELL - {command.upper()}")
    _print("=" * 60)
    _print(f"Working precision: {digits} digits")
    for key, value in details.items():
        _print(f"{key}: {value}")
    _print("=" * 60)


def display_critical_results(records: List[ResultRecord], digits: int) -> None:
    """
    Display the ladder and final value of each critical-coupling method.

    Args:
        records: Records produced by the critical command.
        digits: Working precision used to format values.
    """
    _print("\n" + "=" * 50)
    _print("CRITICAL COUPLINGS")
    _print("=" * 50)
    for record in records:
        row = record.to_row(digits)
        if record.failed:
            _print(f"{row['method']:>4}  {row['status'].upper()}: {row['error']}")
        elif row['status'] == STATUS_RUNG:
            _print(f"{row['method']:>4}  D={row['basis_size']:>4}  {row['lambda_re']}")
        else:
            _print(f"{row['method']:>4}  FINAL  {row['lambda_re']}")
            if row['converged_digits']:
                _print(f"      converged digits: {row['converged_digits']}")
    _print("=" * 50)


def display_exceptional_points(records: List[ResultRecord], digits: int) -> None:
    """
    Display exceptional points with their moduli and coalescing levels.

    Args:
        records: Records produced by the eps command.
        digits: Working precision used to format values.
    """
    _print("\n" + "=" * 50)
    _print("EXCEPTIONAL POINTS")
    _print("=" * 50)
    if not records:
        _print("No exceptional points found in the search box.")
        _print("Try:")
        _print("   • Enlarging the box")
        _print("   • Searching the other parity sector")
        _print("=" * 50)
        return
    for record in records:
        row = record.to_row(digits)
        if record.failed:
            _print(f"Seed failed: {row['error']}")
            continue
        sign = "±" if row['conjugate_pair'] == "true" else "+"
        _print(f"lambda = {row['lambda_re']} {sign} {row['lambda_im']}i")
        _print(f"   |lambda| = {row['modulus']}")
        if row['branch']:
            _print(f"   levels  = {row['branch']}")
    _print("=" * 50)


def display_run_summary(records: List[ResultRecord], destination: str) -> None:
    """
    Display the final record counts.

    Args:
        records: All records emitted by the run.
        destination: Output file path, or 'stdout'.
    """
    failed = sum(1 for record in records if record.failed)
    _print(f"\nRun completed! Records written to {destination}: {len(records)}")
    if failed:
        _print(f"Failed records: {failed}")

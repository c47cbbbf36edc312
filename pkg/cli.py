"""Command line: `locoh run` and `locoh sweep`.

Exit codes of `run`: 0 VANISHES, 1 NONVANISHING, 2 INCONCLUSIVE or error.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from algebra.errors import LocohError
from config import configure_logging, settings
from instances import parse_instance
from reports import (
    decide_report,
    encode_report,
    error_report,
    exit_code,
    format_summary,
    sweep_row,
    write_sweep_csv,
)

MODES = click.Choice(["streaming", "baseline", "compare"])


def _load(path: str):
    try:
        return parse_instance(path)
    except LocohError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _degree(instance, degree: int | None) -> int:
    degree = degree if degree is not None else instance.degree
    if degree is None:
        click.echo("error: no --degree given and the instance file sets none", err=True)
        sys.exit(2)
    return degree


def _write_json(data: bytes, target: str) -> None:
    if target == "-":
        click.echo(data.decode())
    else:
        Path(target).write_bytes(data + b"\n")


@click.group()
@click.option("--log-level", default=None, help="Logging level (default from LOCOH_LOG_LEVEL).")
def cli(log_level):
    """Decide vanishing of local cohomology H^i_I(R/pR)."""
    configure_logging(log_level)


@cli.command("run")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--prime", "-p", type=int, required=True)
@click.option("--degree", "-i", type=int, default=None)
@click.option("--mode", type=MODES, default=settings.default_mode, show_default=True)
@click.option("--bound", default="finite-length", show_default=True, help="user:<u>, finite-length or empirical")
@click.option("--max-steps", type=int, default=settings.max_steps, show_default=True)
@click.option("--json", "json_out", default=None, help="Write the JSON report to a file ('-' for stdout).")
def run_command(path, prime, degree, mode, bound, max_steps, json_out):
    """Decide one instance at one prime."""
    instance = _load(path)
    degree = _degree(instance, degree)
    try:
        report = decide_report(instance, prime, degree, mode, bound, max_steps,
                               check=settings.check_complexes, stable=settings.stable_reports)
    except LocohError as exc:
        report = error_report(instance.name, prime, degree, mode, str(exc))
    click.echo(format_summary(report))
    if report.reason and exit_code(report.verdict) == 2:
        click.echo(f"error: {report.reason}", err=True)
    if json_out:
        _write_json(encode_report(report), json_out)
    sys.exit(exit_code(report.verdict))


@cli.command("sweep")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--primes", default="2,3,5,7", show_default=True, help="Comma separated list.")
@click.option("--degree", "-i", type=int, default=None)
@click.option("--mode", type=MODES, default=settings.default_mode, show_default=True)
@click.option("--bound", default="finite-length", show_default=True)
@click.option("--max-steps", type=int, default=settings.max_steps, show_default=True)
@click.option("--csv", "csv_out", default=None, help="CSV file (default: stdout).")
@click.option("--json", "json_out", default=None, help="Write all reports as a JSON list.")
def sweep_command(path, primes, degree, mode, bound, max_steps, csv_out, json_out):
    """One report per prime; a failing prime is recorded in its row."""
    instance = _load(path)
    degree = _degree(instance, degree)
    try:
        plist = [int(x) for x in primes.split(",") if x.strip()]
    except ValueError:
        click.echo(f"error: bad prime list {primes!r}", err=True)
        sys.exit(2)
    reports = []
    for p in plist:
        try:
            report = decide_report(instance, p, degree, mode, bound, max_steps,
                                   check=settings.check_complexes, stable=settings.stable_reports)
        except LocohError as exc:
            report = error_report(instance.name, p, degree, mode, str(exc))
        reports.append(report)
    rows = [sweep_row(r) for r in reports]
    if csv_out:
        with open(csv_out, "w", newline="", encoding="utf-8") as fh:
            write_sweep_csv(rows, fh)
    else:
        click.echo(write_sweep_csv(rows), nl=False)
    if json_out:
        _write_json(encode_report(reports), json_out)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()

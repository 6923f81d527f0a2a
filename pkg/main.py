#!/usr/bin/env python3
"""
Zariski Closure Engine
Command-line front end: closures of cyclic matrix groups and semigroups,
toric realization, affine-loop invariants and the power-evaluation oracle.
"""

import logging
import sys
from typing import Optional

import click
from dotenv import load_dotenv

from modules.commands import CommandRunner, RunConfig
from modules.error_handler import ClosureError, ErrorHandler
from modules.settings import get_settings

logger = logging.getLogger(__name__)


def configure_logging():
    """Send log records to stderr (and LOG_FILE when set); stdout carries reports only"""
    settings = get_settings()
    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file, encoding="utf-8"))
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=getattr(logging, settings.log_level),
        handlers=handlers,
    )


def run_command(command: str, source: str, **options):
    """Build the run config, dispatch, print, and exit with the command's code"""
    try:
        cfg = RunConfig(command=command, source=source, **options)
    except ClosureError as e:
        ErrorHandler.log_error(e, command)
        click.echo(ErrorHandler.describe(e), err=True)
        sys.exit(ErrorHandler.exit_code_for(e))

    result = CommandRunner().run(cfg)
    if result.stdout:
        click.echo(result.stdout)
    for line in result.stderr:
        click.echo(line, err=True)
    sys.exit(result.exit_code)


def _order_default(order: Optional[str]) -> str:
    return order or get_settings().default_order


def _verify_default(verify_k: Optional[int]) -> int:
    return get_settings().default_verify_k if verify_k is None else verify_k


def report_options(func):
    """Options shared by the commands that print a closure report"""
    options = [
        click.option("--mode", type=click.Choice(["group", "semigroup"]), default="semigroup",
                     show_default=True, help="Close {M^k : k in Z} or {M^k : k >= 1}."),
        click.option("--coords", type=click.Choice(["original", "jordan"]), default="original",
                     show_default=True, help="Coordinates the ideal is printed in."),
        click.option("--order", type=click.Choice(["lex", "grevlex"]), default=None,
                     help="Monomial order of the printed basis [default: DEFAULT_ORDER]."),
        click.option("--verify", "verify_k", type=click.IntRange(min=0), default=None,
                     help="Run the oracle on the first K powers (0 skips)."),
        click.option("--output", type=click.Choice(["json", "text"]), default="json",
                     show_default=True),
        click.option("--stats", is_flag=True, help="Print stage timings to stderr."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
def cli():
    """Exact Zariski closures of cyclic matrix groups and semigroups."""


@cli.command()
@click.argument("source")
@report_options
def closure(source, mode, coords, order, verify_k, output, stats):
    """Closure of the matrix in SOURCE (file path, - for stdin, or inline JSON)."""
    run_command("closure", source, mode=mode, coords=coords, order=_order_default(order),
                verify_k=_verify_default(verify_k), output=output, stats=stats)


@cli.command()
@click.argument("source")
@click.option("--vector", "-b", default=None, help="Affine vector b as JSON (loop x <- Mx + b).")
@report_options
def invariants(source, vector, mode, coords, order, verify_k, output, stats):
    """Polynomial invariants of the loop x <- M x (+ b); always the semigroup closure."""
    run_command("invariants", source, vector=vector, mode="semigroup", coords=coords,
                order=_order_default(order), verify_k=_verify_default(verify_k),
                output=output, stats=stats)


@cli.command()
@click.argument("source")
@report_options
def symbolic(source, mode, coords, order, verify_k, output, stats):
    """Closure of a diagonal matrix given by moduli and phases."""
    run_command("symbolic", source, mode=mode, coords=coords, order=_order_default(order),
                verify_k=_verify_default(verify_k), output=output, stats=stats)


@cli.command()
@click.argument("source")
@click.option("--report", "report_source", default=None,
              help="Stored JSON report to check instead of recomputing it.")
@click.option("--mode", type=click.Choice(["group", "semigroup"]), default="semigroup",
              show_default=True)
@click.option("-k", "verify_k", type=click.IntRange(min=1), default=10, show_default=True,
              help="Number of powers to evaluate.")
@click.option("--output", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--stats", is_flag=True)
def verify(source, report_source, mode, verify_k, output, stats):
    """Evaluate a closure ideal on the powers of the matrix in SOURCE."""
    run_command("verify", source, report_source=report_source, mode=mode, verify_k=verify_k,
                output=output, stats=stats)


@cli.command(name="power-check")
@click.argument("source")
@click.option("--q", "q", type=int, required=True, help="Exponent to compare against.")
@click.option("--output", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--stats", is_flag=True)
def power_check(source, q, output, stats):
    """Exit 0 when <M> and <M^q> have the same closure, 3 when they differ."""
    run_command("power-check", source, q=q, output=output, stats=stats)


@cli.group()
def toric():
    """Toric varieties of point configurations."""


@toric.command()
@click.argument("source")
@click.option("--round-trip", is_flag=True,
              help="Recompute the closure of the realized matrix and compare lattices.")
@click.option("--order", type=click.Choice(["lex", "grevlex"]), default=None)
@click.option("--output", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--stats", is_flag=True)
def realize(source, round_trip, order, output, stats):
    """Diagonal matrix whose cyclic closure is the toric variety of the points in SOURCE."""
    run_command("toric realize", source, round_trip=round_trip, order=_order_default(order),
                output=output, stats=stats)


def main():
    load_dotenv()
    try:
        configure_logging()
    except ClosureError as e:
        click.echo(ErrorHandler.describe(e), err=True)
        sys.exit(ErrorHandler.exit_code_for(e))
    logger.debug("Starting closure engine")
    cli()


if __name__ == "__main__":
    main()

"""
Command-Line Entry Point for ss-optics
Spectral singularities, lasing thresholds and Kerr laser output of a PT-symmetric bilayer slab
"""

import logging
from typing import Optional

import click

from .. import __version__
from ..cli.commands import emission, modes, oracle, sweep, threshold
from .config import get_settings
from .startup import setup_logging


@click.group()
@click.option("--log-level", default=None, help="Override SS_OPTICS_LOG_LEVEL.")
@click.option("--log-format", type=click.Choice(["text", "json"]), default=None, help="Override SS_OPTICS_LOG_FORMAT.")
@click.version_option(__version__, prog_name="ss-optics")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], log_format: Optional[str]):
    """Spectral-singularity and lasing-threshold toolkit"""
    settings = get_settings()
    updates = {k: v for k, v in (("log_level", log_level), ("log_format", log_format)) if v}
    if updates:
        settings = settings.model_copy(update=updates)
    setup_logging(settings)
    ctx.obj = settings
    logging.getLogger(__name__).debug(f"ss-optics {__version__} starting with threads={settings.threads}")


cli.add_command(modes.modes)
cli.add_command(threshold.threshold)
cli.add_command(threshold.exact)
cli.add_command(sweep.sweep)
cli.add_command(emission.emission)
cli.add_command(oracle.oracle_check)


if __name__ == "__main__":
    cli()

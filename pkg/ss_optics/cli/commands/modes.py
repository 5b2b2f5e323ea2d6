"""
Modes Command
Lists ladder modes inside a wavelength window
"""

import click

from ...services.exports import write_json
from ...services.profiles import mode_window
from ..dependencies import (
    build_command_spec,
    common_options,
    echo_table,
    get_context_settings,
    handle_errors,
    lambda_target,
    resolve_profile,
)


@click.command()
@common_options
@click.option("--regime", type=click.Choice(["auto", "eta1", "general", "homogeneous"]), default="auto", show_default=True)
@click.option("--lambda-min", "lambda_min", type=float, help="Window start in micrometers.")
@click.option("--lambda-max", "lambda_max", type=float, help="Window end in micrometers.")
@click.pass_context
@handle_errors
def modes(ctx: click.Context, regime: str, lambda_min, lambda_max, **params):
    """List the modes whose wavelength falls in the window"""
    settings = get_context_settings(ctx)
    spec = build_command_spec("modes", params)
    profile = resolve_profile(spec)
    target = lambda_target(spec)

    lo = lambda_min if lambda_min is not None else spec.option("lambda_min", target * 0.999)
    hi = lambda_max if lambda_max is not None else spec.option("lambda_max", target * 1.001)
    if regime == "auto":
        regime = "eta1" if profile.eta == 1.0 else "general"

    found = mode_window(profile.a_um, profile.eta, float(lo), float(hi), regime)
    echo_table(("m", "K0", "lambda0_um"), [(md.m, md.K0, md.lambda0) for md in found], settings.output_digits)
    if spec.output_path is not None:
        write_json([md.model_dump() for md in found], spec.output_path, spec.force)

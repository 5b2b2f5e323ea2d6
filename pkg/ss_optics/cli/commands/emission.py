"""
Emission Command
Laser output intensity and wavelength shift above threshold
"""

import logging

import click
import numpy as np

from ...app.errors import DomainError, OutputExistsError
from ...services.exports import export_emission_csv, export_modes_json
from ...services.linear_ss import exact_threshold, homogeneous_threshold
from ...services.nonlinear_ss import emission as emission_curve
from ...services.nonlinear_ss import homogeneous_emission, output_coefficient_scan, perturbation_coefficients
from ...services.profiles import mode_window
from ..dependencies import (
    build_command_spec,
    common_options,
    echo_table,
    get_context_settings,
    handle_errors,
    lambda_target,
    optional_int,
    require_output,
    resolve_profile,
)

logger = logging.getLogger(__name__)


@click.command()
@common_options
@click.option("--slab", type=click.Choice(["bilayer", "homogeneous"]), default="bilayer", show_default=True)
@click.option("--g-max-ratio", "g_max_ratio", type=float, default=None, help="Largest g/g0 sampled (default 2).")
@click.option("--samples", type=int, default=None, help="Number of gain samples (default 11).")
@click.option("--lambda-min", "lambda_min", type=float, help="Mode-scan window start in micrometers.")
@click.option("--lambda-max", "lambda_max", type=float, help="Mode-scan window end in micrometers.")
@click.pass_context
@handle_errors
def emission(ctx: click.Context, slab: str, g_max_ratio, samples, lambda_min, lambda_max, **params):
    """Write the emission curve CSV and, for the bilayer, per-mode coefficients to <out stem>.modes.json"""
    settings = get_context_settings(ctx)
    spec = build_command_spec("emission", params)
    out = require_output(spec)
    modes_out = out.with_suffix(".modes.json")
    profile = resolve_profile(spec)
    target = lambda_target(spec)

    if profile.sigma == 0:
        raise DomainError("sigma = 0: the linear theory gives no intensity scale")
    for path in (out, modes_out) if slab == "bilayer" else (out,):
        if path.exists() and not spec.force:
            raise OutputExistsError(f"{path} exists; pass --force to overwrite")

    lo = lambda_min if lambda_min is not None else spec.option("lambda_min")
    hi = lambda_max if lambda_max is not None else spec.option("lambda_max")
    if (lo is None) != (hi is None):
        raise click.UsageError("--lambda-min and --lambda-max must be given together", ctx=ctx)

    ratio = g_max_ratio if g_max_ratio is not None else spec.option("g_max_ratio", 2.0)
    count = samples if samples is not None else optional_int(spec, "samples", 11)
    if ratio <= 1 or count < 2:
        raise DomainError("need --g-max-ratio > 1 and --samples >= 2")

    if slab == "homogeneous":
        g0 = homogeneous_threshold(profile.eta, profile.a_um, target, settings).g0
        curve = homogeneous_emission(
            profile.eta, profile.a_um, profile.sigma, np.linspace(g0, ratio * g0, count), target, settings
        )
        export_emission_csv(curve, out, spec.force, settings.output_digits)
        click.echo(f"A_slab={curve.A_coef:.{settings.output_digits}g} g0={curve.g0:.{settings.output_digits}g}")
        return

    ss = exact_threshold(profile.eta, profile.a_um, target, settings)
    pr = perturbation_coefficients(ss)
    curve = emission_curve(ss, pr, profile.sigma, np.linspace(ss.g0, ratio * ss.g0, count), settings)

    if lo is not None and hi is not None:
        regime = "eta1" if profile.eta == 1.0 else "general"
        numbers = [m.m for m in mode_window(profile.a_um, profile.eta, float(lo), float(hi), regime)]
        scan = output_coefficient_scan(profile.eta, profile.a_um, numbers, settings) if numbers else [pr]
    else:
        scan = [pr]

    export_emission_csv(curve, out, spec.force, settings.output_digits)
    export_modes_json(scan, modes_out, spec.force, settings.output_digits)
    echo_table(
        ("m", "lambda0_um", "g0_cm_inv", "A_coef", "B_coef"),
        [(r.m, r.lambda0, r.g0, r.A_coef, r.B_coef) for r in scan],
        settings.output_digits,
    )

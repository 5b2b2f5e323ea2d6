"""
Sweep Command
Threshold-gain curves along lambda0 or eta0 written as CSV
"""

import logging
from typing import List, Tuple

import click
import numpy as np

from ...app.errors import DomainError, ProfileValidationError
from ...services.exports import export_sweep_csv
from ...services.linear_ss import sweep as run_sweep
from ...services.profiles import mode_window
from ..dependencies import (
    build_command_spec,
    common_options,
    get_context_settings,
    handle_errors,
    lambda_target,
    require_output,
    resolve_profile,
)

logger = logging.getLogger(__name__)

AXES = {"lambda": "lambda0", "eta": "eta0"}


def parse_range(text: str) -> Tuple[float, float]:
    start, sep, stop = text.partition(":")
    if not sep:
        raise ProfileValidationError(f"range must look like START:STOP (got '{text}')")
    try:
        lo, hi = float(start), float(stop)
    except ValueError as e:
        raise ProfileValidationError(f"range bounds must be numbers (got '{text}')") from e
    if not lo < hi:
        raise DomainError(f"sweep range {text} is empty")
    return lo, hi


def thin(values: List[float], points: int) -> List[float]:
    """At most `points` evenly spaced entries, endpoints kept"""
    if len(values) <= points:
        return values
    picks = np.unique(np.round(np.linspace(0, len(values) - 1, points)).astype(int))
    return [values[i] for i in picks]


@click.command()
@common_options
@click.option("--axis", type=click.Choice(sorted(AXES)), required=True)
@click.option("--slab", type=click.Choice(["bilayer", "homogeneous"]), default="bilayer", show_default=True)
@click.option(
    "--range", "span", required=True, metavar="START:STOP", help="Wavelengths (um) or indices; eta0 runs over [1.01, 4]."
)
@click.option("--points", type=int, default=21, show_default=True)
@click.pass_context
@handle_errors
def sweep(ctx: click.Context, axis: str, slab: str, span: str, points: int, **params):
    """Write g0 along lambda0 (ladder modes in the range) or along eta0"""
    settings = get_context_settings(ctx)
    spec = build_command_spec("sweep", params)
    out = require_output(spec)
    profile = resolve_profile(spec)
    lo, hi = parse_range(span)
    if points < 1:
        raise DomainError("--points must be at least 1")

    if axis == "eta":
        grid = np.linspace(lo, hi, points).tolist()
    else:
        if slab == "homogeneous":
            regime = "homogeneous"
        else:
            regime = "eta1" if profile.eta == 1.0 else "general"
        ladder = [m.lambda0 for m in mode_window(profile.a_um, profile.eta, lo, hi, regime)]
        grid = thin(ladder, points)
        if len(grid) < len(ladder):
            logger.info(
                f"Thinned {len(ladder)} ladder modes in {span} to {len(grid)} points (raise --points to keep more)"
            )
    if not grid:
        raise DomainError(f"sweep range {span} holds no modes")

    curve = run_sweep(
        AXES[axis], slab, grid, a_um=profile.a_um, eta0=profile.eta, lambda_target=lambda_target(spec), settings=settings
    )
    export_sweep_csv(curve, out, spec.force, settings.output_digits)
    click.echo(f"{len(curve.valid_points)}/{len(curve.points)} points written to {out}")

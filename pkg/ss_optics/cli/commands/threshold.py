"""
Threshold Commands
Asymptotic and exact lasing thresholds for the bilayer and the homogeneous slab
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple

import click

from ...schemas.threshold_schemas import ThresholdSolution
from ...services.exports import write_json
from ...services.linear_ss import (
    asymptotic_threshold,
    bilayer_ss_exact,
    bilayer_threshold_eta1,
    bilayer_threshold_general,
    homogeneous_threshold,
    homogeneous_threshold_estimate,
)
from ...services.profiles import apply_overrides, save_profile
from ..dependencies import (
    build_command_spec,
    common_options,
    echo_table,
    get_context_settings,
    handle_errors,
    lambda_target,
    optional_int,
    resolve_profile,
)

logger = logging.getLogger(__name__)

HEADER = ("regime", "m", "lambda0_um", "K0", "kappa0", "g0_cm_inv", "bound_cm_inv", "residual")
SLAB_CHOICE = click.Choice(["bilayer", "homogeneous"])
SAVE_PATH = click.Path(dir_okay=False, path_type=Path)


def _row(solution: ThresholdSolution) -> Tuple:
    bound = solution.upper_bound_g0
    return (
        solution.regime.value,
        solution.mode.m,
        solution.lambda0,
        solution.K0,
        solution.kappa0,
        solution.g0,
        "-" if bound is None else bound,
        solution.residual,
    )


def _solve(
    ctx: click.Context,
    command: str,
    slab: str,
    params: dict,
    include_asymptotic: bool,
    save_path: Optional[Path] = None,
) -> List[ThresholdSolution]:
    settings = get_context_settings(ctx)
    spec = build_command_spec(command, params)
    profile = resolve_profile(spec)
    target = lambda_target(spec)

    if slab == "homogeneous":
        solutions = [homogeneous_threshold(profile.eta, profile.a_um, target, settings)]
        if include_asymptotic:
            solutions.insert(0, homogeneous_threshold_estimate(profile.eta, profile.a_um, target))
    else:
        m = optional_int(spec, "m")
        if m is None:
            guess = asymptotic_threshold(profile.eta, profile.a_um, target, settings)
        elif profile.eta == 1.0:
            guess = bilayer_threshold_eta1(m, profile.a_um, settings)
        else:
            guess = bilayer_threshold_general(profile.eta, m, profile.a_um, settings)
        exact = bilayer_ss_exact(profile.eta, profile.a_um, guess, settings)
        solutions = [guess, exact] if include_asymptotic else [exact]

    echo_table(HEADER, [_row(s) for s in solutions], settings.output_digits)
    if spec.output_path is not None:
        write_json([s.model_dump(mode="json") for s in solutions], spec.output_path, spec.force)
    if save_path is not None:
        # the profile sitting exactly at threshold, reusable as --profile
        save_profile(apply_overrides(profile, {"kappa": solutions[-1].kappa0}), save_path, spec.force)
    return solutions


@click.command()
@common_options
@click.option("--slab", type=SLAB_CHOICE, default="bilayer", show_default=True)
@click.option("--save-profile", "save_path", type=SAVE_PATH, help="Write the profile with kappa at threshold.")
@click.pass_context
@handle_errors
def threshold(ctx: click.Context, slab: str, save_path: Optional[Path], **params):
    """Print asymptotic and exact thresholds at the mode nearest --lambda-um"""
    _solve(ctx, "threshold", slab, params, include_asymptotic=True, save_path=save_path)


@click.command()
@common_options
@click.option("--slab", type=SLAB_CHOICE, default="bilayer", show_default=True)
@click.option("--save-profile", "save_path", type=SAVE_PATH, help="Write the profile with kappa at threshold.")
@click.pass_context
@handle_errors
def exact(ctx: click.Context, slab: str, save_path: Optional[Path], **params):
    """Print the exact spectral singularity at the mode nearest --lambda-um"""
    _solve(ctx, "exact", slab, params, include_asymptotic=False, save_path=save_path)

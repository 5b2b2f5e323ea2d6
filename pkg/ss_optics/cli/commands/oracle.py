"""
Oracle Command
Runs the independent oracle suite and reports pass/fail with residuals
"""

import click

from ...services.exports import write_json
from ...services.oracles import OracleSuite, raise_on_failure
from ..dependencies import (
    build_command_spec,
    common_options,
    echo_table,
    get_context_settings,
    handle_errors,
    resolve_profile,
)


@click.command(name="oracle-check")
@common_options
@click.pass_context
@handle_errors
def oracle_check(ctx: click.Context, **params):
    """Compare closed forms against ODE integration, quadrature and nonlinear shooting"""
    settings = get_context_settings(ctx)
    spec = build_command_spec("oracle-check", params)
    profile = resolve_profile(spec)
    sigma = profile.sigma if profile.sigma != 0 else 1e-6

    checks = OracleSuite(profile.eta, profile.a_um, settings).run(sigma)
    echo_table(
        ("check", "residual", "tolerance", "status"),
        [(c.name, c.residual, c.tolerance, "pass" if c.passed else "FAIL") for c in checks],
        settings.output_digits,
    )
    if spec.output_path is not None:
        write_json([c.model_dump() for c in checks], spec.output_path, spec.force)
    raise_on_failure(checks)

"""
CLI Dependencies
Shared option sets, profile resolution and error-to-exit-code mapping for commands
"""

import functools
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional, Tuple

import click
from pydantic import ValidationError

from ..app.config import Settings, get_settings
from ..app.errors import ProfileValidationError, SSOpticsError
from ..schemas.command_schemas import CommandSpec
from ..schemas.profile_schemas import ProfileDocument
from ..services.profiles import apply_overrides, load_profile

logger = logging.getLogger(__name__)

DEFAULT_PROFILE = {"a_um": 1000.0, "eta": 3.0, "kappa": 0.0, "sigma": 0.0}
DEFAULT_LAMBDA_UM = 1.0

FLAG_KEYS = {"eta": "eta", "a_um": "a_um", "kappa": "kappa", "sigma": "sigma", "lambda_um": "lambda_um"}


def common_options(func: Callable) -> Callable:
    """--profile/--out/--force/--set plus the profile flags"""
    options = [
        click.option("--profile", "profile_path", type=click.Path(dir_okay=False, path_type=Path), help="Profile JSON document."),
        click.option("--out", "output_path", type=click.Path(dir_okay=False, path_type=Path), help="Artifact destination."),
        click.option("--force", is_flag=True, help="Overwrite existing artifacts."),
        click.option("--set", "assignments", multiple=True, metavar="KEY=VALUE", help="Override a profile or command value."),
        click.option("--eta", type=float, help="Real index eta."),
        click.option("--a-um", "a_um", type=float, help="Slab width in micrometers."),
        click.option("--kappa", type=float, help="Imaginary index kappa."),
        click.option("--sigma", type=float, help="Kerr coefficient sigma."),
        click.option("--lambda-um", "lambda_um", type=float, help="Target wavelength in micrometers."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def parse_assignments(assignments: Iterable[str]) -> Dict[str, float]:
    parsed: Dict[str, float] = {}
    for item in assignments:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ProfileValidationError(f"expected KEY=VALUE, got '{item}'")
        try:
            parsed[key.strip()] = float(value)
        except ValueError as e:
            raise ProfileValidationError(f"value for '{key}' is not a number: '{value}'") from e
    return parsed


def build_command_spec(command: str, params: Dict[str, Any]) -> CommandSpec:
    """CommandSpec from click parameters; named flags win over --set"""
    overrides = parse_assignments(params.get("assignments") or ())
    for flag, key in FLAG_KEYS.items():
        if params.get(flag) is not None:
            overrides[key] = float(params[flag])
    try:
        return CommandSpec(
            command=command,
            profile_path=params.get("profile_path"),
            output_path=params.get("output_path"),
            overrides=overrides,
            force=bool(params.get("force")),
        )
    except ValidationError as e:
        raise ProfileValidationError(f"invalid command: {e}") from e


def resolve_profile(spec: CommandSpec) -> ProfileDocument:
    """Flags > profile file > defaults"""
    base = load_profile(spec.profile_path) if spec.profile_path else ProfileDocument(**DEFAULT_PROFILE)
    return apply_overrides(base, spec.profile_overrides())


def lambda_target(spec: CommandSpec) -> float:
    return float(spec.option("lambda_um", DEFAULT_LAMBDA_UM))


def get_context_settings(ctx: click.Context) -> Settings:
    obj = ctx.find_root().obj
    return obj if isinstance(obj, Settings) else get_settings()


def fmt(value: Any, digits: int) -> str:
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def echo_table(header: Tuple[str, ...], rows: Iterable[Tuple[Any, ...]], digits: int) -> None:
    """Fixed-width table on stdout"""
    text_rows = [tuple(fmt(v, digits) for v in row) for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in text_rows]) for i, h in enumerate(header)]
    click.echo("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in text_rows:
        click.echo("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())


def handle_errors(func: Callable) -> Callable:
    """Map SSOpticsError and validation failures to the process exit status"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except SSOpticsError as e:
            logger.error(f"{ctx.info_name} failed: {e.message}")
            click.echo(f"error: {e.message}", err=True)
            ctx.exit(e.exit_code)
        except ValidationError as e:
            logger.error(f"{ctx.info_name} failed validation: {e}")
            click.echo(f"error: {e}", err=True)
            ctx.exit(1)

    return wrapper


def require_output(spec: CommandSpec) -> Path:
    if spec.output_path is None:
        raise ProfileValidationError(f"'{spec.command}' needs --out")
    return spec.output_path


def optional_int(spec: CommandSpec, key: str, default: Optional[int] = None) -> Optional[int]:
    value = spec.option(key)
    return default if value is None else int(value)

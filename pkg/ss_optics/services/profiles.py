"""
Profile Service
Unit conversions, mode ladders and profile documents for the bilayer slab
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import ValidationError

from ..app.errors import DomainError, OutputExistsError, ProfileValidationError
from ..schemas.profile_schemas import BilayerIndex, Mode, ProfileDocument, SlabGeometry

logger = logging.getLogger(__name__)

UM_PER_CM = 1.0e4

# Mode ladders: eta1 -> K = (2m+1)pi, general -> K = (2m+1/2)pi/eta,
# homogeneous -> K = m*pi/eta with `a` read as the slab thickness L.
REGIMES = ("eta1", "general", "homogeneous")


def gain_from_kappa(kappa: float, K: float, a: float) -> float:
    """Gain coefficient g = -2*K*kappa/a, in cm^-1 for a in micrometers"""
    if a <= 0 or K <= 0:
        raise DomainError(f"gain needs a > 0 and K > 0 (got a={a}, K={K})")
    return -2.0 * K * kappa / a * UM_PER_CM


def kappa_from_gain(g: float, K: float, a: float) -> float:
    """Inverse of gain_from_kappa"""
    if a <= 0 or K <= 0:
        raise DomainError(f"kappa needs a > 0 and K > 0 (got a={a}, K={K})")
    return -g * a / (2.0 * K * UM_PER_CM)


def _check_regime(regime: str, eta: float) -> None:
    if regime not in REGIMES:
        raise DomainError(f"unknown regime '{regime}'")
    if eta < 1:
        raise DomainError(f"eta must be >= 1 (got {eta})")


def _mode_number(regime: str, a: float, eta: float, wavelength: float) -> float:
    """Continuous mode index whose ladder wavelength equals `wavelength`"""
    if regime == "eta1":
        return a / wavelength - 0.5
    if regime == "general":
        return eta * a / wavelength - 0.25
    return 2.0 * eta * a / wavelength


def ladder_wavenumber(regime: str, m: int, eta: float) -> float:
    if regime == "eta1":
        return (2 * m + 1) * math.pi
    if regime == "general":
        return (2 * m + 0.5) * math.pi / eta
    return m * math.pi / eta


def mode_window(
    a: float,
    eta: float,
    lambda_min: float,
    lambda_max: float,
    regime: str = "general",
) -> List[Mode]:
    """All ladder modes whose wavelength lies in [lambda_min, lambda_max]"""
    _check_regime(regime, eta)
    if a <= 0:
        raise DomainError(f"slab width must be positive (got {a})")
    if not 0 < lambda_min < lambda_max:
        raise DomainError(f"need 0 < lambda_min < lambda_max (got {lambda_min}, {lambda_max})")

    first = math.ceil(_mode_number(regime, a, eta, lambda_max) - 1e-9)
    last = math.floor(_mode_number(regime, a, eta, lambda_min) + 1e-9)
    first = max(first, 1 if regime == "homogeneous" else 0)

    modes = []
    for m in range(first, last + 1):
        mode = Mode.from_wavenumber(m, ladder_wavenumber(regime, m, eta), a)
        if lambda_min <= mode.lambda0 <= lambda_max:
            modes.append(mode)
    logger.debug(f"mode_window({regime}) found {len(modes)} modes in [{lambda_min}, {lambda_max}]")
    return modes


def nearest_mode(a: float, eta: float, lambda_target: float, regime: str = "general") -> Mode:
    """Ladder mode closest to a target wavelength; ties round up"""
    _check_regime(regime, eta)
    if a <= 0 or lambda_target <= 0:
        raise DomainError("slab width and target wavelength must be positive")
    m = math.floor(_mode_number(regime, a, eta, lambda_target) + 0.5)
    m = max(m, 1 if regime == "homogeneous" else 0)
    return Mode.from_wavenumber(m, ladder_wavenumber(regime, m, eta), a)


def refractive_index(x, index: BilayerIndex, geometry: Optional[SlabGeometry] = None):
    """Piecewise index: z on [0, split], z* on (split, 1], vacuum outside"""
    split = geometry.layer_split if geometry is not None else 0.5
    x = np.asarray(x, dtype=float)
    z = index.z
    out = np.where(x <= split, z, z.conjugate())
    out = np.where((x < 0) | (x > 1), 1.0 + 0j, out)
    return out[()] if out.ndim == 0 else out


def apply_overrides(document: ProfileDocument, overrides: Dict[str, float]) -> ProfileDocument:
    """Return a validated copy with the given profile fields replaced"""
    try:
        return ProfileDocument(**{**document.model_dump(), **overrides})
    except ValidationError as e:
        raise ProfileValidationError(f"invalid profile override: {e}") from e


def load_profile(path: Union[str, Path]) -> ProfileDocument:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        return ProfileDocument.model_validate(payload)
    except FileNotFoundError as e:
        raise ProfileValidationError(f"profile file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ProfileValidationError(f"profile {path} is not valid JSON: {e}") from e
    except ValidationError as e:
        raise ProfileValidationError(f"profile {path} failed validation: {e}") from e


def save_profile(document: ProfileDocument, path: Union[str, Path], force: bool = False) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise OutputExistsError(f"{path} exists; pass --force to overwrite")
    path.write_text(json.dumps(document.model_dump(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote profile {path}")
    return path

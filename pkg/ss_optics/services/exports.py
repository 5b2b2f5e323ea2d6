"""
Export Service
Deterministic CSV and JSON artifacts; no timestamps are written into data files
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from ..app.config import get_settings
from ..app.errors import OutputExistsError
from ..schemas.emission_schemas import EmissionCurve, PerturbationResult
from ..schemas.scattering_schemas import SampledSolution
from ..schemas.threshold_schemas import SweepCurve

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ["x", "re_psi", "im_psi", "re_dpsi", "im_dpsi"]
SWEEP_COLUMNS = ["abscissa", "g0_cm_inv", "kappa0", "K0", "residual"]
EMISSION_COLUMNS = ["g_cm_inv", "intensity", "dlambda_um"]

PathLike = Union[str, Path]


def _float_format(digits: Optional[int] = None) -> str:
    return f"%.{digits or get_settings().output_digits}g"


def _claim(path: PathLike, force: bool) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise OutputExistsError(f"{path} exists; pass --force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _write_frame(frame: pd.DataFrame, path: PathLike, force: bool, digits: Optional[int]) -> Path:
    path = _claim(path, force)
    frame.to_csv(path, index=False, float_format=_float_format(digits), lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def export_samples_csv(solution: SampledSolution, path: PathLike, force: bool = False, digits: Optional[int] = None) -> Path:
    frame = pd.DataFrame({
        "x": solution.x,
        "re_psi": solution.psi.real,
        "im_psi": solution.psi.imag,
        "re_dpsi": solution.dpsi.real,
        "im_dpsi": solution.dpsi.imag,
    }, columns=SAMPLE_COLUMNS)
    return _write_frame(frame, path, force, digits)


def export_sweep_csv(curve: SweepCurve, path: PathLike, force: bool = False, digits: Optional[int] = None) -> Path:
    """Gaps from failed points are written as NaN"""
    frame = pd.DataFrame(
        [[p.abscissa, p.g0, p.kappa0, p.K0, p.residual] for p in curve.points],
        columns=SWEEP_COLUMNS,
    )
    return _write_frame(frame, path, force, digits)


def export_emission_csv(curve: EmissionCurve, path: PathLike, force: bool = False, digits: Optional[int] = None) -> Path:
    frame = pd.DataFrame({
        "g_cm_inv": curve.g_samples,
        "intensity": curve.I_samples,
        "dlambda_um": curve.dlambda_samples,
    }, columns=EMISSION_COLUMNS)
    return _write_frame(frame, path, force, digits)


def _round(value: Any, digits: int) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    return value


def write_json(payload: Any, path: PathLike, force: bool = False) -> Path:
    path = _claim(path, force)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def mode_records(results: Sequence[PerturbationResult], digits: Optional[int] = None) -> List[Dict[str, Any]]:
    digits = digits or get_settings().output_digits
    return [{k: _round(v, digits) for k, v in r.mode_record().items()} for r in results]


def export_modes_json(results: Sequence[PerturbationResult], path: PathLike, force: bool = False, digits: Optional[int] = None) -> Path:
    """Per-mode (g0, A) pairs: {m, K0, kappa0, g0_cm_inv, A_coef, B_coef}"""
    return write_json(mode_records(results, digits), path, force)

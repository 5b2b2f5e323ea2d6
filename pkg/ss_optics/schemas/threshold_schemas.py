"""
Pydantic models for spectral-singularity thresholds and sweep curves
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .profile_schemas import BilayerIndex, Mode


class Regime(str, Enum):
    ETA1 = "eta1"
    GENERAL = "general"
    EXACT = "exact"
    HOMOGENEOUS = "homogeneous"


class ThresholdSolution(BaseModel):
    """A lasing-threshold (spectral singularity) solution"""

    model_config = ConfigDict(frozen=True)

    mode: Mode
    eta0: float = Field(..., ge=1)
    a_um: float = Field(..., gt=0, description="Slab width (bilayer) or L (homogeneous) in micrometers")
    kappa0: float = Field(..., description="Imaginary index at threshold; negative for gain")
    g0: float = Field(..., description="Threshold gain in cm^-1")
    regime: Regime
    residual: float = Field(0.0, description="Scalar residual of the defining equation")
    residual_uv: Optional[Tuple[float, float]] = Field(None, description="(|U|, |V|) at the root")
    upper_bound_g0: Optional[float] = Field(None, description="Closed-form upper bound on g0 in cm^-1")
    phase_offset: float = Field(
        1.0, description="c in K = (2m + c)pi/eta: 1 for the eta = 1 family, 1/2 otherwise"
    )

    @property
    def K0(self) -> float:
        return self.mode.K0

    @property
    def lambda0(self) -> float:
        return self.mode.lambda0

    @property
    def alpha(self) -> float:
        return self.kappa0 / self.eta0

    @property
    def beta(self) -> float:
        s = self.eta0 ** 2 + self.kappa0 ** 2
        return (s - 1.0) / (s + 1.0)

    @property
    def index(self) -> BilayerIndex:
        return BilayerIndex(eta=self.eta0, kappa=self.kappa0)


class SweepPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    abscissa: float
    g0: float
    kappa0: float
    K0: float
    residual: float
    ok: bool = Field(True, description="False marks a gap left by a failed point")
    error: Optional[str] = None


class SweepCurve(BaseModel):
    """Threshold gain sampled along lambda0 or eta0"""

    model_config = ConfigDict(frozen=True)

    axis: str = Field(..., pattern="^(lambda0|eta0)$")
    slab_kind: str = Field(..., pattern="^(bilayer|homogeneous)$")
    points: Tuple[SweepPoint, ...]

    @field_validator("points")
    @classmethod
    def _strictly_monotone(cls, points: Tuple[SweepPoint, ...]) -> Tuple[SweepPoint, ...]:
        xs = [p.abscissa for p in points]
        if len(xs) > 1:
            increasing = all(b > a for a, b in zip(xs, xs[1:]))
            decreasing = all(b < a for a, b in zip(xs, xs[1:]))
            if not (increasing or decreasing):
                raise ValueError("sweep abscissae must be strictly monotone")
        return points

    @property
    def valid_points(self) -> Tuple[SweepPoint, ...]:
        return tuple(p for p in self.points if p.ok)

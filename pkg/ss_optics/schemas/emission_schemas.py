"""
Pydantic models for first-order Kerr corrections and emission curves
"""

from typing import Callable, Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field


class FirstOrderSolution(BaseModel):
    """First-order correction zeta1; cubic in N+"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    P: complex = Field(..., description="Right-layer correction at x = 1/2")
    Q: complex = Field(..., description="Derivative of the right-layer correction at x = 1/2")
    tilde_A: complex
    tilde_B: complex
    K: float
    z: complex
    N_plus: complex = Field(1 + 0j, description="Transmitted amplitude the correction is computed for")
    zeta1: Callable = Field(..., description="Piecewise correction on [0, 1]")
    dzeta1: Callable = Field(..., description="Its derivative")


class PerturbationResult(BaseModel):
    """Coefficients of the first-order threshold shift, per unit |N+|^2"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int
    K0: float
    kappa0: float
    g0: float = Field(..., description="Linear threshold gain in cm^-1")
    lambda0: float
    a_coef: complex = Field(..., description="dG+/dK divided by N+")
    b_coef: complex = Field(..., description="dG+/dkappa divided by N+")
    c_coef: complex = Field(..., description="-G+^(1)/(N+|N+|^2)")
    K1_per_I: float
    kappa1_per_I: float
    A_coef: float = Field(..., description="Output intensity coefficient")
    B_coef: float = Field(..., description="Wavelength shift coefficient")

    def mode_record(self) -> Dict[str, float]:
        return {
            "m": self.m,
            "K0": self.K0,
            "kappa0": self.kappa0,
            "g0_cm_inv": self.g0,
            "A_coef": self.A_coef,
            "B_coef": self.B_coef,
        }


class EmissionCurve(BaseModel):
    """Sampled (g, I, dlambda) triples of the lasing branch"""

    model_config = ConfigDict(frozen=True)

    g0: float
    lambda0: float
    sigma: float
    A_coef: float
    B_coef: float = 0.0
    g_samples: Tuple[float, ...]
    I_samples: Tuple[float, ...]
    dlambda_samples: Tuple[float, ...]
    weak: Tuple[bool, ...] = Field(..., description="False where the weak-Kerr condition fails")

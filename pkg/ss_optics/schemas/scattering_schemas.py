"""
Pydantic models for piecewise Helmholtz solutions and scattering data
"""

from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class PiecewiseSolution(BaseModel):
    """Linear solution A e^{izKx} + B e^{-izKx} on [0, 1/2], C e^{iz*Kx} + D e^{-iz*Kx} on [1/2, 1]"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    A: complex
    B: complex
    C: complex
    D: complex
    N_plus: complex = Field(..., description="Transmitted amplitude at x = 1")
    K: float = Field(..., gt=0, description="Dimensionless wavenumber")
    z: complex = Field(..., description="Index of the left layer; the right layer carries its conjugate")
    split: float = Field(0.5, description="Interface position")

    def _rates(self) -> Tuple[complex, complex]:
        return self.z * self.K, self.z.conjugate() * self.K

    def value(self, x):
        """Evaluate the solution; accepts scalars or numpy arrays"""
        x = np.asarray(x, dtype=float)
        wl, wr = self._rates()
        left = self.A * np.exp(1j * wl * x) + self.B * np.exp(-1j * wl * x)
        right = self.C * np.exp(1j * wr * x) + self.D * np.exp(-1j * wr * x)
        out = np.where(x <= self.split, left, right)
        return out[()] if out.ndim == 0 else out

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        wl, wr = self._rates()
        left = 1j * wl * (self.A * np.exp(1j * wl * x) - self.B * np.exp(-1j * wl * x))
        right = 1j * wr * (self.C * np.exp(1j * wr * x) - self.D * np.exp(-1j * wr * x))
        out = np.where(x <= self.split, left, right)
        return out[()] if out.ndim == 0 else out

    def interface_mismatch(self) -> Tuple[float, float]:
        """Relative jumps of value and derivative across the interface"""
        wl, wr = self._rates()
        s = self.split
        v_left = self.A * np.exp(1j * wl * s) + self.B * np.exp(-1j * wl * s)
        v_right = self.C * np.exp(1j * wr * s) + self.D * np.exp(-1j * wr * s)
        d_left = 1j * wl * (self.A * np.exp(1j * wl * s) - self.B * np.exp(-1j * wl * s))
        d_right = 1j * wr * (self.C * np.exp(1j * wr * s) - self.D * np.exp(-1j * wr * s))
        return (
            abs(v_left - v_right) / max(abs(v_right), 1e-300),
            abs(d_left - d_right) / max(abs(d_right), 1e-300),
        )


class SampledSolution(BaseModel):
    """A solution sampled on a grid of [0, 1]"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray


class ScatteringData(BaseModel):
    """Reflection and transmission amplitudes with the transfer matrix"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    R_left: Optional[complex] = None
    R_right: Optional[complex] = None
    T: Optional[complex] = None
    M: np.ndarray = Field(..., description="2x2 complex transfer matrix")
    F_plus: complex
    F_minus: complex
    G_plus: complex
    G_minus: complex
    singular: bool = Field(False, description="True when |G+| fell below the singular threshold")
    residual: float = Field(0.0, description="|G+|/K at the evaluation point")

    @property
    def reflectance_left(self) -> float:
        return abs(self.R_left) ** 2 if self.R_left is not None else float("inf")

    @property
    def transmittance(self) -> float:
        return abs(self.T) ** 2 if self.T is not None else float("inf")

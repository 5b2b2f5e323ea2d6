"""
Pydantic models for slab geometry, refractive-index profiles and modes
"""

import math

from pydantic import BaseModel, ConfigDict, Field


class SlabGeometry(BaseModel):
    """Physical slab width and the fractional position of the layer interface"""

    model_config = ConfigDict(frozen=True)

    thickness_a: float = Field(..., gt=0, description="Full slab width a in micrometers")
    layer_split: float = Field(0.5, gt=0, lt=1, description="Scaled position where the index switches")


class BilayerIndex(BaseModel):
    """Complex index z = eta + i*kappa on the first layer and its conjugate on the second"""

    model_config = ConfigDict(frozen=True)

    eta: float = Field(..., ge=1, le=4, description="Real part of the refractive index")
    kappa: float = Field(0.0, gt=-1, lt=1, description="Imaginary part; kappa < 0 puts gain in the left layer")

    @property
    def z(self) -> complex:
        return complex(self.eta, self.kappa)

    @property
    def alpha(self) -> float:
        return self.kappa / self.eta

    @property
    def beta(self) -> float:
        s = self.eta ** 2 + self.kappa ** 2
        return (s - 1.0) / (s + 1.0)

    def mirrored(self) -> "BilayerIndex":
        """The kappa -> -kappa (time-reversed) configuration"""
        return BilayerIndex(eta=self.eta, kappa=-self.kappa)


class KerrMedium(BaseModel):
    """Kerr coefficient sigma; gamma = -sigma*K^2 is the dimensionless strength"""

    model_config = ConfigDict(frozen=True)

    sigma: float = Field(0.0, description="Dimensionless Kerr coefficient")

    def gamma(self, K: float) -> float:
        return -self.sigma * K * K

    def weakly_nonlinear(self, K: float, limit: float, intensity: float = 0.5) -> bool:
        """True when |gamma| |N+|^2 <= limit K^2 for output intensity I = |N+|^2/2 >= 0"""
        if intensity < 0:
            return False
        return abs(self.gamma(K)) * 2.0 * intensity <= limit * K * K


class Mode(BaseModel):
    """A resonance: mode number, dimensionless wavenumber a*k0 and wavelength"""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=0)
    K0: float = Field(..., gt=0, description="Dimensionless wavenumber a*k0")
    lambda0: float = Field(..., gt=0, description="Wavelength in micrometers")

    @classmethod
    def from_wavenumber(cls, m: int, K0: float, a_um: float) -> "Mode":
        return cls(m=int(m), K0=K0, lambda0=2.0 * math.pi * a_um / K0)


class ProfileDocument(BaseModel):
    """JSON profile document: {"a_um", "eta", "kappa", "sigma"}"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a_um: float = Field(..., gt=0, description="Slab width in micrometers")
    eta: float = Field(..., ge=1, le=4)
    kappa: float = Field(0.0, gt=-1, lt=1)
    sigma: float = Field(0.0)

    @property
    def geometry(self) -> SlabGeometry:
        return SlabGeometry(thickness_a=self.a_um)

    @property
    def index(self) -> BilayerIndex:
        return BilayerIndex(eta=self.eta, kappa=self.kappa)

    @property
    def kerr(self) -> KerrMedium:
        return KerrMedium(sigma=self.sigma)

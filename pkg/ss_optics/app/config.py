"""
Application Configuration
Solver tolerances and runtime settings using Pydantic BaseSettings
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings with SS_OPTICS_* environment variable support"""

    model_config = SettingsConfigDict(
        env_prefix="SS_OPTICS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Runtime
    threads: int = Field(4, ge=1, description="Upper bound on sweep worker threads")
    log_level: str = "INFO"
    log_format: Literal["text", "json"] = "text"
    output_digits: int = Field(9, ge=1, le=17)

    # Root finding
    newton_tolerance: float = Field(1e-12, gt=0)
    newton_max_iterations: int = Field(50, ge=1)
    bisection_xtol: float = Field(1e-14, gt=0)

    # Scattering / integration
    singular_gplus_ratio: float = Field(1e-8, gt=0, description="|G+| < ratio*K marks a singular point")
    ode_phase_step: float = Field(2e-3, gt=0, description="Max |n|*K*h per RK4 step")

    # Perturbation theory
    perturbative_limit: float = Field(1e-2, gt=0, description="Max |sigma|*|N+|^2 treated as weak")

    # Oracle suite
    oracle_seed: int = 20140101
    oracle_mode: int = Field(20, ge=1)


@lru_cache()
def get_settings() -> Settings:
    """Get cached application settings"""
    return Settings()

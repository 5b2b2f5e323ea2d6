"""
Pydantic models for command-line invocations
"""

from pathlib import Path
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

COMMANDS = ("modes", "threshold", "exact", "sweep", "emission", "oracle-check")

PROFILE_KEYS = ("a_um", "eta", "kappa", "sigma")
COMMAND_KEYS = ("lambda_um", "m", "g_max_ratio", "samples", "lambda_min", "lambda_max")
OVERRIDE_KEYS = PROFILE_KEYS + COMMAND_KEYS


class CommandSpec(BaseModel):
    """One resolved command: which solver to run, on what, writing where"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str = Field(..., description="One of " + ", ".join(COMMANDS))
    profile_path: Optional[Path] = Field(None, description="Profile JSON document")
    output_path: Optional[Path] = Field(None, description="Artifact destination")
    overrides: Dict[str, float] = Field(default_factory=dict, description="key=value overrides")
    force: bool = Field(False, description="Allow overwriting an existing artifact")

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"unknown command '{value}'")
        return value

    @field_validator("overrides")
    @classmethod
    def _known_keys(cls, value: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(value) - set(OVERRIDE_KEYS))
        if unknown:
            raise ValueError(f"unknown override keys: {', '.join(unknown)}")
        return value

    def profile_overrides(self) -> Dict[str, float]:
        return {k: v for k, v in self.overrides.items() if k in PROFILE_KEYS}

    def option(self, key: str, default=None):
        return self.overrides.get(key, default)


class OracleCheck(BaseModel):
    """Outcome of one independent-oracle comparison"""

    model_config = ConfigDict(frozen=True)

    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

"""
Tests for settings, error codes and schema validation
"""

import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError

from ss_optics.app import errors
from ss_optics.app.config import Settings, get_settings
from ss_optics.app.startup import setup_logging
from ss_optics.schemas.command_schemas import CommandSpec
from ss_optics.schemas.profile_schemas import BilayerIndex
from ss_optics.schemas.threshold_schemas import SweepCurve, SweepPoint
from ss_optics.services.helmholtz import build_zeta


class TestSettings:
    """Test environment-driven configuration"""

    def test_defaults(self, settings):
        """Test default tolerances"""
        assert settings.newton_tolerance == 1e-12
        assert settings.output_digits == 9
        assert settings.log_format == "text"

    def test_environment_override(self, monkeypatch):
        """Test SS_OPTICS_* variables"""
        monkeypatch.setenv("SS_OPTICS_THREADS", "2")
        monkeypatch.setenv("SS_OPTICS_LOG_FORMAT", "json")
        assert get_settings().threads == 2
        assert get_settings().log_format == "json"

    def test_invalid_value(self, monkeypatch):
        """Test that invalid settings are rejected"""
        monkeypatch.setenv("SS_OPTICS_THREADS", "0")
        with pytest.raises(ValidationError):
            Settings()

    def test_json_logging_setup(self, reset_logging):
        """Test that setup_logging installs a single handler"""
        setup_logging(Settings(log_format="json", log_level="DEBUG"))
        root = logging.getLogger()
        assert len(root.handlers) == 1
        assert root.level == logging.DEBUG


class TestErrors:
    """Test the exit-code contract"""

    @pytest.mark.parametrize(
        "error, code",
        [
            (errors.DomainError("x"), 1),
            (errors.ProfileValidationError("x"), 1),
            (errors.OutputExistsError("x"), 1),
            (errors.RegimeError("x"), 1),
            (errors.NoSolutionError("x"), 2),
            (errors.BracketError("x"), 2),
            (errors.ConvergenceError("x", residual=1.0), 2),
            (errors.DegenerateRootError("x"), 2),
            (errors.DivergentAmplitudeError("x", 0.0, 0.0), 2),
            (errors.IntegrationError("x"), 2),
            (errors.GammaTooLargeError("x"), 3),
            (errors.OracleDisagreementError("x"), 3),
        ],
    )
    def test_exit_codes(self, error, code):
        """Test that each error carries its process status"""
        assert isinstance(error, errors.SSOpticsError)
        assert error.exit_code == code

    def test_domain_error_is_value_error(self):
        """Test that domain errors can be caught as ValueError"""
        assert isinstance(errors.DomainError("x"), ValueError)


class TestCommandSpec:
    """Test command validation"""

    def test_known_command(self):
        """Test splitting profile and command overrides"""
        spec = CommandSpec(command="exact", overrides={"eta": 3.0, "m": 2500.0})
        assert spec.profile_overrides() == {"eta": 3.0}
        assert spec.option("m") == 2500.0
        assert spec.option("samples", 11) == 11

    def test_unknown_command(self):
        """Test that unknown commands are rejected"""
        with pytest.raises(ValidationError):
            CommandSpec(command="plot")

    def test_unknown_override(self):
        """Test that unknown override keys are rejected"""
        with pytest.raises(ValidationError):
            CommandSpec(command="exact", overrides={"colour": 1.0})


class TestSweepCurve:
    """Test sweep curve validation"""

    @staticmethod
    def point(x):
        return SweepPoint(abscissa=x, g0=1.0, kappa0=-1e-3, K0=10.0, residual=0.0)

    def test_monotone(self):
        """Test that increasing abscissae are accepted"""
        curve = SweepCurve(axis="eta0", slab_kind="bilayer", points=(self.point(1.5), self.point(2.0)))
        assert len(curve.valid_points) == 2

    def test_not_monotone(self):
        """Test that repeated abscissae are rejected"""
        with pytest.raises(ValidationError):
            SweepCurve(axis="eta0", slab_kind="bilayer", points=(self.point(1.5), self.point(1.5)))

    def test_unknown_axis(self):
        """Test the axis pattern"""
        with pytest.raises(ValidationError):
            SweepCurve(axis="kappa0", slab_kind="bilayer", points=())


class TestPiecewiseSolution:
    """Test vectorized evaluation"""

    def test_scalar_and_array(self):
        """Test that scalars and arrays evaluate consistently"""
        zeta = build_zeta(BilayerIndex(eta=2.0, kappa=-0.01), 7.0)
        x = np.array([0.1, 0.5, 0.9])
        values = zeta.value(x)
        assert values.shape == (3,)
        assert values[2] == pytest.approx(zeta.value(0.9))
        assert isinstance(zeta.value(0.9), complex)
        assert math.isfinite(abs(zeta.derivative(0.0)))

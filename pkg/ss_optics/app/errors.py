"""
Solver Errors
Exception hierarchy shared by the services; the CLI maps exit_code to the process status
"""

from typing import Optional


class SSOpticsError(Exception):
    """Base class for every error raised by ss_optics"""

    exit_code: int = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DomainError(SSOpticsError, ValueError):
    """Input outside the physical domain of an operation"""


class ProfileValidationError(SSOpticsError):
    """Profile document or command overrides failed validation"""


class OutputExistsError(SSOpticsError):
    """Refusing to overwrite an artifact without --force"""


class RegimeError(SSOpticsError):
    """Parameters fall outside the asymptotic regime of a formula"""


class NoSolutionError(SSOpticsError):
    """No spectral singularity exists for the requested window"""

    exit_code = 2


class BracketError(SSOpticsError):
    """A bracketed root search found no sign change"""

    exit_code = 2


class ConvergenceError(SSOpticsError):
    """An iterative solver ran out of iterations"""

    exit_code = 2

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class DegenerateRootError(SSOpticsError):
    """Jacobian or coefficient system is singular at the root"""

    exit_code = 2


class DivergentAmplitudeError(SSOpticsError):
    """Reflection and transmission amplitudes diverge (spectral singularity)"""

    exit_code = 2

    def __init__(self, message: str, f_minus: float, g_plus: float):
        super().__init__(message)
        self.f_minus = f_minus
        self.g_plus = g_plus


class IntegrationError(SSOpticsError):
    """ODE integration produced non-finite values"""

    exit_code = 2


class GammaTooLargeError(SSOpticsError):
    """Nonlinear shooting left the linear-response regime"""

    exit_code = 3


class OracleDisagreementError(SSOpticsError):
    """An independent oracle disagrees with the closed-form result"""

    exit_code = 3

"""
Helmholtz Service
Exact piecewise solutions, G+ and scattering data for the PT-symmetric bilayer,
plus a fixed-step integrator used as an independent oracle
"""

import cmath
import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..app.config import Settings, get_settings
from ..app.errors import DivergentAmplitudeError, DomainError, IntegrationError
from ..schemas.profile_schemas import BilayerIndex
from ..schemas.scattering_schemas import PiecewiseSolution, SampledSolution, ScatteringData
from .profiles import refractive_index

logger = logging.getLogger(__name__)

SPLIT = 0.5


def _check(index: BilayerIndex, K: float) -> None:
    if K <= 0:
        raise DomainError(f"K must be positive (got {K})")
    if index.z == 0:
        raise DomainError("complex index vanishes")


def match_plane_waves(value: complex, slope: complex, rate: complex, x: float) -> Tuple[complex, complex]:
    """Coefficients (c+, c-) of c+ e^{i rate x} + c- e^{-i rate x} with given value and slope at x"""
    ratio = slope / (1j * rate)
    return (
        cmath.exp(-1j * rate * x) * (value + ratio) / 2.0,
        cmath.exp(1j * rate * x) * (value - ratio) / 2.0,
    )


def build_zeta(index: BilayerIndex, K: float, N_plus: complex = 1.0) -> PiecewiseSolution:
    """Solution with purely outgoing data at x = 1: zeta(1) = N e^{iK}, zeta'(1) = iK N e^{iK}"""
    _check(index, K)
    N = complex(N_plus)
    z = index.z
    zc = z.conjugate()
    eta, kappa = index.eta, index.kappa

    C = N * cmath.exp(-1j * (zc - 1) * K) * (zc + 1) / (2 * zc)
    D = N * cmath.exp(1j * (zc + 1) * K) * (zc - 1) / (2 * zc)

    z_plus, z_minus = 2 * eta, 2j * kappa
    a_plus, a_minus = eta * K, 1j * kappa * K
    pref = N * cmath.exp(1j * K) / (4 * abs(z) ** 2)
    A = pref * (z_minus * (zc - 1) * cmath.exp(-1j * a_minus) + z_plus * (zc + 1) * cmath.exp(-1j * a_plus))
    B = pref * (z_minus * (zc + 1) * cmath.exp(1j * a_minus) + z_plus * (zc - 1) * cmath.exp(1j * a_plus))

    return PiecewiseSolution(A=A, B=B, C=C, D=D, N_plus=N, K=K, z=z, split=SPLIT)


def build_xi(index: BilayerIndex, K: float, N_minus: complex = 1.0) -> PiecewiseSolution:
    """Left-started solution: xi(0) = N, xi'(0) = -iK N. N_plus holds N- here."""
    _check(index, K)
    N = complex(N_minus)
    z = index.z
    zc = z.conjugate()

    E = N * (z - 1) / (2 * z)
    F = N * (z + 1) / (2 * z)
    v = z * K
    value = E * cmath.exp(1j * v * SPLIT) + F * cmath.exp(-1j * v * SPLIT)
    slope = 1j * v * (E * cmath.exp(1j * v * SPLIT) - F * cmath.exp(-1j * v * SPLIT))
    C, D = match_plane_waves(value, slope, zc * K, SPLIT)

    return PiecewiseSolution(A=E, B=F, C=C, D=D, N_plus=N, K=K, z=z, split=SPLIT)


def uv_values(eta: float, kappa: float, K: float) -> Tuple[float, float]:
    """U and V of the bilayer; both even in kappa"""
    s = eta * eta + kappa * kappa
    U = (s + 1) * eta * math.sin(eta * K) - (s - 1) * kappa * math.sinh(kappa * K)
    V = 2.0 * (eta * eta * math.cos(eta * K) + kappa * kappa * math.cosh(kappa * K))
    return U, V


def uv_functions(index: BilayerIndex, K: float) -> Tuple[float, float]:
    return uv_values(index.eta, index.kappa, K)


def gplus_linear(index: BilayerIndex, K: float) -> Tuple[complex, float, float]:
    """G+/N+ = e^{iK} K (U + iV)/(eta^2 + kappa^2) together with U and V"""
    _check(index, K)
    U, V = uv_functions(index, K)
    s = index.eta ** 2 + index.kappa ** 2
    return cmath.exp(1j * K) * K * complex(U, V) / s, U, V


def cpa_symmetry_residual(index: BilayerIndex, K: float) -> float:
    """max |U(kappa) - U(-kappa)|, |V(kappa) - V(-kappa)|; zero for the self-dual pair"""
    U, V = uv_functions(index, K)
    U_m, V_m = uv_functions(index.mirrored(), K)
    return max(abs(U - U_m), abs(V - V_m))


def jost_data(index: BilayerIndex, K: float) -> Tuple[complex, complex, complex, complex]:
    """(F+, F-, G+, G-) for N+ = N- = 1"""
    zeta = build_zeta(index, K)
    xi = build_xi(index, K)
    z0, dz0 = zeta.value(0.0), zeta.derivative(0.0)
    x1, dx1 = xi.value(1.0), xi.derivative(1.0)
    return (
        complex(dx1 + 1j * K * x1),
        complex(dx1 - 1j * K * x1),
        complex(dz0 + 1j * K * z0),
        complex(dz0 - 1j * K * z0),
    )


def transfer_matrix(index: BilayerIndex, K: float) -> np.ndarray:
    """Transfer matrix built from the zeta and xi Jost data"""
    F_p, F_m, G_p, G_m = jost_data(index, K)
    return _assemble_matrix(K, F_p, F_m, G_p, G_m)


def _assemble_matrix(K: float, F_p: complex, F_m: complex, G_p: complex, G_m: complex) -> np.ndarray:
    if G_p == 0 or F_m == 0:
        raise DivergentAmplitudeError("transfer matrix undefined at an exact zero of G+", abs(F_m), abs(G_p))
    two_ik = 2j * K
    M22 = -cmath.exp(1j * K) * F_m / two_ik
    M12 = cmath.exp(-1j * K) * F_p / two_ik
    M21 = M22 * G_m / G_p
    # from the zeta data alone; det M = 1 is then the Wronskian identity
    M11 = (two_ik + M12 * G_m) / G_p
    return np.array([[M11, M12], [M21, M22]], dtype=complex)


def scattering(
    index: BilayerIndex,
    K: float,
    strict: bool = False,
    settings: Optional[Settings] = None,
) -> ScatteringData:
    """Reflection/transmission amplitudes and the transfer matrix at real K"""
    settings = settings or get_settings()
    F_p, F_m, G_p, G_m = jost_data(index, K)

    ratio = abs(G_p) / K
    singular = ratio < settings.singular_gplus_ratio
    if G_p == 0 or F_m == 0 or (singular and strict):
        logger.error(f"Divergent amplitudes at K={K}: |F-|={abs(F_m):.3e}, |G+|={abs(G_p):.3e}")
        raise DivergentAmplitudeError(
            f"reflection and transmission amplitudes diverge at K={K}", abs(F_m), abs(G_p)
        )
    if singular:
        logger.debug(f"Near-singular scattering at K={K}: |G+|/K={ratio:.3e}")

    return ScatteringData(
        R_left=-G_m / G_p,
        R_right=-cmath.exp(-2j * K) * F_p / F_m,
        T=2j * K / G_p,
        M=_assemble_matrix(K, F_p, F_m, G_p, G_m),
        F_plus=F_p,
        F_minus=F_m,
        G_plus=G_p,
        G_minus=G_m,
        singular=singular,
        residual=ratio,
    )


def ode_steps(index: BilayerIndex, K: float, samples: int = 1000, settings: Optional[Settings] = None) -> int:
    """RK4 steps per layer so that |n| K h stays below the configured phase step"""
    settings = settings or get_settings()
    per_layer = math.ceil(abs(index.z) * K * SPLIT / settings.ode_phase_step)
    return max(per_layer, math.ceil(samples / 2))


def _rk4_layer(n2: complex, K: float, gamma: float, psi: complex, dpsi: complex, x0: float, x1: float, steps: int, record):
    h = (x1 - x0) / steps
    k2n2 = K * K * n2

    def accel(p: complex) -> complex:
        return (gamma * (p.real * p.real + p.imag * p.imag) - k2n2) * p

    for _ in range(steps):
        a1 = accel(psi)
        p2 = psi + 0.5 * h * dpsi
        d2 = dpsi + 0.5 * h * a1
        a2 = accel(p2)
        p3 = psi + 0.5 * h * d2
        d3 = dpsi + 0.5 * h * a2
        a3 = accel(p3)
        p4 = psi + h * d3
        d4 = dpsi + h * a3
        a4 = accel(p4)
        psi, dpsi = (
            psi + h * (dpsi + 2 * d2 + 2 * d3 + d4) / 6.0,
            dpsi + h * (a1 + 2 * a2 + 2 * a3 + a4) / 6.0,
        )
        if record is not None:
            record.append((psi, dpsi))
    if not (cmath.isfinite(psi) and cmath.isfinite(dpsi)):
        raise IntegrationError(f"non-finite solution while integrating [{x1}, {x0}]")
    return psi, dpsi


def shoot(
    index: BilayerIndex,
    K: float,
    gamma: float,
    init: Tuple[complex, complex],
    steps: int,
    record: Optional[list] = None,
) -> Tuple[complex, complex]:
    """Integrate psi'' + K^2 n^2 psi = gamma |psi|^2 psi from x = 1 down to x = 0"""
    n_left, n_right = (complex(n) for n in refractive_index([0.5 * SPLIT, 0.5 * (1.0 + SPLIT)], index))
    psi, dpsi = complex(init[0]), complex(init[1])
    psi, dpsi = _rk4_layer(n_right * n_right, K, gamma, psi, dpsi, 1.0, SPLIT, steps, record)
    return _rk4_layer(n_left * n_left, K, gamma, psi, dpsi, SPLIT, 0.0, steps, record)


def ode_oracle(
    index: BilayerIndex,
    K: float,
    gamma: float = 0.0,
    init: Optional[Tuple[complex, complex]] = None,
    samples: int = 1000,
    settings: Optional[Settings] = None,
) -> SampledSolution:
    """Classical RK4 integration right to left; every step is returned as a sample"""
    _check(index, K)
    if samples < 100:
        raise DomainError(f"ode_oracle needs at least 100 samples (got {samples})")
    if init is None:
        edge = cmath.exp(1j * K)
        init = (edge, 1j * K * edge)

    steps = ode_steps(index, K, samples, settings)
    record = [(complex(init[0]), complex(init[1]))]
    shoot(index, K, gamma, init, steps, record)

    x = np.concatenate([
        np.linspace(1.0, SPLIT, steps + 1),
        np.linspace(SPLIT, 0.0, steps + 1)[1:],
    ])
    values = np.array(record, dtype=complex)
    logger.debug(f"ode_oracle: K={K}, gamma={gamma}, {2 * steps} steps")
    # ascending x
    return SampledSolution(x=x[::-1].copy(), psi=values[::-1, 0].copy(), dpsi=values[::-1, 1].copy())

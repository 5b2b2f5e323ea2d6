"""
Oracle Suite
Cross-checks of the closed-form results against independent numerical paths
"""

import logging
import math
from typing import List, Optional

import numpy as np

from ..app.config import Settings, get_settings
from ..app.errors import OracleDisagreementError, SSOpticsError
from ..schemas.command_schemas import OracleCheck
from ..schemas.profile_schemas import BilayerIndex
from ..schemas.threshold_schemas import ThresholdSolution
from .helmholtz import build_zeta, ode_oracle, scattering
from .linear_ss import bilayer_ss_exact, bilayer_threshold_eta1, bilayer_threshold_general, exact_system_residual
from .nonlinear_ss import (
    first_order_correction,
    nonlinear_oracle,
    output_coefficients,
    perturbation_coefficients,
    quadrature_pq,
)

logger = logging.getLogger(__name__)


def ode_deviation(index: BilayerIndex, K: float, samples: int = 1000, settings: Optional[Settings] = None) -> float:
    """max |psi_ode - zeta| / max |zeta| over the integration grid"""
    sampled = ode_oracle(index, K, 0.0, samples=samples, settings=settings)
    exact = build_zeta(index, K).value(sampled.x)
    return float(np.max(np.abs(sampled.psi - exact)) / np.max(np.abs(exact)))


def oracle_root(eta0: float, a: float, m: int, settings: Optional[Settings] = None) -> ThresholdSolution:
    """Exact root of a moderate mode, cheap enough for fixed-step integration"""
    if eta0 == 1.0:
        guess = bilayer_threshold_eta1(m, a, settings)
    else:
        guess = bilayer_threshold_general(eta0, m, a, settings)
    return bilayer_ss_exact(eta0, a, guess, settings)


class OracleSuite:
    """Runs every oracle comparison and collects pass/fail rows"""

    ODE_TOLERANCE = 1e-8
    MATRIX_TOLERANCE = 1e-8
    SYMMETRY_TOLERANCE = 1e-10
    QUADRATURE_TOLERANCE = 1e-10
    SLOPE_TOLERANCE = 1e-2

    def __init__(self, eta0: float, a: float, settings: Optional[Settings] = None):
        self.eta0 = eta0
        self.a = a
        self.settings = settings or get_settings()

    def _check(self, name: str, residual: float, tolerance: float, detail: str = "") -> OracleCheck:
        passed = bool(np.isfinite(residual) and residual < tolerance)
        log = logger.info if passed else logger.error
        log(f"oracle {name}: residual={residual:.3e} tolerance={tolerance:.1e} {'pass' if passed else 'FAIL'}")
        return OracleCheck(name=name, residual=residual, tolerance=tolerance, passed=passed, detail=detail)

    def ode_points(self, count: int = 10) -> OracleCheck:
        rng = np.random.default_rng(self.settings.oracle_seed)
        worst = 0.0
        for _ in range(count):
            index = BilayerIndex(eta=float(rng.uniform(1.0, 4.0)), kappa=float(rng.uniform(-0.1, 0.1)))
            K = float(rng.uniform(1.0, 30.0))
            worst = max(worst, ode_deviation(index, K, settings=self.settings))
        return self._check("ode_vs_analytic", worst, self.ODE_TOLERANCE, f"{count} random points")

    def run(self, sigma: float = 1e-6) -> List[OracleCheck]:
        checks = [self.ode_points()]
        try:
            ss = oracle_root(self.eta0, self.a, self.settings.oracle_mode, self.settings)
        except SSOpticsError as e:
            checks.append(OracleCheck(name="oracle_root", residual=math.inf, tolerance=0.0, passed=False, detail=e.message))
            return checks

        index = ss.index
        checks.append(self._check("ode_at_root", ode_deviation(index, ss.K0, settings=self.settings), self.ODE_TOLERANCE))

        data = scattering(index, ss.K0, settings=self.settings)
        m22 = abs(data.M[1, 1]) / np.linalg.norm(data.M)
        checks.append(self._check("m22_at_root", float(m22), self.MATRIX_TOLERANCE))

        mirrored = exact_system_residual(ss.eta0, ss.K0, -ss.kappa0)
        checks.append(self._check("kappa_mirror_root", mirrored, self.SYMMETRY_TOLERANCE))

        closed = first_order_correction(index, ss.K0)
        P, Q = quadrature_pq(index, ss.K0)
        pq = max(abs(closed.P - P) / abs(P), abs(closed.Q - Q) / abs(Q))
        checks.append(self._check("pq_vs_quadrature", pq, self.QUADRATURE_TOLERANCE))

        pr = perturbation_coefficients(ss)
        try:
            K1, kappa1 = nonlinear_oracle(ss, sigma, settings=self.settings)
            slope = max(abs(K1 / pr.K1_per_I - 1.0), abs(kappa1 / pr.kappa1_per_I - 1.0))
            checks.append(
                self._check("nonlinear_slopes", slope, self.SLOPE_TOLERANCE, f"K1={K1:.9g}, kappa1={kappa1:.9g}")
            )
            A_shot, B_shot = output_coefficients(ss.K0, ss.kappa0, K1, kappa1)
            spread = max(abs(A_shot / pr.A_coef - 1.0), abs(B_shot / pr.B_coef - 1.0))
            checks.append(
                self._check("output_coefficients", spread, self.SLOPE_TOLERANCE, f"A={A_shot:.9g}, B={B_shot:.9g}")
            )
        except SSOpticsError as e:
            for name in ("nonlinear_slopes", "output_coefficients"):
                checks.append(
                    OracleCheck(
                        name=name, residual=math.inf, tolerance=self.SLOPE_TOLERANCE, passed=False, detail=e.message
                    )
                )
        return checks


def raise_on_failure(checks: List[OracleCheck]) -> None:
    failed = [c.name for c in checks if not c.passed]
    if failed:
        raise OracleDisagreementError(f"oracle disagreement: {', '.join(failed)}")

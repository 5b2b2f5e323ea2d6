"""
Nonlinear Spectral Singularity Service
First-order Kerr perturbation of the bilayer threshold: the correction zeta1,
the coefficients a, b, c, output-intensity and wavelength-shift coefficients,
emission curves and a shooting oracle for the full nonlinear problem
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from ..app.config import Settings, get_settings
from ..app.errors import DegenerateRootError, DomainError, GammaTooLargeError
from ..schemas.emission_schemas import EmissionCurve, FirstOrderSolution, PerturbationResult
from ..schemas.profile_schemas import BilayerIndex, KerrMedium
from ..schemas.threshold_schemas import Regime, ThresholdSolution
from .helmholtz import SPLIT, build_zeta, gplus_linear, ode_steps, shoot
from .linear_ss import (
    bilayer_ss_exact,
    bilayer_threshold_eta1,
    bilayer_threshold_general,
    homogeneous_threshold,
)

logger = logging.getLogger(__name__)

SMALL_RATE = 1e-12
# |gamma| / K0^2 window for the shooting oracle
ORACLE_GAMMA_RANGE = (1e-8, 1e-5)


class ExpSum:
    """Exponential polynomial sum_j c_j exp(mu_j x) with complex c_j, mu_j"""

    def __init__(self, coefs, rates):
        self.coefs = np.asarray(coefs, dtype=complex).ravel()
        self.rates = np.asarray(rates, dtype=complex).ravel()
        if self.coefs.shape != self.rates.shape:
            raise DomainError("ExpSum needs one rate per coefficient")

    def __len__(self) -> int:
        return self.coefs.size

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(np.multiply.outer(x, self.rates)) @ self.coefs
        return out[()] if np.ndim(out) == 0 else out

    def __mul__(self, other):
        if isinstance(other, ExpSum):
            return ExpSum(
                np.multiply.outer(self.coefs, other.coefs),
                np.add.outer(self.rates, other.rates),
            )
        return ExpSum(self.coefs * other, self.rates)

    __rmul__ = __mul__

    def conj(self) -> "ExpSum":
        """Complex conjugate for real arguments"""
        return ExpSum(self.coefs.conj(), self.rates.conj())

    def shift(self, nu: complex) -> "ExpSum":
        """Multiply by exp(nu x)"""
        return ExpSum(self.coefs, self.rates + nu)

    def derivative(self) -> "ExpSum":
        return ExpSum(self.coefs * self.rates, self.rates)

    def integrate(self, lo: float, hi):
        """Closed-form integral from lo to hi (hi may be an array)"""
        hi = np.asarray(hi, dtype=float)
        span = hi - lo
        mu = self.rates
        small = np.abs(mu) < SMALL_RATE
        safe_mu = np.where(small, 1.0, mu)
        arg = np.multiply.outer(span, mu)
        kernel = np.where(small, np.multiply.outer(span, np.ones_like(mu)) * (1.0 + 0.5 * arg), np.expm1(arg) / safe_mu)
        out = kernel @ (self.coefs * np.exp(mu * lo))
        return out[()] if np.ndim(out) == 0 else out


def _green_solution(source: ExpSum, w: complex, x0: float, x):
    """u(x) = int_{x0}^{x} sin(w(x-y))/w source(y) dy and u'(x)"""
    x = np.asarray(x, dtype=float)
    f_minus = source.shift(-1j * w).integrate(x0, x)
    f_plus = source.shift(1j * w).integrate(x0, x)
    e_p, e_m = np.exp(1j * w * x), np.exp(-1j * w * x)
    value = (e_p * f_minus - e_m * f_plus) / (2j * w)
    slope = 0.5 * (e_p * f_minus + e_m * f_plus)
    return value, slope


def _cubic_source(c_plus: complex, c_minus: complex, w: complex) -> ExpSum:
    """|psi|^2 psi for psi = c_plus e^{iwx} + c_minus e^{-iwx}"""
    psi = ExpSum([c_plus, c_minus], [1j * w, -1j * w])
    return psi * psi.conj() * psi


def first_order_correction(index: BilayerIndex, K: float, N_plus: complex = 1.0) -> FirstOrderSolution:
    """Kerr correction zeta1 with zero data at x = 1 and a smooth match at x = 1/2"""
    zeta0 = build_zeta(index, K, N_plus)
    z = index.z
    v = z * K
    w = z.conjugate() * K

    right_source = _cubic_source(zeta0.C, zeta0.D, w)
    left_source = _cubic_source(zeta0.A, zeta0.B, v)

    P, Q = _green_solution(right_source, w, 1.0, SPLIT)
    P, Q = complex(P), complex(Q)
    tilde_A = cmath.exp(-1j * v * SPLIT) * (P - 1j * Q / v) / 2.0
    tilde_B = cmath.exp(1j * v * SPLIT) * (P + 1j * Q / v) / 2.0

    def pieces(x):
        x = np.asarray(x, dtype=float)
        r_val, r_der = _green_solution(right_source, w, 1.0, x)
        l_val, l_der = _green_solution(left_source, v, SPLIT, x)
        e_p, e_m = np.exp(1j * v * x), np.exp(-1j * v * x)
        l_val = l_val + tilde_A * e_p + tilde_B * e_m
        l_der = l_der + 1j * v * (tilde_A * e_p - tilde_B * e_m)
        left = x <= SPLIT
        return np.where(left, l_val, r_val), np.where(left, l_der, r_der)

    def zeta1(x):
        out = pieces(x)[0]
        return out[()] if np.ndim(out) == 0 else out

    def dzeta1(x):
        out = pieces(x)[1]
        return out[()] if np.ndim(out) == 0 else out

    return FirstOrderSolution(
        P=P,
        Q=Q,
        tilde_A=complex(tilde_A),
        tilde_B=complex(tilde_B),
        K=K,
        z=z,
        N_plus=complex(N_plus),
        zeta1=zeta1,
        dzeta1=dzeta1,
    )


def first_order_gplus(index: BilayerIndex, K: float, N_plus: complex = 1.0) -> complex:
    """G+^(1) = zeta1'(0) + iK zeta1(0); cubic in N+"""
    correction = first_order_correction(index, K, N_plus)
    return complex(correction.dzeta1(0.0) + 1j * K * correction.zeta1(0.0))


def quadrature_pq(index: BilayerIndex, K: float, limit: int = 500) -> Tuple[complex, complex]:
    """P and Q by adaptive quadrature of the Green-kernel integrals"""
    zeta0 = build_zeta(index, K)
    w = index.z.conjugate() * K

    def source(y: float) -> complex:
        psi = complex(zeta0.value(y))
        return abs(psi) ** 2 * psi

    def integral(kernel) -> complex:
        opts = dict(limit=limit, epsabs=0.0, epsrel=1e-13)
        re, _ = integrate.quad(lambda y: (kernel(y) * source(y)).real, SPLIT, 1.0, **opts)
        im, _ = integrate.quad(lambda y: (kernel(y) * source(y)).imag, SPLIT, 1.0, **opts)
        return -complex(re, im)

    P = integral(lambda y: cmath.sin(w * (SPLIT - y)) / w)
    Q = integral(lambda y: cmath.cos(w * (SPLIT - y)))
    return P, Q


def _gplus_derivatives(eta: float, kappa: float, K: float) -> Tuple[complex, complex]:
    """Analytic dG+/dK and dG+/dkappa of e^{iK} K (U + iV)/S, per N+"""
    s = eta * eta + kappa * kappa
    sn, cs = math.sin(eta * K), math.cos(eta * K)
    sh, ch = math.sinh(kappa * K), math.cosh(kappa * K)
    U = (s + 1) * eta * sn - (s - 1) * kappa * sh
    V = 2.0 * (eta * eta * cs + kappa * kappa * ch)
    W = complex(U, V)

    U_K = (s + 1) * eta * eta * cs - (s - 1) * kappa * kappa * ch
    V_K = 2.0 * (-eta ** 3 * sn + kappa ** 3 * sh)
    U_kap = 2.0 * kappa * eta * sn - 2.0 * kappa * kappa * sh - (s - 1) * (sh + kappa * K * ch)
    V_kap = 2.0 * (2.0 * kappa * ch + kappa * kappa * K * sh)

    phase = cmath.exp(1j * K)
    d_K = phase * ((1j * K + 1) * W + K * complex(U_K, V_K)) / s
    d_kappa = phase * K * (complex(U_kap, V_kap) / s - 2.0 * kappa * W / (s * s))
    return d_K, d_kappa


def finite_difference_coefficients(index: BilayerIndex, K: float, h: float = 1e-6) -> Tuple[complex, complex]:
    """Central differences of G+/N+ in K and kappa"""
    def g(K_, kappa_):
        return gplus_linear(BilayerIndex(eta=index.eta, kappa=kappa_), K_)[0]

    d_K = (g(K + h, index.kappa) - g(K - h, index.kappa)) / (2 * h)
    d_kappa = (g(K, index.kappa + h) - g(K, index.kappa - h)) / (2 * h)
    return d_K, d_kappa


def perturbation_coefficients(ss: ThresholdSolution, N_plus: complex = 1.0) -> PerturbationResult:
    """Solve a K1 + b kappa1 = |N+|^2 c for the first-order threshold shift, per unit |N+|^2"""
    if ss.regime != Regime.EXACT:
        raise DomainError("perturbation coefficients need a converged exact root")
    K0, kappa0 = ss.K0, ss.kappa0
    index = ss.index

    a_coef, b_coef = _gplus_derivatives(ss.eta0, kappa0, K0)
    N = complex(N_plus)
    if N == 0:
        raise DomainError("N+ must be nonzero")
    c_coef = -first_order_gplus(index, K0, N) / (N * abs(N) ** 2)

    det = (a_coef * b_coef.conjugate()).imag
    if abs(det) <= 1e-12 * abs(a_coef) * abs(b_coef):
        logger.error(f"Degenerate singularity at m={ss.mode.m}: Im(a b*) = {det:.3e}")
        raise DegenerateRootError(f"Im(a b*) vanishes at m={ss.mode.m}")

    K1 = (b_coef.conjugate() * c_coef).imag / det
    kappa1 = (a_coef * c_coef.conjugate()).imag / det

    im_bc = (b_coef * c_coef.conjugate()).imag
    im_ac = (a_coef * c_coef.conjugate()).imag
    denominator = im_bc + K0 / abs(kappa0) * im_ac
    A_coef = det / (2.0 * K0 * denominator)
    B_coef = im_bc / denominator

    logger.info(f"perturbation m={ss.mode.m}: A={A_coef:.6e}, B={B_coef:.6e}")
    return PerturbationResult(
        m=ss.mode.m,
        K0=K0,
        kappa0=kappa0,
        g0=ss.g0,
        lambda0=ss.lambda0,
        a_coef=a_coef,
        b_coef=b_coef,
        c_coef=c_coef,
        K1_per_I=K1,
        kappa1_per_I=kappa1,
        A_coef=A_coef,
        B_coef=B_coef,
    )


def output_coefficients(K0: float, kappa0: float, K1: float, kappa1: float) -> Tuple[float, float]:
    """
    (A, B) from first-order slopes per unit |N+|^2, through g = -2 K kappa / a
    and lambda = 2 pi a / K with I = |N+|^2 / 2 and gamma = -sigma K0^2
    """
    if kappa0 == 0:
        raise DomainError("output coefficients need a gain layer (kappa0 != 0)")
    relative = K1 + K0 * kappa1 / kappa0
    if relative == 0:
        raise DegenerateRootError("the gain does not move at first order in gamma")
    return -1.0 / (2.0 * K0 * relative), K1 / relative


def perturbative_gplus(ss: ThresholdSolution, pr: PerturbationResult, gamma: float, N_plus: complex = 1.0) -> complex:
    """G+ at (K0 + gamma K1, kappa0 + gamma kappa1) including gamma G+^(1); O(gamma^2)"""
    N = complex(N_plus)
    intensity = abs(N) ** 2
    K = ss.K0 + gamma * intensity * pr.K1_per_I
    kappa = ss.kappa0 + gamma * intensity * pr.kappa1_per_I
    linear, _, _ = gplus_linear(BilayerIndex(eta=ss.eta0, kappa=kappa), K)
    return N * linear - gamma * N * intensity * pr.c_coef


def _weak_flags(sigma: float, K0: float, intensity: np.ndarray, settings: Settings) -> Tuple[bool, ...]:
    kerr = KerrMedium(sigma=sigma)
    return tuple(kerr.weakly_nonlinear(K0, settings.perturbative_limit, float(i)) for i in intensity)


def emission(
    ss: ThresholdSolution,
    pr: PerturbationResult,
    sigma: float,
    g_range: Sequence[float],
    settings: Optional[Settings] = None,
) -> EmissionCurve:
    """I = A (g - g0)/(sigma g0) and dlambda = -B (g - g0) lambda0/g0"""
    settings = settings or get_settings()
    if sigma == 0:
        raise DomainError("sigma = 0: the linear theory gives no intensity scale")
    g = np.asarray(list(g_range), dtype=float)
    excess = (g - ss.g0) / ss.g0
    intensity = pr.A_coef * excess / sigma
    dlambda = -pr.B_coef * excess * ss.lambda0
    weak = _weak_flags(sigma, ss.K0, intensity, settings)
    if not all(weak):
        logger.warning(f"{weak.count(False)} emission points violate the weak-Kerr condition")

    return EmissionCurve(
        g0=ss.g0,
        lambda0=ss.lambda0,
        sigma=sigma,
        A_coef=pr.A_coef,
        B_coef=pr.B_coef,
        g_samples=tuple(g.tolist()),
        I_samples=tuple(intensity.tolist()),
        dlambda_samples=tuple(dlambda.tolist()),
        weak=weak,
    )


def slab_output_coefficient(eta0: float) -> float:
    """Homogeneous-slab coefficient eta^2 (eta^2 - 1) ln^2((eta+1)/(eta-1))/12"""
    if eta0 <= 1:
        raise DomainError(f"slab coefficient needs eta0 > 1 (got {eta0})")
    return eta0 ** 2 * (eta0 ** 2 - 1) * math.log((eta0 + 1) / (eta0 - 1)) ** 2 / 12.0


def homogeneous_emission(
    eta0: float,
    L: float,
    sigma: float,
    g_range: Sequence[float],
    lambda_target: float = 1.0,
    settings: Optional[Settings] = None,
) -> EmissionCurve:
    """Output intensity of a homogeneous Kerr slab; no wavelength shift is modeled"""
    settings = settings or get_settings()
    A_coef = slab_output_coefficient(eta0)
    if sigma == 0:
        raise DomainError("sigma = 0: the linear theory gives no intensity scale")
    ss = homogeneous_threshold(eta0, L, lambda_target, settings)
    g = np.asarray(list(g_range), dtype=float)
    intensity = A_coef * (g - ss.g0) / (sigma * ss.g0)
    weak = _weak_flags(sigma, ss.K0, intensity, settings)
    return EmissionCurve(
        g0=ss.g0,
        lambda0=ss.lambda0,
        sigma=sigma,
        A_coef=A_coef,
        B_coef=0.0,
        g_samples=tuple(g.tolist()),
        I_samples=tuple(intensity.tolist()),
        dlambda_samples=tuple(0.0 for _ in g),
        weak=weak,
    )


def output_coefficient_scan(
    eta0: float,
    a: float,
    modes: Sequence[int],
    settings: Optional[Settings] = None,
) -> List[PerturbationResult]:
    """Exact root and perturbation coefficients for each mode number"""
    settings = settings or get_settings()

    def one(m: int) -> PerturbationResult:
        if eta0 == 1.0:
            guess = bilayer_threshold_eta1(m, a, settings)
        else:
            guess = bilayer_threshold_general(eta0, m, a, settings)
        return perturbation_coefficients(bilayer_ss_exact(eta0, a, guess, settings))

    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        results = list(pool.map(one, modes))
    return sorted(results, key=lambda r: r.m)


class NonlinearOracle:
    """Shoots the full Kerr problem from x = 1 and tracks the threshold root in gamma"""

    def __init__(self, ss: ThresholdSolution, settings: Optional[Settings] = None):
        self.ss = ss
        self.settings = settings or get_settings()
        self.eta = ss.eta0
        # fixed grid so the discretization error is the same for every (K, kappa, gamma)
        self.steps = ode_steps(ss.index, ss.K0, settings=self.settings)

    def mismatch(self, K: float, kappa: float, gamma: float) -> np.ndarray:
        """Re and Im of psi'(0) + iK psi(0) for outgoing data at x = 1 with N+ = 1"""
        index = BilayerIndex(eta=self.eta, kappa=kappa)
        edge = cmath.exp(1j * K)
        psi0, dpsi0 = shoot(index, K, gamma, (edge, 1j * K * edge), self.steps)
        g = dpsi0 + 1j * K * psi0
        return np.array([g.real, g.imag])

    def jacobian(self, K: float, kappa: float, h: float = 1e-7) -> np.ndarray:
        cols = []
        for dK, dkap in ((h, 0.0), (0.0, h)):
            plus = self.mismatch(K + dK, kappa + dkap, 0.0)
            minus = self.mismatch(K - dK, kappa - dkap, 0.0)
            cols.append((plus - minus) / (2 * h))
        return np.column_stack(cols)

    def _newton(self, K: float, kappa: float, gamma: float, J: np.ndarray, refresh: bool) -> Tuple[float, float]:
        x = np.array([K, kappa])
        scale = max(1.0, abs(K))
        for iteration in range(self.settings.newton_max_iterations):
            F = self.mismatch(x[0], x[1], gamma)
            if refresh:
                J = self.jacobian(x[0], x[1])
            step = np.linalg.solve(J, -F)
            x = x + step
            logger.debug(f"oracle gamma={gamma:.3e} it={iteration}: K={x[0]:.15g}, kappa={x[1]:.15g}")
            if abs(step[0]) <= 1e-12 * scale and abs(step[1]) <= 1e-12:
                return float(x[0]), float(x[1])
        raise GammaTooLargeError(f"shooting did not settle for gamma={gamma:.3e}")

    def slopes(self, sigma: float, fractions: Sequence[float] = (1.0, 0.1, 0.01)) -> Tuple[float, float]:
        """Extrapolated dK/dgamma and dkappa/dgamma for N+ = 1"""
        if sigma == 0:
            return 0.0, 0.0
        if len(fractions) < 3:
            raise DomainError("the oracle needs at least three gamma values")
        lo, hi = ORACLE_GAMMA_RANGE
        ratios = [abs(sigma * f) for f in fractions]
        if min(ratios) < lo * (1 - 1e-9) or max(ratios) > hi * (1 + 1e-9):
            raise DomainError(
                f"oracle needs |gamma|/K0^2 in [{lo:.0e}, {hi:.0e}] (got {min(ratios):.1e} to {max(ratios):.1e})"
            )
        K_lin, kappa_lin = self._newton(self.ss.K0, self.ss.kappa0, 0.0, None, refresh=True)
        J = self.jacobian(K_lin, kappa_lin)

        gamma_max = KerrMedium(sigma=sigma).gamma(self.ss.K0)
        gammas = np.array([gamma_max * f for f in fractions])
        K_slopes, kappa_slopes = [], []
        for gamma in gammas:
            K_g, kappa_g = self._newton(K_lin, kappa_lin, float(gamma), J, refresh=False)
            K_slopes.append((K_g - K_lin) / gamma)
            kappa_slopes.append((kappa_g - kappa_lin) / gamma)

        estimates = []
        for name, values in (("K1", K_slopes), ("kappa1", kappa_slopes)):
            s1, s0 = np.polyfit(gammas, values, 1)
            if abs(s1 * np.max(np.abs(gammas))) > 0.5 * abs(s0):
                raise GammaTooLargeError(f"{name} slope varies too strongly with gamma (s0={s0:.3e}, s1={s1:.3e})")
            estimates.append(float(s0))
        logger.info(f"nonlinear oracle m={self.ss.mode.m}: K1={estimates[0]:.9e}, kappa1={estimates[1]:.9e}")
        return estimates[0], estimates[1]


def nonlinear_oracle(
    ss: ThresholdSolution,
    sigma: float,
    fractions: Sequence[float] = (1.0, 0.1, 0.01),
    settings: Optional[Settings] = None,
) -> Tuple[float, float]:
    return NonlinearOracle(ss, settings).slopes(sigma, fractions)

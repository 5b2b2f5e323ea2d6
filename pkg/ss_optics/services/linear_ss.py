"""
Linear Spectral Singularity Service
Threshold gains of the homogeneous slab and the PT-symmetric bilayer:
asymptotic formulas, exact two-dimensional root polishing and sweeps
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..app.config import Settings, get_settings
from ..app.errors import (
    BracketError,
    ConvergenceError,
    DegenerateRootError,
    DomainError,
    NoSolutionError,
    RegimeError,
    SSOpticsError,
)
from ..schemas.profile_schemas import Mode
from ..schemas.threshold_schemas import Regime, SweepCurve, SweepPoint, ThresholdSolution
from .helmholtz import uv_values
from .profiles import UM_PER_CM, gain_from_kappa, kappa_from_gain, nearest_mode

logger = logging.getLogger(__name__)

GENERAL_MIN_ETA = 1.01
LN2 = math.log(2.0)


def _log_cosh(t: float) -> float:
    t = abs(t)
    return t + math.log1p(math.exp(-2.0 * t)) - LN2


def _bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float,
    hi_max: float = 1.0e6,
) -> float:
    """Bisection after doubling the upper end until the sign changes"""
    f_lo, f_hi = f(lo), f(hi)
    while f_lo * f_hi > 0 and hi < hi_max:
        hi *= 2.0
        f_hi = f(hi)
    if f_lo * f_hi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    return optimize.bisect(f, lo, hi, xtol=xtol, maxiter=200)


def _general_log_term(eta: float) -> float:
    return math.log(2.0 * eta * (eta ** 2 + 1) / (eta ** 2 - 1))


def eta1_upper_bound(a: float, lambda0: float) -> float:
    """g0 <= (4/a) ln(4 sqrt(2) pi a/lambda0) in cm^-1"""
    a_cm = a / UM_PER_CM
    return 4.0 / a_cm * math.log(4.0 * math.sqrt(2.0) * math.pi * a / lambda0)


def general_upper_bound(eta: float, a: float, lambda0: float) -> float:
    """g0 <= (2/a) ln(8 pi eta (eta^2+1) a/((eta^2-1) lambda0)) in cm^-1"""
    a_cm = a / UM_PER_CM
    return 2.0 / a_cm * math.log(8.0 * math.pi * eta * (eta ** 2 + 1) * a / ((eta ** 2 - 1) * lambda0))


def bilayer_threshold_eta1(m: int, a: float, settings: Optional[Settings] = None) -> ThresholdSolution:
    """eta = 1 bilayer: K0 = (2m+1)pi with |kappa0| from cosh(K0 kappa) = 1/kappa^2"""
    settings = settings or get_settings()
    if m < 0 or a <= 0:
        raise DomainError(f"need m >= 0 and a > 0 (got m={m}, a={a})")

    K0 = (2 * m + 1) * math.pi

    def condition(kappa: float) -> float:
        return _log_cosh(K0 * kappa) + 2.0 * math.log(kappa)

    root = _bracketed_root(condition, 1e-16, 1.0, settings.bisection_xtol)
    kappa0 = -root
    mode = Mode.from_wavenumber(m, K0, a)
    U, V = uv_values(1.0, kappa0, K0)

    solution = ThresholdSolution(
        mode=mode,
        eta0=1.0,
        a_um=a,
        kappa0=kappa0,
        g0=gain_from_kappa(kappa0, K0, a),
        regime=Regime.ETA1,
        residual=abs(condition(root)),
        residual_uv=(abs(U), abs(V)),
        upper_bound_g0=eta1_upper_bound(a, mode.lambda0),
        phase_offset=1.0,
    )
    logger.info(f"eta=1 threshold m={m}: kappa0={kappa0:.6e}, g0={solution.g0:.6f} cm^-1")
    return solution


def eq6_root(m: int, settings: Optional[Settings] = None) -> float:
    """|kappa0| from the large-m form (m + 1/2) pi |kappa| + ln|kappa| = ln(2)/2"""
    settings = settings or get_settings()
    if m < 0:
        raise DomainError(f"mode number must be nonnegative (got {m})")

    def condition(x: float) -> float:
        return (m + 0.5) * math.pi * x + math.log(x) - 0.5 * LN2

    return _bracketed_root(condition, 1e-16, 1.0, settings.bisection_xtol)


def bilayer_threshold_general(
    eta0: float,
    m: int,
    a: float,
    settings: Optional[Settings] = None,
) -> ThresholdSolution:
    """eta - 1 >> |kappa| bilayer: K0 = (2m + 1/2)pi/eta with |kappa0| from the logarithmic threshold condition"""
    settings = settings or get_settings()
    if eta0 < GENERAL_MIN_ETA:
        raise RegimeError(
            f"eta0={eta0} is below {GENERAL_MIN_ETA}; use bilayer_threshold_eta1 or the exact solver"
        )
    if m < 0 or a <= 0:
        raise DomainError(f"need m >= 0 and a > 0 (got m={m}, a={a})")

    rhs = 0.5 * eta0 * _general_log_term(eta0)

    def condition(x: float) -> float:
        return (m + 0.25) * math.pi * x + 0.5 * eta0 * math.log(x) - rhs

    root = _bracketed_root(condition, 1e-16, 1.0, settings.bisection_xtol)
    K0 = (2 * m + 0.5) * math.pi / eta0
    kappa0 = -root
    mode = Mode.from_wavenumber(m, K0, a)
    U, V = uv_values(eta0, kappa0, K0)

    solution = ThresholdSolution(
        mode=mode,
        eta0=eta0,
        a_um=a,
        kappa0=kappa0,
        g0=gain_from_kappa(kappa0, K0, a),
        regime=Regime.GENERAL,
        residual=abs(condition(root)),
        residual_uv=(abs(U), abs(V)),
        upper_bound_g0=general_upper_bound(eta0, a, mode.lambda0),
        phase_offset=0.5,
    )
    logger.info(f"general threshold eta={eta0}, m={m}: kappa0={kappa0:.6e}, g0={solution.g0:.6f} cm^-1")
    return solution


def tc_identity_residual(solution: ThresholdSolution) -> float:
    """Residual of the closed-form threshold identity in the a*g variable"""
    ag = solution.a_um / UM_PER_CM * solution.g0
    if ag <= 0:
        raise DomainError("threshold identity needs a positive gain")
    if solution.regime == Regime.ETA1:
        return abs(ag / 4.0 + math.log(ag) - math.log(2.0 * math.sqrt(2.0) * solution.K0))
    if solution.regime == Regime.GENERAL:
        eta = solution.eta0
        target = math.log(8.0 * math.pi * eta * (eta ** 2 + 1) * solution.a_um / ((eta ** 2 - 1) * solution.lambda0))
        return abs(ag / 2.0 + math.log(ag) - target)
    raise DomainError(f"no closed-form threshold identity for regime {solution.regime.value}")


def _exact_system(eta: float, c: float, K_ref: float, delta: float, kap: float) -> Tuple[np.ndarray, np.ndarray]:
    """Residual and Jacobian in (delta, kappa) with K = K_ref + delta and phase c*pi + eta*delta"""
    K = K_ref + delta
    phi = c * math.pi + eta * delta
    cos_p, sin_p = math.cos(phi), math.sin(phi)
    s = eta * eta + kap * kap
    alpha = kap / eta
    beta = (s - 1.0) / (s + 1.0)
    ch, sh = math.cosh(kap * K), math.sinh(kap * K)

    F = np.array([alpha * alpha * ch + cos_p, alpha * beta * sh - sin_p])
    J = np.array([
        [alpha * alpha * kap * sh - eta * sin_p, 2.0 * kap / eta ** 2 * ch + alpha * alpha * K * sh],
        [alpha * beta * kap * ch - eta * cos_p,
         (beta / eta + alpha * 4.0 * kap / (s + 1.0) ** 2) * sh + alpha * beta * K * ch],
    ])
    return F, J


def bilayer_ss_exact(
    eta0: float,
    a: float,
    guess: ThresholdSolution,
    settings: Optional[Settings] = None,
) -> ThresholdSolution:
    """Damped Newton on alpha^2 cosh(kappa K) + cos(eta K) = 0, alpha beta sinh(kappa K) - sin(eta K) = 0"""
    settings = settings or get_settings()
    if guess.regime == Regime.HOMOGENEOUS:
        raise DomainError("exact bilayer solve needs a bilayer guess")
    if abs(guess.eta0 - eta0) > 1e-12:
        raise DomainError(f"guess was computed for eta={guess.eta0}, not {eta0}")
    if a <= 0:
        raise DomainError(f"slab width must be positive (got {a})")

    m = guess.mode.m
    c = guess.phase_offset
    K_ref = (2 * m + c) * math.pi / eta0
    delta = guess.K0 - K_ref
    kap = abs(guess.kappa0)
    if guess.regime == Regime.GENERAL:
        # first-order phase shift away from the (2m + 1/2)pi ladder
        seed = (kap / eta0) ** 2 * math.cosh(kap * K_ref)
        delta += math.asin(min(seed, 1.0)) / eta0

    F, J = _exact_system(eta0, c, K_ref, delta, kap)
    res = float(np.max(np.abs(F)))
    iterations = 0
    while res >= settings.newton_tolerance:
        if iterations >= settings.newton_max_iterations:
            logger.error(f"Exact solve eta={eta0}, m={m} stalled at residual {res:.3e}")
            raise ConvergenceError(
                f"no convergence in {settings.newton_max_iterations} iterations (residual {res:.3e})",
                residual=res,
            )
        if not np.all(np.isfinite(J)) or np.linalg.cond(J) > 1e14:
            raise DegenerateRootError(f"singular Jacobian at K={K_ref + delta}, kappa={kap}")
        step = np.linalg.solve(J, -F)

        t = 1.0
        while True:
            trial_delta, trial_kap = delta + t * step[0], kap + t * step[1]
            if trial_kap > 0:
                F_trial, J_trial = _exact_system(eta0, c, K_ref, trial_delta, trial_kap)
                res_trial = float(np.max(np.abs(F_trial)))
                if res_trial < res or t < 2.0 ** -10:
                    break
            elif t < 2.0 ** -10:
                trial_kap = 0.5 * kap
                F_trial, J_trial = _exact_system(eta0, c, K_ref, trial_delta, trial_kap)
                res_trial = float(np.max(np.abs(F_trial)))
                break
            t *= 0.5

        delta, kap, F, J, res = trial_delta, trial_kap, F_trial, J_trial, res_trial
        iterations += 1
        logger.debug(f"newton it={iterations}: K={K_ref + delta:.15g}, kappa={kap:.15g}, residual={res:.3e}, t={t}")

    K0 = K_ref + delta
    kappa0 = -kap
    mode = Mode.from_wavenumber(m, K0, a)
    U, V = uv_values(eta0, kappa0, K0)
    solution = ThresholdSolution(
        mode=mode,
        eta0=eta0,
        a_um=a,
        kappa0=kappa0,
        g0=gain_from_kappa(kappa0, K0, a),
        regime=Regime.EXACT,
        residual=res,
        residual_uv=(abs(U), abs(V)),
        upper_bound_g0=guess.upper_bound_g0,
        phase_offset=c,
    )
    logger.info(
        f"exact root eta={eta0}, m={m}: lambda0={mode.lambda0:.9g} um, kappa0={kappa0:.9g}, "
        f"g0={solution.g0:.9g} cm^-1 after {iterations} iterations"
    )
    return solution


def exact_system_residual(eta0: float, K: float, kappa: float) -> float:
    """max |F1|, |F2| evaluated directly at (K, kappa); even in kappa"""
    s = eta0 * eta0 + kappa * kappa
    alpha = kappa / eta0
    beta = (s - 1.0) / (s + 1.0)
    f1 = alpha * alpha * math.cosh(kappa * K) + math.cos(eta0 * K)
    f2 = alpha * beta * math.sinh(kappa * K) - math.sin(eta0 * K)
    return max(abs(f1), abs(f2))


def asymptotic_threshold(
    eta0: float,
    a: float,
    lambda_target: float,
    settings: Optional[Settings] = None,
) -> ThresholdSolution:
    """Asymptotic bilayer threshold at the ladder mode nearest lambda_target"""
    if eta0 == 1.0:
        mode = nearest_mode(a, eta0, lambda_target, regime="eta1")
        return bilayer_threshold_eta1(mode.m, a, settings)
    if eta0 < GENERAL_MIN_ETA:
        raise RegimeError(f"eta0={eta0} lies between the eta = 1 family and the general regime")
    mode = nearest_mode(a, eta0, lambda_target, regime="general")
    return bilayer_threshold_general(eta0, mode.m, a, settings)


def exact_threshold(
    eta0: float,
    a: float,
    lambda_target: float,
    settings: Optional[Settings] = None,
) -> ThresholdSolution:
    guess = asymptotic_threshold(eta0, a, lambda_target, settings)
    return bilayer_ss_exact(eta0, a, guess, settings)


def homogeneous_threshold(
    eta0: float,
    L: float,
    lambda_target: float,
    settings: Optional[Settings] = None,
) -> ThresholdSolution:
    """Homogeneous slab of thickness L: e^{2inK} = ((n+1)/(n-1))^2 solved self-consistently, K = 2 pi L/lambda"""
    settings = settings or get_settings()
    if eta0 < 1 or L <= 0 or lambda_target <= 0:
        raise DomainError(f"need eta0 >= 1, L > 0 and lambda > 0 (got {eta0}, {L}, {lambda_target})")

    K_target = 2.0 * math.pi * L / lambda_target
    kappa = -1e-3
    r = (complex(eta0, kappa) + 1) / (complex(eta0, kappa) - 1)
    m = math.floor((eta0 * K_target - cmath.phase(r)) / math.pi + 0.5)
    if cmath.phase(r) + math.pi * m <= 0:
        m += 1
    if m < 0:
        raise NoSolutionError(f"no homogeneous resonance near lambda={lambda_target}")

    K = K_target
    for iteration in range(1, 201):
        n = complex(eta0, kappa)
        r = (n + 1) / (n - 1)
        K_new = (cmath.phase(r) + math.pi * m) / eta0
        kappa_new = -math.log(abs(r)) / K_new
        step = abs(kappa_new - kappa)
        converged = step <= 1e-15 * max(1.0, abs(kappa)) and abs(K_new - K) <= 1e-13 * K_new
        K, kappa = K_new, kappa_new
        if converged:
            break
    else:
        raise ConvergenceError(f"homogeneous fixed point did not settle (eta={eta0}, L={L})", residual=step)

    n = complex(eta0, kappa)
    r = (n + 1) / (n - 1)
    residual = abs(cmath.exp(2j * n * K) - r * r) / abs(r * r)
    solution = ThresholdSolution(
        mode=Mode.from_wavenumber(m, K, L),
        eta0=eta0,
        a_um=L,
        kappa0=kappa,
        g0=gain_from_kappa(kappa, K, L),
        regime=Regime.HOMOGENEOUS,
        residual=residual,
        phase_offset=0.0,
    )
    logger.info(f"homogeneous threshold eta={eta0}, L={L}: g0={solution.g0:.6f} cm^-1 after {iteration} iterations")
    return solution


def homogeneous_threshold_estimate(
    eta0: float,
    L: float,
    lambda_target: float,
) -> ThresholdSolution:
    """Closed forms: g0 = (2/L) ln((eta+1)/(eta-1)), or g + (4/a) ln(a g) = (4/a) ln(8 pi a/lambda) at eta = 1"""
    if eta0 < 1 or L <= 0 or lambda_target <= 0:
        raise DomainError(f"need eta0 >= 1, L > 0 and lambda > 0 (got {eta0}, {L}, {lambda_target})")

    if eta0 == 1.0:
        m = math.floor(2.0 * L / lambda_target)
        K = (m + 0.5) * math.pi
        a = 2.0 * L
        rhs = 4.0 * math.log(8.0 * math.pi * a / (2.0 * math.pi * L / K))

        def condition(x: float) -> float:
            return x + 4.0 * math.log(x) - rhs

        if rhs <= 0:
            raise NoSolutionError(f"no eta = 1 threshold for L={L} near lambda={lambda_target}")
        x = optimize.brentq(condition, 1e-12, max(rhs, 1.0) + 1.0, xtol=1e-14)
        g0 = x / (a / UM_PER_CM)
        residual = abs(condition(x))
    else:
        mode = nearest_mode(L, eta0, lambda_target, regime="homogeneous")
        m, K = mode.m, mode.K0
        g0 = 2.0 / (L / UM_PER_CM) * math.log((eta0 + 1) / (eta0 - 1))
        residual = 0.0

    return ThresholdSolution(
        mode=Mode.from_wavenumber(m, K, L),
        eta0=eta0,
        a_um=L,
        kappa0=kappa_from_gain(g0, K, L),
        g0=g0,
        regime=Regime.HOMOGENEOUS,
        residual=residual,
        phase_offset=0.0,
    )


class SweepService:
    """Evaluates threshold curves point by point on a thread pool"""

    AXES = ("lambda0", "eta0")
    SLABS = ("bilayer", "homogeneous")

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def _solve(self, axis: str, slab_kind: str, value: float, a_um: float, eta0: float, lambda_target: float) -> ThresholdSolution:
        eta = value if axis == "eta0" else eta0
        wavelength = value if axis == "lambda0" else lambda_target
        if slab_kind == "bilayer":
            return exact_threshold(eta, a_um, wavelength, self.settings)
        return homogeneous_threshold(eta, a_um, wavelength, self.settings)

    def _point(self, axis: str, slab_kind: str, value: float, a_um: float, eta0: float, lambda_target: float) -> SweepPoint:
        try:
            sol = self._solve(axis, slab_kind, value, a_um, eta0, lambda_target)
        except (SSOpticsError, ValueError) as e:
            message = getattr(e, "message", str(e))
            logger.error(f"sweep point {axis}={value} failed: {message}")
            nan = float("nan")
            return SweepPoint(abscissa=value, g0=nan, kappa0=nan, K0=nan, residual=nan, ok=False, error=message)
        abscissa = sol.lambda0 if axis == "lambda0" else value
        return SweepPoint(abscissa=abscissa, g0=sol.g0, kappa0=sol.kappa0, K0=sol.K0, residual=sol.residual)

    def sweep(
        self,
        axis: str,
        slab_kind: str,
        grid: Sequence[float],
        a_um: float,
        eta0: float = 1.0,
        lambda_target: float = 1.0,
    ) -> SweepCurve:
        """One threshold per grid value; lambda0 grids hold target wavelengths, eta0 grids hold indices"""
        if axis not in self.AXES:
            raise DomainError(f"unknown sweep axis '{axis}'")
        if slab_kind not in self.SLABS:
            raise DomainError(f"unknown slab kind '{slab_kind}'")
        grid = [float(v) for v in grid]
        if not grid:
            raise DomainError("sweep range is empty")

        with ThreadPoolExecutor(max_workers=self.settings.threads) as pool:
            points: List[SweepPoint] = list(
                pool.map(lambda v: self._point(axis, slab_kind, v, a_um, eta0, lambda_target), grid)
            )

        points.sort(key=lambda p: p.abscissa)
        unique: List[SweepPoint] = []
        for p in points:
            if unique and math.isclose(p.abscissa, unique[-1].abscissa, rel_tol=1e-12, abs_tol=0.0):
                continue
            unique.append(p)

        failed = sum(not p.ok for p in unique)
        logger.info(f"sweep {slab_kind}/{axis}: {len(unique)} points, {failed} gaps")
        return SweepCurve(axis=axis, slab_kind=slab_kind, points=tuple(unique))


def sweep(
    axis: str,
    slab_kind: str,
    grid: Sequence[float],
    a_um: float,
    eta0: float = 1.0,
    lambda_target: float = 1.0,
    settings: Optional[Settings] = None,
) -> SweepCurve:
    return SweepService(settings).sweep(axis, slab_kind, grid, a_um, eta0, lambda_target)

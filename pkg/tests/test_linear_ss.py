"""
Tests for lasing thresholds of the bilayer and the homogeneous slab
"""

import math

import numpy as np
import pytest

from ss_optics.app.errors import DomainError, RegimeError
from ss_optics.schemas.threshold_schemas import Regime
from ss_optics.services.exports import SWEEP_COLUMNS, export_sweep_csv
from ss_optics.services.linear_ss import (
    asymptotic_threshold,
    bilayer_ss_exact,
    bilayer_threshold_eta1,
    bilayer_threshold_general,
    eq6_root,
    exact_system_residual,
    homogeneous_threshold,
    homogeneous_threshold_estimate,
    sweep,
    tc_identity_residual,
)
from ss_optics.services.profiles import mode_window


class TestEta1Threshold:
    """Test the eta = 1 family K0 = (2m+1)pi"""

    def test_one_micron_values(self, eta1_guess):
        """Test kappa0, g0 and the bound for a = 1 mm near 1 um"""
        assert eta1_guess.K0 == pytest.approx(2001 * math.pi)
        assert abs(eta1_guess.kappa0) == pytest.approx(2.077e-3, rel=1e-3)
        assert eta1_guess.kappa0 < 0
        assert eta1_guess.g0 == pytest.approx(261.0, rel=1e-2)
        assert eta1_guess.upper_bound_g0 == pytest.approx(391.0, rel=1e-2)
        assert eta1_guess.g0 < eta1_guess.upper_bound_g0

    def test_lowest_mode(self):
        """Test that m = 0 solves cosh(pi kappa) = 1/kappa^2"""
        solution = bilayer_threshold_eta1(0, 1000.0)
        kappa = abs(solution.kappa0)
        assert solution.lambda0 == pytest.approx(2000.0)
        assert 0 < kappa < 1
        assert math.cosh(math.pi * kappa) * kappa ** 2 == pytest.approx(1.0, rel=1e-12)

    def test_large_mode_form(self, eta1_guess):
        """Test that the large-m logarithmic form agrees with the cosh condition"""
        assert eq6_root(1000) == pytest.approx(abs(eta1_guess.kappa0), rel=1e-6)

    def test_closed_form_identity(self, eta1_guess):
        """Test a g/4 + ln(a g) = ln(2 sqrt(2) K0)"""
        assert tc_identity_residual(eta1_guess) < 1e-6

    def test_negative_mode_rejected(self):
        """Test that m < 0 is a domain error"""
        with pytest.raises(DomainError):
            bilayer_threshold_eta1(-1, 1000.0)


class TestGeneralThreshold:
    """Test the eta - 1 >> |kappa| regime K0 = (2m + 1/2)pi/eta"""

    def test_one_micron_values(self, eta3_guess):
        """Test kappa0, g0 and the bound for eta = 3, a = 1 mm"""
        assert eta3_guess.lambda0 == pytest.approx(3000.0 / 3000.25, rel=1e-12)
        assert abs(eta3_guess.kappa0) == pytest.approx(1.370e-3, rel=1e-2)
        assert eta3_guess.g0 == pytest.approx(172.0, rel=1e-2)
        assert eta3_guess.upper_bound_g0 == pytest.approx(229.0, rel=1e-2)

    def test_closed_form_identity(self, eta3_guess):
        """Test the a g identity in its wavelength form"""
        assert tc_identity_residual(eta3_guess) < 1e-6

    def test_too_close_to_one(self):
        """Test that eta in (1, 1.01) is rejected"""
        with pytest.raises(RegimeError):
            bilayer_threshold_general(1.005, 1000, 1000.0)
        with pytest.raises(RegimeError):
            asymptotic_threshold(1.005, 1000.0, 1.0)

    def test_dispatch(self):
        """Test that asymptotic_threshold picks the family by eta"""
        assert asymptotic_threshold(1.0, 1000.0, 1.0).regime == Regime.ETA1
        assert asymptotic_threshold(2.0, 1000.0, 1.0).regime == Regime.GENERAL


class TestExactThreshold:
    """Test the two-dimensional root of the bilayer"""

    def test_one_micron_triple(self, eta3_root):
        """Test lambda0, kappa0 and g0 of the eta = 3, m = 3000 singularity"""
        assert eta3_root.regime == Regime.EXACT
        assert eta3_root.mode.m == 3000
        assert eta3_root.lambda0 == pytest.approx(0.999917, rel=1e-5)
        assert abs(eta3_root.kappa0) == pytest.approx(1.36988e-3, rel=1e-3)
        assert eta3_root.g0 == pytest.approx(172.159, rel=1e-3)

    def test_residuals(self, eta3_root):
        """Test that both real conditions and U, V vanish at the root"""
        assert eta3_root.residual < 1e-12
        assert exact_system_residual(3.0, eta3_root.K0, eta3_root.kappa0) < 1e-10
        s = 9.0 + eta3_root.kappa0 ** 2
        assert max(eta3_root.residual_uv) < 1e-10 * (s + 1)

    def test_mirror_root(self, eta3_root):
        """Test that the time-reversed index also satisfies the threshold conditions"""
        direct = exact_system_residual(3.0, eta3_root.K0, eta3_root.kappa0)
        mirrored = exact_system_residual(3.0, eta3_root.K0, -eta3_root.kappa0)
        assert mirrored == pytest.approx(direct, abs=1e-15)

    def test_eta1_deviates_from_ladder_slightly(self, eta1_root, eta1_guess):
        """Test that the exact eta = 1 root stays close to (2m+1)pi and to the cosh estimate"""
        assert eta1_root.K0 == pytest.approx(eta1_guess.K0, rel=1e-6)
        assert abs(eta1_root.kappa0) == pytest.approx(abs(eta1_guess.kappa0), rel=1e-6)

    @pytest.mark.parametrize("eta0, m", [(3.0, 3000), (2.0, 2000), (2.5, 2500)])
    def test_asymptotics_converge(self, eta0, m):
        """Test that the general-regime estimate is within 1% of the exact gain"""
        guess = bilayer_threshold_general(eta0, m, 1000.0)
        exact = bilayer_ss_exact(eta0, 1000.0, guess)
        assert exact.g0 == pytest.approx(guess.g0, rel=1e-2)

    def test_mismatched_guess(self, eta3_guess):
        """Test that a guess for another eta is rejected"""
        with pytest.raises(DomainError):
            bilayer_ss_exact(2.0, 1000.0, eta3_guess)

    def test_homogeneous_guess_rejected(self):
        """Test that the exact solver refuses a homogeneous-slab guess"""
        with pytest.raises(DomainError):
            bilayer_ss_exact(3.0, 500.0, homogeneous_threshold(3.0, 500.0, 1.0))


class TestHomogeneousThreshold:
    """Test the homogeneous slab of thickness L"""

    def test_eta3_value(self):
        """Test g0 ~ 27.73 cm^-1 for eta = 3 and L = 0.5 mm"""
        solution = homogeneous_threshold(3.0, 500.0, 1.0)
        assert solution.g0 == pytest.approx(27.73, rel=1e-3)
        assert solution.residual < 1e-10
        assert solution.regime == Regime.HOMOGENEOUS

    def test_estimate_closed_form(self):
        """Test g0 = (2/L) ln((eta+1)/(eta-1))"""
        estimate = homogeneous_threshold_estimate(3.0, 500.0, 1.0)
        assert estimate.g0 == pytest.approx(2.0 / 0.05 * math.log(2.0))

    def test_eta1_estimate(self):
        """Test that the eta = 1 closed form tracks the self-consistent solution"""
        solved = homogeneous_threshold(1.0, 500.0, 1.0)
        estimate = homogeneous_threshold_estimate(1.0, 500.0, 1.0)
        assert solved.residual < 1e-10
        assert estimate.g0 == pytest.approx(solved.g0, rel=1e-3)

    def test_decreasing_in_eta(self):
        """Test that a stronger index contrast lowers the threshold"""
        gains = [homogeneous_threshold(eta, 500.0, 1.0).g0 for eta in np.linspace(1.5, 4.0 - 1e-9, 11)]
        assert all(b < a for a, b in zip(gains, gains[1:]))

    def test_invalid_input(self):
        """Test that L <= 0 is rejected"""
        with pytest.raises(DomainError):
            homogeneous_threshold(3.0, 0.0, 1.0)


class TestSweep:
    """Test threshold sweeps"""

    def test_bilayer_below_homogeneous(self):
        """Test that the eta = 1 bilayer lases below a homogeneous slab of half the width"""
        targets = [md.lambda0 for md in mode_window(1000.0, 1.0, 1000.0 / 1100.5 * (1 - 1e-9), 1000.0 / 900.5 * (1 + 1e-9), "eta1")]
        assert len(targets) == 201
        bilayer = sweep("lambda0", "bilayer", targets, a_um=1000.0, eta0=1.0)
        slab = sweep("lambda0", "homogeneous", targets, a_um=500.0, eta0=1.0)
        assert len(bilayer.valid_points) == len(slab.valid_points) == 201
        for b, h in zip(bilayer.points, slab.points):
            assert b.abscissa == pytest.approx(h.abscissa, rel=1e-3)
            assert b.g0 < h.g0

    def test_eta_curves(self):
        """Test an interior minimum for the bilayer and monotone decrease for the slab"""
        grid = np.linspace(1.1, 3.9, 29)
        bilayer = sweep("eta0", "bilayer", grid, a_um=1000.0, lambda_target=1.0)
        slab = sweep("eta0", "homogeneous", grid, a_um=500.0, lambda_target=1.0)

        valid = bilayer.valid_points
        assert len(valid) == len(grid)
        lowest = int(np.argmin([p.g0 for p in valid]))
        assert 0 < lowest < len(valid) - 1

        gains = [p.g0 for p in slab.points]
        assert all(b < a for a, b in zip(gains, gains[1:]))

    def test_upper_index_endpoint(self):
        """Test that eta = 4 closes the index range with a usable root"""
        curve = sweep("eta0", "bilayer", [3.9, 4.0], a_um=1000.0, lambda_target=1.0)
        assert [p.ok for p in curve.points] == [True, True]
        guess = bilayer_threshold_general(4.0, 4000, 1000.0)
        assert guess.index.eta == 4.0
        assert guess.index.kappa == guess.kappa0

    def test_failed_points_become_gaps(self):
        """Test that a point outside every regime is recorded as a gap"""
        curve = sweep("eta0", "bilayer", [1.005, 3.0], a_um=1000.0, lambda_target=1.0)
        assert [p.ok for p in curve.points] == [False, True]
        assert math.isnan(curve.points[0].g0)
        assert curve.points[0].error

    def test_sorted_and_deduplicated(self):
        """Test that abscissae come back strictly increasing"""
        curve = sweep("eta0", "homogeneous", [3.0, 2.0, 3.0], a_um=500.0)
        assert [p.abscissa for p in curve.points] == [2.0, 3.0]

    def test_empty_grid(self):
        """Test that an empty grid is a domain error"""
        with pytest.raises(DomainError):
            sweep("eta0", "bilayer", [], a_um=1000.0)

    def test_unknown_axis(self):
        """Test that an unknown axis is a domain error"""
        with pytest.raises(DomainError):
            sweep("kappa0", "bilayer", [1.0], a_um=1000.0)

    def test_csv_export(self, tmp_path):
        """Test the sweep CSV header and the NaN gap rows"""
        curve = sweep("eta0", "bilayer", [1.005, 3.0], a_um=1000.0)
        path = export_sweep_csv(curve, tmp_path / "sweep.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert len(lines) == 3

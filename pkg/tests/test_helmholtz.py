"""
Tests for the piecewise Helmholtz solutions, scattering data and the RK4 oracle
"""

import cmath
import math

import numpy as np
import pytest

from ss_optics.app.errors import DivergentAmplitudeError, DomainError, OutputExistsError
from ss_optics.schemas.profile_schemas import BilayerIndex
from ss_optics.services.exports import SAMPLE_COLUMNS, export_samples_csv
from ss_optics.services.helmholtz import (
    build_xi,
    build_zeta,
    cpa_symmetry_residual,
    gplus_linear,
    jost_data,
    match_plane_waves,
    ode_oracle,
    scattering,
    transfer_matrix,
    uv_values,
)
from ss_optics.services.oracles import ode_deviation

VACUUM = BilayerIndex(eta=1.0, kappa=0.0)


def random_points(count, seed=7):
    rng = np.random.default_rng(seed)
    return [
        (BilayerIndex(eta=float(rng.uniform(1.0, 4.0)), kappa=float(rng.uniform(-0.1, 0.1))), float(rng.uniform(1.0, 30.0)))
        for _ in range(count)
    ]


class TestZeta:
    """Test the outgoing-wave solution zeta"""

    def test_vacuum_is_plane_wave(self):
        """Test that n = 1 gives zeta = N e^{iKx} everywhere"""
        zeta = build_zeta(VACUUM, math.pi, 2.0)
        assert zeta.A == pytest.approx(2.0, abs=1e-14)
        assert abs(zeta.B) < 1e-14
        assert zeta.C == pytest.approx(2.0, abs=1e-14)
        assert abs(zeta.D) < 1e-14
        x = np.linspace(0.0, 1.0, 11)
        np.testing.assert_allclose(zeta.value(x), 2.0 * np.exp(1j * math.pi * x), atol=1e-13)

    @pytest.mark.parametrize("index, K", random_points(6))
    def test_outgoing_data_at_right_edge(self, index, K):
        """Test zeta(1) = N e^{iK} and zeta'(1) = iK N e^{iK}"""
        N = 1.5 - 0.5j
        zeta = build_zeta(index, K, N)
        edge = N * cmath.exp(1j * K)
        assert zeta.value(1.0) == pytest.approx(edge, rel=1e-12)
        assert zeta.derivative(1.0) == pytest.approx(1j * K * edge, rel=1e-12)

    @pytest.mark.parametrize("index, K", random_points(6))
    def test_smooth_at_interface(self, index, K):
        """Test that value and slope are continuous at x = 1/2"""
        jump_value, jump_slope = build_zeta(index, K).interface_mismatch()
        assert jump_value < 1e-12
        assert jump_slope < 1e-12

    @pytest.mark.parametrize("index, K", random_points(4))
    def test_left_coefficients_match_interface_data(self, index, K):
        """Test that the closed-form A, B agree with matching at the interface"""
        zeta = build_zeta(index, K)
        w = index.z.conjugate() * K
        e_p, e_m = cmath.exp(0.5j * w), cmath.exp(-0.5j * w)
        value = zeta.C * e_p + zeta.D * e_m
        slope = 1j * w * (zeta.C * e_p - zeta.D * e_m)
        A, B = match_plane_waves(value, slope, index.z * K, 0.5)
        assert A == pytest.approx(zeta.A, rel=1e-10)
        assert B == pytest.approx(zeta.B, rel=1e-10)

    def test_linear_in_amplitude(self):
        """Test that zeta scales with N+"""
        index = BilayerIndex(eta=2.0, kappa=-0.05)
        one = build_zeta(index, 10.0)
        scaled = build_zeta(index, 10.0, 1 + 1j)
        assert scaled.value(0.3) == pytest.approx((1 + 1j) * one.value(0.3), rel=1e-13)

    def test_nonpositive_K_rejected(self):
        """Test that K <= 0 is a domain error"""
        with pytest.raises(DomainError):
            build_zeta(VACUUM, 0.0)


class TestGPlus:
    """Test G+ and the U, V functions"""

    def test_vacuum(self):
        """Test that G+ = 2iK with no slab"""
        G, U, V = gplus_linear(VACUUM, math.pi)
        assert U == pytest.approx(0.0, abs=1e-12)
        assert V == pytest.approx(-2.0)
        assert G == pytest.approx(2j * math.pi, abs=1e-12)

    def test_real_index_value(self):
        """Test U = 0 and V = -2 eta^2 at eta K = pi"""
        U, V = uv_values(3.0, 0.0, math.pi / 3.0)
        assert U == pytest.approx(0.0, abs=1e-12)
        assert V == pytest.approx(-18.0)

    @pytest.mark.parametrize("index, K", random_points(8))
    def test_matches_boundary_data(self, index, K):
        """Test G+ = zeta'(0) + iK zeta(0)"""
        G, _, _ = gplus_linear(index, K)
        zeta = build_zeta(index, K)
        assert G == pytest.approx(zeta.derivative(0.0) + 1j * K * zeta.value(0.0), rel=1e-10)

    @pytest.mark.parametrize("index, K", random_points(8))
    def test_even_in_kappa(self, index, K):
        """Test that U and V are unchanged by kappa -> -kappa"""
        assert cpa_symmetry_residual(index, K) == 0.0


class TestScattering:
    """Test reflection and transmission amplitudes and the transfer matrix"""

    def test_vacuum(self):
        """Test that an empty slab transmits everything"""
        data = scattering(VACUUM, 2.0)
        assert abs(data.R_left) < 1e-14
        assert abs(data.R_right) < 1e-14
        assert data.T == pytest.approx(1.0)
        np.testing.assert_allclose(data.M, np.eye(2), atol=1e-14)

    @pytest.mark.parametrize("K", [math.pi / 3.0, 1.7, 12.3])
    def test_unitarity_without_gain(self, K):
        """Test |R|^2 + |T|^2 = 1 for a real index"""
        data = scattering(BilayerIndex(eta=3.0, kappa=0.0), K)
        assert data.reflectance_left + data.transmittance == pytest.approx(1.0, rel=1e-12)
        assert abs(data.R_right) ** 2 + data.transmittance == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("index, K", random_points(8, seed=11))
    def test_unit_determinant(self, index, K):
        """Test det M = 1"""
        assert np.linalg.det(transfer_matrix(index, K)) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("index, K", random_points(4, seed=3))
    def test_xi_starts_as_incoming_wave(self, index, K):
        """Test xi(0) = 1 and xi'(0) = -iK"""
        xi = build_xi(index, K)
        assert xi.value(0.0) == pytest.approx(1.0, rel=1e-13)
        assert xi.derivative(0.0) == pytest.approx(-1j * K, rel=1e-13)

    def test_singular_at_root(self, eta3_root):
        """Test that amplitudes blow up and M22 vanishes at a spectral singularity"""
        data = scattering(eta3_root.index, eta3_root.K0)
        assert data.singular
        assert data.transmittance > 1e12
        assert abs(data.M[1, 1]) / np.linalg.norm(data.M) < 1e-8

    def test_eta1_root_m22(self, eta1_root):
        """Test M22 ~ 0 at the eta = 1 root"""
        M = transfer_matrix(eta1_root.index, eta1_root.K0)
        assert abs(M[1, 1]) / np.linalg.norm(M) < 1e-8

    def test_strict_raises_near_root(self, eta3_root):
        """Test that strict mode refuses near-singular points"""
        with pytest.raises(DivergentAmplitudeError) as excinfo:
            scattering(eta3_root.index, eta3_root.K0, strict=True)
        assert excinfo.value.exit_code == 2

    def test_regular_point_not_flagged(self):
        """Test that ordinary points are not marked singular"""
        assert not scattering(BilayerIndex(eta=3.0, kappa=-1e-3), 10.0).singular

    def test_jost_data_consistent(self):
        """Test that the transmission equals 2iK/G+"""
        index = BilayerIndex(eta=2.0, kappa=0.02)
        F_p, F_m, G_p, G_m = jost_data(index, 5.0)
        assert scattering(index, 5.0).T == pytest.approx(2j * 5.0 / G_p)


class TestOdeOracle:
    """Test the fixed-step integrator against the closed form"""

    def test_vacuum(self):
        """Test that integration through vacuum returns psi(0) = 1"""
        sampled = ode_oracle(VACUUM, math.pi)
        assert sampled.x[0] == 0.0 and sampled.x[-1] == 1.0
        assert sampled.psi[0] == pytest.approx(1.0, abs=1e-10)

    def test_sample_count(self):
        """Test that at least the requested number of samples is returned"""
        sampled = ode_oracle(BilayerIndex(eta=1.5, kappa=0.0), 1.0, samples=400)
        assert len(sampled.x) >= 400
        assert np.all(np.diff(sampled.x) > 0)

    def test_too_few_samples(self):
        """Test that fewer than 100 samples is rejected"""
        with pytest.raises(DomainError):
            ode_oracle(VACUUM, 1.0, samples=50)

    @pytest.mark.parametrize("gamma", [0.0, -1e-3])
    def test_sample_doubling(self, gamma):
        """Test that doubling the samples moves psi(0) by less than 1e-10 relative"""
        index = BilayerIndex(eta=3.0, kappa=-0.1)
        coarse = ode_oracle(index, 1.0, gamma, samples=2000)
        fine = ode_oracle(index, 1.0, gamma, samples=4000)
        assert len(fine.x) == 2 * len(coarse.x) - 1
        assert abs(fine.psi[0] - coarse.psi[0]) < 1e-10 * abs(fine.psi[0])
        assert abs(fine.dpsi[0] - coarse.dpsi[0]) < 1e-10 * abs(fine.dpsi[0])

    @pytest.mark.slow
    @pytest.mark.parametrize("index, K", random_points(10, seed=2014))
    def test_matches_closed_form(self, index, K):
        """Test RK4 against zeta at random points"""
        assert ode_deviation(index, K) < 1e-8

    def test_export(self, tmp_path):
        """Test the sample CSV header and the no-overwrite rule"""
        path = tmp_path / "psi.csv"
        export_samples_csv(ode_oracle(VACUUM, 1.0, samples=100), path)
        assert path.read_text().splitlines()[0] == ",".join(SAMPLE_COLUMNS)
        with pytest.raises(OutputExistsError):
            export_samples_csv(ode_oracle(VACUUM, 1.0, samples=100), path)

import cmath
import math

import numpy as np
import pytest

from wqed import (HoppingSign, ModelParams, ValidationError, occupations,
                  polariton_basis, solve_node_system, transmission_amplitude,
                  transmission_spectrum)
from wqed.scattering import node_equation_residuals


def draw(rng):
    p = ModelParams(omega=rng.uniform(-5, 15), g=1.0,
                    Omega=rng.uniform(-5, 15), G=rng.uniform(0, 6))
    k = rng.uniform(0.01 * math.pi, 0.99 * math.pi)
    return p, k


class TestTransmissionAmplitude:
    def test_hand_evaluated_point(self):
        # (E - O+)(E - O-) = (E - Omega)(E - omega) - G^2 = -9 at E = 5,
        # so s = 6i / (-9 + 6i) = (36 - 54i)/117
        p = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
        s = transmission_amplitude(p, polariton_basis(p), math.pi / 2)
        assert s == pytest.approx(complex(36, -54) / 117, abs=1e-14)
        assert abs(s) ** 2 == pytest.approx(36 / 117, abs=1e-14)

    def test_decoupled_node_transmits(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            p = ModelParams(omega=rng.uniform(-5, 15), g=1.0,
                            Omega=rng.uniform(-5, 15), G=0.0)
            k = rng.uniform(0.01 * math.pi, 0.99 * math.pi)
            s = transmission_amplitude(p, polariton_basis(p), k)
            assert abs(s - 1.0) < 1e-12

    def test_fano_zero_inside_band(self):
        p = ModelParams(omega=3.0, g=1.0, Omega=2.0, G=3.0)
        k_star = 2 * math.pi / 3  # E(k*) = 3 + 2 cos(2pi/3) = 2 = Omega
        s = transmission_amplitude(p, polariton_basis(p), k_star)
        assert abs(s) ** 2 < 1e-20

    def test_band_edge_returns_zero(self):
        p = ModelParams(omega=3.0, g=1.0, Omega=2.0, G=3.0)
        assert transmission_amplitude(p, polariton_basis(p), 0.0) == 0.0
        assert transmission_amplitude(p, polariton_basis(p), math.pi) == 0.0

    def test_band_edge_limit(self):
        p = ModelParams(omega=3.0, g=1.0, Omega=10.0, G=3.0)
        basis = polariton_basis(p)
        mags = [abs(transmission_amplitude(p, basis, k)) for k in (0.1, 0.01, 0.001)]
        assert mags[2] < mags[1] < mags[0]
        assert mags[2] < 1e-2

    def test_minus_convention_matches_energy(self):
        plus = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
        minus = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0,
                            hopping_sign=HoppingSign.MINUS)
        k = 0.7
        s_plus = transmission_amplitude(plus, polariton_basis(plus), k)
        s_minus = transmission_amplitude(minus, polariton_basis(minus), math.pi - k)
        assert s_plus == pytest.approx(s_minus, abs=1e-14)

    def test_flux_conservation_random(self):
        rng = np.random.default_rng(11)
        for _ in range(2000):
            p, k = draw(rng)
            s = transmission_amplitude(p, polariton_basis(p), k)
            assert abs(s.real - abs(s) ** 2) < 1e-12


class TestOccupations:
    def test_decoupled_atom_above(self):
        p = ModelParams(omega=3.0, g=1.0, Omega=5.0, G=0.0)
        u_A, u_B = occupations(p, polariton_basis(p), math.pi / 3)
        assert u_A == 0.0
        assert abs(u_B) == pytest.approx(1.0)

    def test_hand_evaluated_point(self):
        p = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
        basis = polariton_basis(p)
        s = transmission_amplitude(p, basis, math.pi / 2)
        u_A, u_B = occupations(p, basis, math.pi / 2)
        assert u_A == pytest.approx(-0.32492 * s, abs=1e-5)
        assert abs(u_A) ** 2 == pytest.approx(0.03249, abs=1e-5)

    def test_polariton_a_dominates_when_its_level_in_band(self):
        # omega = 15, Omega = 5: polariton A sits inside the band
        p = ModelParams(omega=15.0, g=1.0, Omega=5.0, G=3.0)
        basis = polariton_basis(p)
        for k in (math.pi / 4, math.pi / 2, 3 * math.pi / 4):
            u_A, u_B = occupations(p, basis, k)
            assert abs(u_A) ** 2 > abs(u_B) ** 2

    def test_finite_at_fano_point(self):
        p = ModelParams(omega=3.0, g=1.0, Omega=2.0, G=3.0)
        basis = polariton_basis(p)
        u_A, u_B = occupations(p, basis, 2 * math.pi / 3)
        assert np.isfinite([abs(u_A), abs(u_B)]).all()
        # oracle: direct linear solve at the same wavenumber
        sol = solve_node_system(p, basis, 2 * math.pi / 3)
        assert u_A == pytest.approx(sol.u_A, abs=1e-12)
        assert u_B == pytest.approx(sol.u_B, abs=1e-12)


class TestDirectSolve:
    def test_free_chain(self):
        p = ModelParams(omega=4.0, g=1.0, Omega=7.0, G=0.0)
        sol = solve_node_system(p, k=math.pi / 2)
        assert sol.r == pytest.approx(0.0, abs=1e-14)
        assert sol.s == pytest.approx(1.0, abs=1e-14)

    def test_matches_closed_form(self):
        p = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
        basis = polariton_basis(p)
        sol = solve_node_system(p, basis, math.pi / 2)
        assert sol.s == pytest.approx(transmission_amplitude(p, basis, math.pi / 2), abs=1e-12)
        u_A, u_B = occupations(p, basis, math.pi / 2)
        assert sol.u_A == pytest.approx(u_A, abs=1e-12)
        assert sol.u_B == pytest.approx(u_B, abs=1e-12)

    def test_fano_point_perfect_reflection(self):
        p = ModelParams(omega=3.0, g=1.0, Omega=2.0, G=3.0)
        sol = solve_node_system(p, k=2 * math.pi / 3)
        assert abs(sol.s) < 1e-13
        assert sol.r == pytest.approx(-1.0, abs=1e-13)

    def test_r_equals_s_minus_one_and_residuals(self):
        rng = np.random.default_rng(23)
        for _ in range(500):
            p, k = draw(rng)
            basis = polariton_basis(p)
            sol = solve_node_system(p, basis, k)
            assert sol.r == pytest.approx(sol.s - 1.0, abs=1e-12)
            res = node_equation_residuals(p, basis, k, sol.r, sol.s, sol.u_A, sol.u_B)
            assert res < 1e-12

    def test_site0_amplitude_definition(self):
        p = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
        basis = polariton_basis(p)
        sol = solve_node_system(p, basis, 1.1)
        expected = math.sin(basis.theta) * sol.u_A - math.cos(basis.theta) * sol.u_B
        assert sol.u0 == pytest.approx(expected, abs=1e-14)


class TestTransmissionSpectrum:
    def test_free_chain_three_points(self):
        p = ModelParams(omega=4.0, g=1.0, Omega=7.0, G=0.0)
        sols = transmission_spectrum(p, [0.5, 1.5, 2.5])
        assert [pytest.approx(1.0, abs=1e-12)] * 3 == [s.T for s in sols]

    def test_fig5d_a_line_zero_pattern(self):
        # Omega inside the band: one interior zero, suppressed edges
        p = ModelParams(omega=3.0, g=1.0, Omega=2.0, G=3.0)
        ks = np.linspace(0.01 * math.pi, 0.99 * math.pi, 501)
        T = np.array([s.T for s in transmission_spectrum(p, ks)])
        assert T[0] < 1e-3 and T[-1] < 1e-3
        interior = T[50:-50]
        assert interior.min() < 1e-3
        imin = int(np.argmin(interior)) + 50
        assert 0 < imin < len(T) - 1

    def test_unitarity_sweep(self):
        p = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
        ks = np.linspace(0.01 * math.pi, 0.99 * math.pi, 1001)
        sols = transmission_spectrum(p, ks)
        worst = max(abs(s.s.real - abs(s.s) ** 2) for s in sols)
        assert worst < 1e-12

    def test_grid_validation(self):
        p = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
        with pytest.raises(ValidationError):
            transmission_spectrum(p, [0.5, 0.4])
        with pytest.raises(ValidationError):
            transmission_spectrum(p, [0.0, 0.5])

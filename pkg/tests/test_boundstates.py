import math

import numpy as np
import pytest

from wqed import (Branch, InconsistentEnergyError, ModelParams, PoleError,
                  ValidationError, bound_energies, bound_states,
                  bound_wavefunction, effective_potential)

FIG9 = ModelParams(omega=15.0, g=1.0, Omega=5.0, G=3.0)


class TestBoundEnergies:
    def test_fig9_parameters(self):
        upper, lower = bound_energies(FIG9)
        assert upper == pytest.approx(17.13, abs=0.01)
        assert lower == pytest.approx(4.16, abs=0.01)

    def test_transcendental_residuals(self):
        upper, lower = bound_energies(FIG9)
        ru = upper - FIG9.Omega - FIG9.G ** 2 / math.sqrt((upper - FIG9.omega) ** 2 - 4)
        rl = lower - FIG9.Omega + FIG9.G ** 2 / math.sqrt((lower - FIG9.omega) ** 2 - 4)
        assert abs(ru) < 1e-12
        assert abs(rl) < 1e-12

    def test_no_bound_state_at_zero_coupling(self):
        assert bound_energies(ModelParams(omega=15.0, g=1.0, Omega=5.0, G=0.0)) is None
        assert bound_states(ModelParams(omega=15.0, g=1.0, Omega=5.0, G=0.0)) == []

    def test_decoupling_limit(self):
        # Omega below the band: lower root -> Omega, upper root -> band edge
        p = ModelParams(omega=15.0, g=1.0, Omega=5.0, G=1e-6)
        upper, lower = bound_energies(p)
        assert lower == pytest.approx(5.0, abs=1e-6)
        assert upper == pytest.approx(17.0, abs=1e-6)

    def test_mirror_symmetry_at_zero_detuning(self):
        for G in (0.7, 2.0, 5.0):
            p = ModelParams(omega=6.0, g=1.0, Omega=6.0, G=G)
            upper, lower = bound_energies(p)
            assert upper - p.omega == pytest.approx(-(lower - p.omega), rel=1e-12)

    def test_always_outside_band_random(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            p = ModelParams(omega=rng.uniform(-10, 20), g=rng.uniform(0.2, 3),
                            Omega=rng.uniform(-10, 20), G=rng.uniform(1e-3, 6))
            upper, lower = bound_energies(p)
            assert upper > p.band_top
            assert lower < p.band_bottom

    def test_monotone_in_coupling(self):
        gs = np.linspace(0.1, 6.0, 50)
        uppers, lowers = [], []
        for G in gs:
            up, lo = bound_energies(ModelParams(omega=15.0, g=1.0, Omega=5.0, G=float(G)))
            uppers.append(up)
            lowers.append(lo)
        assert all(b > a for a, b in zip(uppers, uppers[1:]))
        assert all(b < a for a, b in zip(lowers, lowers[1:]))


class TestBoundWavefunction:
    def test_upper_branch_decay_factor(self):
        upper, _ = bound_energies(FIG9)
        state = bound_wavefunction(FIG9, upper, Branch.UPPER)
        # quadratic root of beta + 1/beta = E_b - omega ~ 2.13
        assert state.beta == pytest.approx(0.696, abs=1e-3)
        assert state.localization_length == pytest.approx(2.8, abs=0.1)

    def test_lower_branch_staggered(self):
        _, lower = bound_energies(FIG9)
        state = bound_wavefunction(FIG9, lower, Branch.LOWER)
        assert state.beta == pytest.approx(-0.093, abs=1e-3)
        assert state.amplitude(1) * state.amplitude(2) < 0

    def test_lattice_equation_residuals(self):
        upper, lower = bound_energies(FIG9)
        for E_b, branch in ((upper, Branch.UPPER), (lower, Branch.LOWER)):
            st = bound_wavefunction(FIG9, E_b, branch)
            g, G = FIG9.g, FIG9.G
            for j in range(-50, 51):
                res = (g * (st.amplitude(j + 1) + st.amplitude(j - 1))
                       + FIG9.omega * st.amplitude(j)
                       + (G * st.u_e if j == 0 else 0.0)
                       - E_b * st.amplitude(j))
                assert abs(res) < 1e-12
            atom_res = G * st.amplitude(0) + FIG9.Omega * st.u_e - E_b * st.u_e
            assert abs(atom_res) < 1e-12

    def test_normalization(self):
        for st in bound_states(FIG9):
            assert st.norm_check == pytest.approx(1.0, abs=1e-12)
            total = np.sum(st.profile(4000) ** 2) + st.u_e ** 2
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_node_matching_invariants(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            p = ModelParams(omega=rng.uniform(-5, 15), g=rng.uniform(0.2, 3),
                            Omega=rng.uniform(-5, 15), G=rng.uniform(0.3, 6))
            for st in bound_states(p):
                assert st.E_b - p.omega == pytest.approx(
                    p.g * (st.beta + 1 / st.beta), rel=1e-10)
                assert p.G ** 2 / (st.E_b - p.Omega) == pytest.approx(
                    p.g * (1 / st.beta - st.beta), rel=1e-8)
                assert (st.E_b - p.Omega) * st.u_e == pytest.approx(p.G * st.u0, rel=1e-10)
                if st.branch is Branch.UPPER:
                    assert 0 < st.beta < 1
                else:
                    assert -1 < st.beta < 0

    def test_in_band_energy_rejected(self):
        with pytest.raises(InconsistentEnergyError):
            bound_wavefunction(FIG9, FIG9.omega + 1.0, Branch.UPPER)

    def test_wrong_energy_rejected(self):
        with pytest.raises(ValidationError):
            bound_wavefunction(FIG9, FIG9.band_top + 5.0, Branch.UPPER)


class TestEffectivePotential:
    def test_direct_substitution(self):
        p = ModelParams(omega=0.0, g=1.0, Omega=5.0, G=3.0)
        assert effective_potential(p, 6.0) == pytest.approx(-9.0)

    def test_zero_coupling(self):
        p = ModelParams(omega=0.0, g=1.0, Omega=5.0, G=0.0)
        assert effective_potential(p, 2.0) == 0.0

    def test_odd_pole(self):
        p = ModelParams(omega=0.0, g=1.0, Omega=5.0, G=3.0)
        assert effective_potential(p, 5.0 + 1e-6) < 0 < effective_potential(p, 5.0 - 1e-6)

    def test_pole_raises(self):
        p = ModelParams(omega=0.0, g=1.0, Omega=5.0, G=3.0)
        with pytest.raises(PoleError, match="resonance"):
            effective_potential(p, 5.0)

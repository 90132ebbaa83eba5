"""Self-verification suite behind the `wqed verify` command.

Each check pits an implementation against an independent path: closed-form
amplitudes against the direct linear solve, transcendental bound energies
against finite-lattice diagonalization, analytic transmission against
wavepacket dynamics.  The checks are condensed (seconds, not minutes)
versions of the acceptance tests in the repository test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import boundstates, lattice, scattering
from .model import ModelParams, polariton_basis

FIG9_PARAMS = ModelParams(omega=15.0, g=1.0, Omega=5.0, G=3.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _draw_params(rng: np.random.Generator) -> tuple[ModelParams, float]:
    p = ModelParams(omega=rng.uniform(-5, 15), g=1.0,
                    Omega=rng.uniform(-5, 15), G=rng.uniform(0.0, 6.0))
    k = rng.uniform(0.01 * math.pi, 0.99 * math.pi)
    return p, k


def check_flux_conservation(n_draws: int = 1000, seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        p, k = _draw_params(rng)
        s = scattering.transmission_amplitude(p, polariton_basis(p), k)
        worst = max(worst, abs(s.real - abs(s) ** 2))
    return CheckResult("flux conservation Re s = |s|^2", worst < 1e-12,
                       f"max deviation {worst:.2e} over {n_draws} draws")


def check_closed_vs_direct(n_draws: int = 1000, seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_s = worst_res = 0.0
    for _ in range(n_draws):
        p, k = _draw_params(rng)
        basis = polariton_basis(p)
        sol = scattering.solve_node_system(p, basis, k)
        s_closed = scattering.transmission_amplitude(p, basis, k)
        u_A, u_B = scattering.occupations(p, basis, k)
        worst_s = max(worst_s, abs(sol.s - s_closed), abs(sol.u_A - u_A), abs(sol.u_B - u_B))
        worst_res = max(worst_res, scattering.node_equation_residuals(
            p, basis, k, sol.r, sol.s, sol.u_A, sol.u_B))
    ok = worst_s < 1e-12 and worst_res < 1e-12
    return CheckResult("closed form vs direct solve", ok,
                       f"max amplitude gap {worst_s:.2e}, max residual {worst_res:.2e}")


def check_fano_zero(n_sets: int = 50, seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_T = worst_r = 0.0
    for _ in range(n_sets):
        omega = rng.uniform(-5, 15)
        Omega = omega + rng.uniform(-1.9, 1.9)
        p = ModelParams(omega=omega, g=1.0, Omega=Omega, G=rng.uniform(0.5, 6.0))
        k_star = math.acos((Omega - omega) / (2.0 * p.g))
        sol = scattering.solve_node_system(p, k=k_star)
        worst_T = max(worst_T, sol.T)
        worst_r = max(worst_r, abs(sol.r + 1.0))
    ok = worst_T < 1e-20 and worst_r < 1e-12
    return CheckResult("Fano zero: perfect reflection at E = Omega", ok,
                       f"max T {worst_T:.2e}, max |r+1| {worst_r:.2e}")


def check_decoupling(seed: int = 4) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        p = ModelParams(omega=rng.uniform(-5, 15), g=1.0, Omega=rng.uniform(-5, 15), G=0.0)
        k = rng.uniform(0.01 * math.pi, 0.99 * math.pi)
        s = scattering.transmission_amplitude(p, polariton_basis(p), k)
        worst = max(worst, abs(s - 1.0))
    return CheckResult("decoupled node transmits perfectly (G=0 => s=1)",
                       worst < 1e-12, f"max |s-1| {worst:.2e}")


def check_polariton_eigenvalues(n_draws: int = 1000, seed: int = 5) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        p, _ = _draw_params(rng)
        basis = polariton_basis(p)
        evals = np.linalg.eigvalsh(np.array([[p.Omega, p.G], [p.G, p.omega]]))
        scale = max(1.0, abs(evals[0]), abs(evals[1]))
        worst = max(worst,
                    abs(basis.Omega_minus - evals[0]) / scale,
                    abs(basis.Omega_plus - evals[1]) / scale)
    return CheckResult("polariton energies match 2x2 eigenvalues", worst < 1e-12,
                       f"max relative gap {worst:.2e}")


def check_bound_oracle(L: int = 200) -> CheckResult:
    p = FIG9_PARAMS
    upper, lower = boundstates.bound_energies(p)
    pairs = lattice.bound_states_numeric(p, lattice.LatticeConfig(L=L))
    if len(pairs) != 2:
        return CheckResult("bound states vs lattice oracle", False,
                           f"expected 2 out-of-band levels, got {len(pairs)}")
    gap = max(abs(pairs[0][0] - lower), abs(pairs[1][0] - upper))
    overlaps = []
    for (E, vec), state in zip(pairs, [boundstates.bound_wavefunction(p, lower, boundstates.Branch.LOWER),
                                       boundstates.bound_wavefunction(p, upper, boundstates.Branch.UPPER)]):
        analytic = np.append(state.profile(L), state.u_e)
        analytic /= np.linalg.norm(analytic)
        overlaps.append(abs(np.dot(analytic, vec)))
    ok = gap < 1e-8 and min(overlaps) > 1.0 - 1e-8
    return CheckResult("bound states vs lattice oracle (L=200)", ok,
                       f"max energy gap {gap:.2e}, min overlap {min(overlaps):.12f}")


def check_bound_monotonicity(n_grid: int = 20) -> CheckResult:
    base = FIG9_PARAMS
    gs = np.linspace(0.2, 6.0, n_grid)
    uppers, lowers = [], []
    for G in gs:
        up, lo = boundstates.bound_energies(ModelParams(base.omega, base.g, base.Omega, float(G)))
        uppers.append(up)
        lowers.append(lo)
    ok = all(b > a for a, b in zip(uppers, uppers[1:])) and \
        all(b < a for a, b in zip(lowers, lowers[1:]))
    return CheckResult("bound energies monotone in G (level repulsion)", ok,
                       f"E_b1 in [{uppers[0]:.4f}, {uppers[-1]:.4f}], "
                       f"E_b2 in [{lowers[-1]:.4f}, {lowers[0]:.4f}]")


def check_wavepacket_oracle() -> CheckResult:
    p = ModelParams(omega=5.0, g=1.0, Omega=8.0, G=3.0)
    config = lattice.LatticeConfig(L=700)
    spec = lattice.WavepacketSpec(k0=math.pi / 2, sigma=30.0, j0=-200, t_final=320.0)
    result = lattice.propagate_wavepacket(p, config, spec)
    expected = 36.0 / 117.0
    gap = abs(result.T_num - expected)
    return CheckResult("wavepacket transmission vs closed form", gap < 0.03,
                       f"T_num={result.T_num:.4f}, closed form {expected:.4f}, gap {gap:.4f}")


def check_determinism() -> CheckResult:
    from .cli import figure_rows  # local import to avoid a cycle

    first = figure_rows("fig5d", k_count=101)
    second = figure_rows("fig5d", k_count=101)
    return CheckResult("figure output determinism", first == second,
                       "byte-identical rows" if first == second else "rows differ")


ALL_CHECKS: list[Callable[[], CheckResult]] = [
    check_flux_conservation,
    check_closed_vs_direct,
    check_fano_zero,
    check_decoupling,
    check_polariton_eigenvalues,
    check_bound_oracle,
    check_bound_monotonicity,
    check_wavepacket_oracle,
    check_determinism,
]


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]

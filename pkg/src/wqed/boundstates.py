"""Photon-atom bound states outside the band.

For any G > 0 the node binds exactly two states, one above and one below the
band.  Their energies solve the transcendental pair

    upper:  E = Omega + G^2 / sqrt((E - omega)^2 - 4 g^2),   E > omega + 2g
    lower:  E = Omega - G^2 / sqrt((E - omega)^2 - 4 g^2),   E < omega - 2g

and each side is monotone, so both roots exist and are unique.  The spatial
envelope is parametrized by a real per-site decay factor beta with
u_j = u0 * beta^{|j|}: beta in (0, 1) on the upper branch and in (-1, 0) on
the lower branch (staggered sign), the real-beta stand-in for the complex
wavenumber k = a - ib of the evanescent ansatz (a = 0 above the band,
a = pi below it).  The matching conditions are

    E - omega = g (beta + 1/beta),
    G^2 / (E - Omega) = g (1/beta - beta),
    (E - Omega) u_e = G u0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InconsistentEnergyError, NumericalError, PoleError, ValidationError
from .model import ModelParams

_RESIDUAL_TOL = 1e-12
_PRECONDITION_TOL = 1e-10


class Branch(enum.Enum):
    UPPER = "upper"   # E_b > omega + 2g
    LOWER = "lower"   # E_b < omega - 2g


@dataclass(frozen=True)
class BoundState:
    E_b: float
    beta: float
    u0: float
    u_e: float
    branch: Branch
    norm_check: float

    @property
    def localization_length(self) -> float:
        """e-folding scale of the envelope, in lattice sites."""
        return 1.0 / math.log(1.0 / abs(self.beta))

    def amplitude(self, j: int) -> float:
        """Photon amplitude at site j."""
        return self.u0 * self.beta ** abs(j)

    def profile(self, j_max: int) -> np.ndarray:
        """Amplitudes u_j for j = -j_max .. j_max."""
        js = np.abs(np.arange(-j_max, j_max + 1))
        return self.u0 * np.power(self.beta, js)


def _residual(params: ModelParams, E: float, branch: Branch) -> float:
    root = math.sqrt((E - params.omega) ** 2 - 4.0 * params.g ** 2)
    if branch is Branch.UPPER:
        return E - params.Omega - params.G ** 2 / root
    return E - params.Omega + params.G ** 2 / root


def _residual_derivative(params: ModelParams, E: float, branch: Branch) -> float:
    x = E - params.omega
    root = math.sqrt(x * x - 4.0 * params.g ** 2)
    term = params.G ** 2 * x / root ** 3
    return 1.0 + term if branch is Branch.UPPER else 1.0 - term


def _solve_branch(params: ModelParams, branch: Branch) -> float:
    omega, g, G = params.omega, params.g, params.G
    sign = 1.0 if branch is Branch.UPPER else -1.0
    edge = omega + sign * 2.0 * g
    span = G * G + 2.0 * g

    # near-edge bracket end: shrink toward the edge until the residual takes
    # the diverging sign there (it is -inf/+inf in exact arithmetic, but for
    # very small G the root can fall below the first representable offset)
    offset = 1e-9 * g
    near = edge + sign * offset
    while sign * _residual(params, near, branch) >= 0.0:
        offset /= 256.0
        candidate = edge + sign * offset
        if candidate == edge or offset < 1e-18 * g:
            # root numerically indistinguishable from the band edge
            return near
        near = candidate

    # far end: widen geometrically until the residual changes sign
    far = max(params.Omega, edge) + span if branch is Branch.UPPER \
        else min(params.Omega, edge) - span
    widen = 1.0
    while sign * _residual(params, far, branch) <= 0.0:
        widen *= 2.0
        far += sign * widen * span

    lo, hi = (near, far) if branch is Branch.UPPER else (far, near)
    E = brentq(lambda e: _residual(params, e, branch), lo, hi, xtol=1e-13, rtol=1e-15)
    # Newton polish down to the 1e-12 residual contract; near the band edge the
    # residual derivative blows up and the best representable E can leave a
    # larger residual, so accept once the root is converged to the last bit
    for _ in range(8):
        f = _residual(params, E, branch)
        d = _residual_derivative(params, E, branch)
        achievable = 8.0 * d * max(abs(E), 1.0) * 2.22e-16
        if abs(f) < max(_RESIDUAL_TOL, achievable):
            break
        step = f / d
        if E - step == E or abs(E - step - omega) <= 2.0 * g:
            break  # converged to machine precision / would step inside the band
        E -= step
    else:
        f = _residual(params, E, branch)
        d = _residual_derivative(params, E, branch)
        if abs(f) > max(1e-9, 100.0 * d * max(abs(E), 1.0) * 2.22e-16):
            raise NumericalError(f"bound-energy polish failed on {branch.value} branch")
    return E


def bound_energies(params: ModelParams) -> tuple[float, float] | None:
    """Both bound energies (upper, lower), or None when G = 0.

    In the G -> 0+ limit one root tends to the detached atomic level Omega
    (when Omega lies outside the band) and the other to the adjacent band
    edge; at G = 0 exactly there is no bound state and None is returned.
    """
    if params.G == 0:
        return None
    return _solve_branch(params, Branch.UPPER), _solve_branch(params, Branch.LOWER)


def bound_wavefunction(params: ModelParams, E_b: float, branch: Branch) -> BoundState:
    """Normalized bound-state profile for an energy solving the branch equation.

    beta is the magnitude-<1 root of beta^2 - ((E_b - omega)/g) beta + 1 = 0;
    the closed geometric sum sum_j beta^{2|j|} = (1 + beta^2)/(1 - beta^2)
    fixes the normalization together with the atomic weight
    u_e = G u0 / (E_b - Omega).
    """
    x = (E_b - params.omega) / params.g
    if abs(x) <= 2.0:
        raise InconsistentEnergyError(
            f"E_b={E_b} lies inside the band [{params.band_bottom}, {params.band_top}]")
    # Near a band edge the residual derivative blows up, so the best
    # representable root can leave |f| well above the nominal tolerance;
    # accept anything within a few ulps of a true zero at the local slope.
    slope = _residual_derivative(params, E_b, branch)
    tol = max(_PRECONDITION_TOL, 100.0 * slope * max(abs(E_b), 1.0) * 2.22e-16)
    if abs(_residual(params, E_b, branch)) > tol:
        raise ValidationError(
            f"E_b={E_b} does not solve the {branch.value}-branch equation")
    disc = math.sqrt(x * x - 4.0)
    beta = (x - disc) / 2.0 if x > 0 else (x + disc) / 2.0
    if abs(beta) >= 1.0:
        raise InconsistentEnergyError(f"decay factor |beta|={abs(beta)} >= 1 for E_b={E_b}")
    if branch is Branch.UPPER and beta <= 0:
        raise InconsistentEnergyError("upper-branch energy produced a negative beta")
    if branch is Branch.LOWER and beta >= 0:
        raise InconsistentEnergyError("lower-branch energy produced a positive beta")
    atom_ratio = params.G / (E_b - params.Omega)
    site_sum = (1.0 + beta * beta) / (1.0 - beta * beta)
    u0 = 1.0 / math.sqrt(site_sum + atom_ratio * atom_ratio)
    u_e = atom_ratio * u0
    norm_check = u0 * u0 * site_sum + u_e * u_e
    return BoundState(E_b=E_b, beta=beta, u0=u0, u_e=u_e,
                      branch=branch, norm_check=norm_check)


def bound_states(params: ModelParams) -> list[BoundState]:
    """Convenience: both normalized bound states, ordered (upper, lower)."""
    energies = bound_energies(params)
    if energies is None:
        return []
    upper, lower = energies
    return [bound_wavefunction(params, upper, Branch.UPPER),
            bound_wavefunction(params, lower, Branch.LOWER)]


def effective_potential(params: ModelParams, E: float) -> float:
    """Energy-dependent contact potential -G^2 / (E - Omega) at site 0.

    Diagnostic only: it exposes the resonant enhancement as E approaches the
    atomic level spacing Omega (odd pole, attractive above and repulsive
    below the resonance).
    """
    if E == params.Omega:
        raise PoleError(
            f"effective potential has a pole at the atomic resonance E = Omega = {E}")
    return -params.G ** 2 / (E - params.Omega)

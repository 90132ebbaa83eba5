"""Exact single-photon scattering off the atomic-ensemble node.

Three independent evaluation paths are provided and cross-checked in the
test suite:

* :func:`transmission_amplitude` -- the closed-form amplitude in the
  polariton representation,
* :func:`occupations` -- the polariton amplitudes via an analytically
  cancelled quotient that stays finite at the Fano point E = Omega,
* :func:`solve_node_system` -- a direct 4x4 linear solve of the discrete
  node equations with the plane-wave ansatz substituted; it never evaluates
  the closed form.

All wavenumbers are taken strictly inside (0, pi); the incident energy is
E = omega + 2 g cos k (PLUS convention; MINUS parameters are mapped through
k -> pi - k, which leaves E and sin k unchanged).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericalError, ValidationError
from .model import HoppingSign, ModelParams, PolaritonBasis, polariton_basis

BAND_EDGE_TOL = 1e-14


@dataclass(frozen=True)
class ScatteringSolution:
    """Scattering amplitudes and probabilities at one wavenumber."""

    k: float
    E: float
    s: complex
    r: complex
    u_A: complex
    u_B: complex
    u0: complex          # derived site-0 amplitude, sin(theta) u_A - cos(theta) u_B
    T: float
    R: float
    band_edge: bool = False


def _effective_k(params: ModelParams, k: float) -> float:
    """Map the caller's wavenumber into the internal PLUS convention."""
    if not 0.0 <= k <= math.pi:
        raise ValidationError(f"wavenumber k must lie in [0, pi], got {k}")
    return k if params.hopping_sign is HoppingSign.PLUS else math.pi - k


def is_band_edge(k: float) -> bool:
    return abs(math.sin(k)) < BAND_EDGE_TOL


def transmission_amplitude(params: ModelParams,
                           basis: PolaritonBasis,
                           k: float) -> complex:
    """Closed-form transmission amplitude s(k).

    s = -2ig (E - Omega) sin k / [(E - Omega_+)(E - Omega_-)
                                  - 2 g e^{ik} (E - Omega)]

    For a decoupled node (G = 0) the denominator factorizes and s = 1
    identically.  At the band edges (sin k below 1e-14) s = 0 is returned;
    callers needing the flag should use :func:`solve_node_system`.
    """
    ke = _effective_k(params, k)
    if is_band_edge(ke):
        return 0.0 + 0.0j
    if params.G == 0:
        return 1.0 + 0.0j
    g = params.g
    E = params.omega + 2.0 * g * math.cos(ke)
    num = -2.0j * g * (E - params.Omega) * math.sin(ke)
    den = ((E - basis.Omega_plus) * (E - basis.Omega_minus)
           - 2.0 * g * cmath.exp(1j * ke) * (E - params.Omega))
    return num / den


def occupations(params: ModelParams,
                basis: PolaritonBasis,
                k: float) -> tuple[complex, complex]:
    """Polariton amplitudes (u_A, u_B) at site 0.

    The printed quotients
        u_A =  (E - Omega_-) / (E - Omega) * (xi_A / g) * s
        u_B = -(E - Omega_+) / (E - Omega) * (xi_B / g) * s
    are 0/0 at the Fano point E = Omega although the limit is finite; the
    factor s / (E - Omega) is therefore computed in its cancelled form
        s / (E - Omega) = -2ig sin k / [-2ig (E - Omega) sin k - G^2],
    whose denominator has real part -G^2 and never vanishes for G > 0.
    """
    ke = _effective_k(params, k)
    if is_band_edge(ke):
        return 0.0j, 0.0j
    g = params.g
    E = params.omega + 2.0 * g * math.cos(ke)
    if params.G == 0:
        # decoupled node: s = 1 and only the bare-cavity channel is occupied
        s = 1.0 + 0.0j
        if basis.delta >= 0:
            return 0.0j, -(basis.xi_B / g) * s
        return (basis.xi_A / g) * s, 0.0j
    den = -2.0j * g * (E - params.Omega) * math.sin(ke) - params.G ** 2
    s_ratio = -2.0j * g * math.sin(ke) / den
    u_A = (E - basis.Omega_minus) * (basis.xi_A / g) * s_ratio
    u_B = -(E - basis.Omega_plus) * (basis.xi_B / g) * s_ratio
    return u_A, u_B


def solve_node_system(params: ModelParams,
                      basis: PolaritonBasis | None = None,
                      k: float = math.pi / 2) -> ScatteringSolution:
    """Solve the four discrete node equations directly.

    Substituting the asymptotic ansatz
        u_j = e^{ikj} + r e^{-ikj}  (j <= -1),    u_j = s e^{ikj}  (j >= 1)
    into the node equations yields a linear system in (r, s, u_A, u_B) which
    is solved by Gaussian elimination.  This path is independent of the
    closed-form amplitude and serves as its in-module cross-check.
    """
    if basis is None:
        basis = polariton_basis(params)
    ke = _effective_k(params, k)
    if is_band_edge(ke):
        return ScatteringSolution(k=k, E=dispersion_plus(params, ke), s=0j,
                                  r=-1.0 + 0j, u_A=0j, u_B=0j, u0=0j,
                                  T=0.0, R=1.0, band_edge=True)
    g = params.g
    E = params.omega + 2.0 * g * math.cos(ke)
    eik = cmath.exp(1j * ke)
    emik = cmath.exp(-1j * ke)
    xa, xb = basis.xi_A, basis.xi_B
    # unknowns x = (r, s, u_A, u_B)
    A = np.array([
        [(E - params.omega) * eik - g * eik ** 2, 0.0, -xa, xb],
        [0.0, (E - params.omega) * eik - g * eik ** 2, -xa, xb],
        [-xa * eik, -xa * eik, E - basis.Omega_plus, 0.0],
        [xb * eik, xb * eik, 0.0, E - basis.Omega_minus],
    ], dtype=complex)
    b = np.array([
        -(E - params.omega) * emik + g * emik ** 2,
        0.0,
        xa * emik,
        -xb * emik,
    ], dtype=complex)
    try:
        r, s, u_A, u_B = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:  # cannot occur for real k in the open band
        raise NumericalError(f"singular node system at k={k}: {exc}") from exc
    u0 = math.sin(basis.theta) * u_A - math.cos(basis.theta) * u_B
    return ScatteringSolution(
        k=k, E=E, s=complex(s), r=complex(r),
        u_A=complex(u_A), u_B=complex(u_B), u0=complex(u0),
        T=abs(s) ** 2, R=abs(r) ** 2,
    )


def dispersion_plus(params: ModelParams, k: float) -> float:
    """Incident energy in the internal PLUS convention."""
    return params.omega + 2.0 * params.g * math.cos(k)


def node_equation_residuals(params: ModelParams,
                            basis: PolaritonBasis,
                            k: float,
                            r: complex, s: complex,
                            u_A: complex, u_B: complex) -> float:
    """Max absolute residual of the four node equations for given amplitudes."""
    ke = _effective_k(params, k)
    g = params.g
    E = params.omega + 2.0 * g * math.cos(ke)
    u = lambda j: cmath.exp(1j * ke * j) + r * cmath.exp(-1j * ke * j) if j <= -1 \
        else s * cmath.exp(1j * ke * j)
    res = [
        (E - params.omega) * u(-1) - g * u(-2) - basis.xi_A * u_A + basis.xi_B * u_B,
        (E - params.omega) * u(1) - g * u(2) - basis.xi_A * u_A + basis.xi_B * u_B,
        (E - basis.Omega_plus) * u_A - basis.xi_A * (u(-1) + u(1)),
        (E - basis.Omega_minus) * u_B + basis.xi_B * (u(-1) + u(1)),
    ]
    return max(abs(x) for x in res)


def transmission_spectrum(params: ModelParams,
                          k_grid: Sequence[float]) -> list[ScatteringSolution]:
    """Pointwise direct solve over a strictly increasing grid inside (0, pi)."""
    ks = list(k_grid)
    if any(not 0.0 < k < math.pi for k in ks):
        raise ValidationError("all grid wavenumbers must lie strictly inside (0, pi)")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValidationError("wavenumber grid must be strictly increasing")
    basis = polariton_basis(params)
    out = []
    for i, k in enumerate(ks):
        try:
            out.append(solve_node_system(params, basis, k))
        except Exception as exc:
            raise NumericalError(f"spectrum failed at grid index {i} (k={k}): {exc}") from exc
    return out

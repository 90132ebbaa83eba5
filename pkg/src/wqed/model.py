"""Physical parameters, lattice dispersion, and the dressed-node basis.

A one dimensional array of coupled cavities (bare frequency ``omega``,
nearest-neighbor hopping ``g``) carries a single photon; the cavity at site 0
is additionally coupled with strength ``G`` to a collective atomic mode of
level spacing ``Omega``.  Hybridizing the site-0 cavity with the atomic mode
gives two polariton channels with energies ``Omega_plus``/``Omega_minus``.

All energies can be given in any common unit; the formulas are scale free.
By convention the examples and the CLI use units of the hopping constant
(``g = 1``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError


class HoppingSign(enum.Enum):
    """Sign convention of the hopping term.

    PLUS gives the band ``E_k = omega + 2 g cos k``; MINUS gives
    ``E_k = omega - 2 g cos k``.  The two views are related by the wavenumber
    map ``k -> pi - k`` and cover the same band ``[omega - 2g, omega + 2g]``.
    Scattering and bound-state formulas are evaluated internally in the PLUS
    convention, which makes the closed-form transmission amplitude exact as
    written; a MINUS ``ModelParams`` is handled by mapping wavenumbers.
    """

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class ModelParams:
    """Immutable physical parameter set."""

    omega: float
    g: float = 1.0
    Omega: float = 0.0
    G: float = 0.0
    hopping_sign: HoppingSign = HoppingSign.PLUS

    def __post_init__(self) -> None:
        if not self.g > 0:
            raise ValidationError(f"hopping g must be positive, got {self.g}")
        if self.G < 0:
            raise ValidationError(f"collective coupling G must be >= 0, got {self.G}")

    @property
    def band_bottom(self) -> float:
        return self.omega - 2.0 * self.g

    @property
    def band_top(self) -> float:
        return self.omega + 2.0 * self.g


@dataclass(frozen=True)
class PolaritonBasis:
    """Derived quantities of the dressed node.

    ``theta`` is the mixing angle of the 2x2 node Hamiltonian
    ``[[Omega, G], [G, omega]]``; ``Omega_plus``/``Omega_minus`` are its
    eigenvalues, and ``xi_A = g sin(theta)``, ``xi_B = g cos(theta)`` are the
    effective couplings of the two polariton channels to the chain.
    """

    delta: float
    Delta: float
    theta: float
    Omega_plus: float
    Omega_minus: float
    xi_A: float
    xi_B: float


def effective_coupling(xi: float, zeta: Sequence[complex]) -> float:
    """Collective coupling G = xi * sqrt(sum_l |zeta_l|^2).

    ``zeta`` holds the per-atom coupling inhomogeneities, each of magnitude
    at most 1; for N atoms with uniform unit couplings this reduces to the
    familiar sqrt(N) enhancement, G = xi * sqrt(N).
    """
    zeta = list(zeta)
    if not zeta:
        raise ValidationError("zeta list must be non-empty")
    if xi < 0:
        raise ValidationError(f"coupling xi must be >= 0, got {xi}")
    weights = [abs(z) for z in zeta]
    if any(w > 1.0 + 1e-12 for w in weights):
        raise ValidationError("all |zeta_l| must be <= 1")
    return xi * math.sqrt(sum(w * w for w in weights))


def dispersion(params: ModelParams, k: float) -> float:
    """Band energy at wavenumber k in [0, pi] (lattice constant 1)."""
    if not 0.0 <= k <= math.pi:
        raise ValidationError(f"wavenumber k must lie in [0, pi], got {k}")
    sign = 1.0 if params.hopping_sign is HoppingSign.PLUS else -1.0
    return params.omega + sign * 2.0 * params.g * math.cos(k)


def dispersion_limits(params: ModelParams, k: float) -> tuple[float, float]:
    """Quadratic (band-bottom) and linear (band-center) expansions of E_k.

    MINUS convention is assumed, as is usual for the long-wavelength limit:
    the quadratic form is ``omega - 2g + g k^2`` about k = 0, and the linear
    form is the tangent at the band center, ``omega - pi g + 2 g k``.  The
    expansion point of the linear form is taken at k = pi/2 (where the band
    is exactly linear to second order); these expansions are documentation
    and consistency-test aids only and play no role in scattering.
    """
    quadratic = params.omega - 2.0 * params.g + params.g * k * k
    linear = params.omega - math.pi * params.g + 2.0 * params.g * k
    return quadratic, linear


def polariton_basis(params: ModelParams) -> PolaritonBasis:
    """Diagonalize the 2x2 node Hamiltonian [[Omega, G], [G, omega]].

    At G = 0 the mixing angle is fixed by continuity in the detuning
    delta = Omega - omega: theta -> 0 for delta > 0 and theta -> pi/2 for
    delta < 0 (the degenerate delta = 0, G = 0 corner takes theta = 0).
    """
    delta = params.Omega - params.omega
    Delta = math.hypot(delta, 2.0 * params.G)
    if params.G > 0:
        theta = math.atan(math.sqrt((Delta - delta) / (Delta + delta)))
    else:
        theta = 0.0 if delta >= 0 else math.pi / 2.0
    half_sum = 0.5 * (params.Omega + params.omega)
    return PolaritonBasis(
        delta=delta,
        Delta=Delta,
        theta=theta,
        Omega_plus=half_sum + 0.5 * Delta,
        Omega_minus=half_sum - 0.5 * Delta,
        xi_A=params.g * math.sin(theta),
        xi_B=params.g * math.cos(theta),
    )

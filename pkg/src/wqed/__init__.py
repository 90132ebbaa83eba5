"""Single-photon transport in a coupled-resonator waveguide with an
atomic-ensemble quantum node: exact scattering amplitudes, bound states, and
an independent finite-lattice verification engine."""

from .boundstates import (BoundState, Branch, bound_energies, bound_states,
                          bound_wavefunction, effective_potential)
from .errors import (InconsistentEnergyError, IntegratorError, NumericalError,
                     PoleError, ValidationError, WqedError)
from .lattice import (Boundary, LatticeConfig, PropagationResult, WavepacketSpec,
                      bound_states_numeric, build_hamiltonian,
                      propagate_wavepacket, transmission_curve_numeric)
from .model import (HoppingSign, ModelParams, PolaritonBasis, dispersion,
                    dispersion_limits, effective_coupling, polariton_basis)
from .scattering import (ScatteringSolution, occupations, solve_node_system,
                         transmission_amplitude, transmission_spectrum)

__version__ = "0.1.0"

__all__ = [
    "BoundState", "Branch", "bound_energies", "bound_states",
    "bound_wavefunction", "effective_potential",
    "Boundary", "LatticeConfig", "PropagationResult", "WavepacketSpec",
    "bound_states_numeric", "build_hamiltonian", "propagate_wavepacket",
    "transmission_curve_numeric",
    "HoppingSign", "ModelParams", "PolaritonBasis", "dispersion",
    "dispersion_limits", "effective_coupling", "polariton_basis",
    "ScatteringSolution", "occupations", "solve_node_system",
    "transmission_amplitude", "transmission_spectrum",
    "WqedError", "ValidationError", "PoleError", "InconsistentEnergyError",
    "IntegratorError", "NumericalError",
]

"""Multi-qubit quantum Rabi model in the ultrastrong-coupling regime.

Exact diagonalization, virtual-path perturbation theory, and dressed-operator
Lindblad dynamics for the resonant joint absorption and emission of a single
photon by two or more atoms.
"""

__version__ = "0.1.0"

from .hilbert import (
    BareLabel,
    SpaceShape,
    annihilation,
    bare_index,
    bare_state,
    parity_operator,
    parse_bare_label,
    pauli,
    quadrature,
)
from .model import PulseSpec, SystemConfig, drive_envelope, drive_hamiltonian, static_hamiltonian
from .spectral import (
    AnticrossingResult,
    Spectrum,
    SpectrumSweep,
    diagonalize,
    dressed_operators,
    find_anticrossing,
    identify_state,
    sweep_spectrum,
)
from .perturbation import (
    CollectiveLabel,
    CouplingComparison,
    EffectiveCoupling,
    PathContribution,
    compare_with_exact,
    coupling_dense,
    effective_coupling_analytic,
    effective_coupling_path_sum,
    enumerate_paths,
    format_path_report,
    power_law_exponent,
)
from .dynamics import (
    CalibrationResult,
    TrajectoryRecord,
    bare_state_in_levels,
    calibrate_pi_pulse,
    check_density_matrix,
    evolve,
    full_protocol,
    ghz_fidelity,
    lindblad_rhs,
)
from .experiments import ExperimentSpec, parse_config, render_config, run

__all__ = [
    "BareLabel",
    "SpaceShape",
    "annihilation",
    "bare_index",
    "bare_state",
    "parity_operator",
    "parse_bare_label",
    "pauli",
    "quadrature",
    "PulseSpec",
    "SystemConfig",
    "drive_envelope",
    "drive_hamiltonian",
    "static_hamiltonian",
    "AnticrossingResult",
    "Spectrum",
    "SpectrumSweep",
    "diagonalize",
    "dressed_operators",
    "find_anticrossing",
    "identify_state",
    "sweep_spectrum",
    "CollectiveLabel",
    "CouplingComparison",
    "EffectiveCoupling",
    "PathContribution",
    "compare_with_exact",
    "coupling_dense",
    "effective_coupling_analytic",
    "effective_coupling_path_sum",
    "enumerate_paths",
    "format_path_report",
    "power_law_exponent",
    "CalibrationResult",
    "TrajectoryRecord",
    "bare_state_in_levels",
    "calibrate_pi_pulse",
    "check_density_matrix",
    "evolve",
    "full_protocol",
    "ghz_fidelity",
    "lindblad_rhs",
    "ExperimentSpec",
    "parse_config",
    "render_config",
    "run",
]

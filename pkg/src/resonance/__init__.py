"""Classical simulator of probe-qubit resonant-transition spectroscopy.

A probe qubit with tunable gap omega is coupled weakly to a register
holding a Hermitian system Hamiltonian; sweeping omega and watching the
probe de-excite locates the system's eigenvalues as absorption peaks, and
post-selecting the evolved state prepares the matching eigenstates.
Everything is verified against direct diagonalization.
"""

__version__ = "0.1.0"

from .errors import (
    DarkTransitionError,
    DimensionLimitError,
    FitError,
    HeraldFailureError,
    HermiticityError,
    ModelFormatError,
    PeakLostError,
    RefinementError,
    ResonanceError,
    StepLimitError,
)
from .linalg import (
    EigenDecomposition,
    hermitian_eig,
    kron,
    kron_power,
    overlap,
    state_fidelity,
    unitary_exp,
)
from .model import (
    DEFAULT_COMPLEMENT_OFFSET,
    ReferenceState,
    SimulatorModel,
    SystemHamiltonian,
    TransitionOperator,
    basis_reference,
    build_hamiltonian,
    hadamard_transition,
    initial_state,
    split_hamiltonian,
    water_model,
    water_preset,
)
from .modelio import load_model, model_from_dict, model_to_dict, save_model
from .evolve import TrotterPlan, choose_steps, exact_propagator, trotter_propagator
from .spectroscopy import (
    Peak,
    RabiFit,
    RefinementTrace,
    SweepPlan,
    SweepResult,
    analytic_transition_probability,
    detect_peaks,
    fit_rabi,
    oracle_spectrum,
    probe_ground_probability,
    rabi_scan,
    refine_peak,
    run_sweep,
    transition_amplitudes,
)
from .prepare import (
    HeraldedState,
    chain_reference,
    eigenstate_fidelity,
    heralded_projection,
    prepare_eigenstate,
)

__all__ = [
    "__version__",
    "DarkTransitionError",
    "DimensionLimitError",
    "FitError",
    "HeraldFailureError",
    "HermiticityError",
    "ModelFormatError",
    "PeakLostError",
    "RefinementError",
    "ResonanceError",
    "StepLimitError",
    "EigenDecomposition",
    "hermitian_eig",
    "kron",
    "kron_power",
    "overlap",
    "state_fidelity",
    "unitary_exp",
    "DEFAULT_COMPLEMENT_OFFSET",
    "ReferenceState",
    "SimulatorModel",
    "SystemHamiltonian",
    "TransitionOperator",
    "basis_reference",
    "build_hamiltonian",
    "hadamard_transition",
    "initial_state",
    "split_hamiltonian",
    "water_model",
    "water_preset",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "save_model",
    "TrotterPlan",
    "choose_steps",
    "exact_propagator",
    "trotter_propagator",
    "Peak",
    "RabiFit",
    "RefinementTrace",
    "SweepPlan",
    "SweepResult",
    "analytic_transition_probability",
    "detect_peaks",
    "fit_rabi",
    "oracle_spectrum",
    "probe_ground_probability",
    "rabi_scan",
    "refine_peak",
    "run_sweep",
    "transition_amplitudes",
    "HeraldedState",
    "chain_reference",
    "eigenstate_fidelity",
    "heralded_projection",
    "prepare_eigenstate",
]

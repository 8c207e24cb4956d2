"""Heralded eigenstate preparation and chained sweeps.

On resonance the evolved simulator state is (up to irrelevant phases)

    sqrt(1 - P) |1>|0>|ref>  +  sqrt(P) |0>|1>|E_j>,

so post-selecting on probe = |0>, ancilla = |1> leaves the system qubits in
the target eigenstate.  Choosing tau* = pi / (2 c |d_j|) drives P to 1 and
makes the preparation effectively deterministic.  A prepared state can then
be fed back as the reference of a new model, whose sweeps measure energy
gaps from the prepared level instead of from the original anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DarkTransitionError, HeraldFailureError
from .evolve import SplitPropagator, TrotterPlan
from .linalg import hermitian_eig, normalize, state_fidelity
from .model import (
    ReferenceState,
    SimulatorModel,
    SystemHamiltonian,
    initial_state,
    split_hamiltonian,
)
from .spectroscopy import Peak, oracle_spectrum, transition_amplitudes

HERALD_FLOOR = 1e-12


@dataclass(frozen=True)
class HeraldedState:
    """System-qubit state post-selected on the probe/ancilla |01> sector."""

    psi_system: np.ndarray
    success_probability: float
    herald_sector: str = "01"
    source_omega: float | None = None
    source_tau: float | None = None


def heralded_projection(
    full_state,
    source_omega: float | None = None,
    source_tau: float | None = None,
) -> HeraldedState:
    """Project a (n+2)-qubit simulator state onto probe=0, ancilla=1.

    Returns the renormalized system-qubit state and the sector weight.
    Raises HeraldFailureError when the sector is (numerically) empty.
    """
    psi = np.asarray(full_state, dtype=complex).reshape(-1)
    dim = len(psi)
    n_sys_dim = dim // 4
    if dim < 8 or n_sys_dim * 4 != dim:
        raise ValueError(f"expected a state of dimension 4 * 2^n, got {dim}")
    # Bit layout: probe (MSB), ancilla, then n system qubits.
    sector = psi[n_sys_dim : 2 * n_sys_dim]
    weight = float(np.sum(np.abs(sector) ** 2))
    if weight < HERALD_FLOOR:
        raise HeraldFailureError(
            f"herald sector |01> carries probability {weight:.3e}; nothing to prepare"
        )
    return HeraldedState(
        psi_system=sector / math.sqrt(weight),
        success_probability=weight,
        source_omega=source_omega,
        source_tau=source_tau,
    )


def eigenstate_fidelity(state: HeraldedState, system: SystemHamiltonian, j: int) -> float:
    """|<E_j|psi>|^2 against the directly diagonalized eigenvector."""
    eig = oracle_spectrum(system)
    if not 0 <= j < eig.dim:
        raise ValueError(f"eigenstate index {j} out of range for dim {eig.dim}")
    return state_fidelity(eig.vectors[:, j], state.psi_system)


def prepare_eigenstate(
    model: SimulatorModel,
    peak: Peak,
    engine: str = "exact",
    trotter: TrotterPlan | None = None,
    trotter_target: float = 1e-6,
    tau: float | None = None,
) -> HeraldedState:
    """Drive the resonant transition at a detected peak and herald.

    Sets omega to the peak center, picks the oracle eigenstate nearest the
    peak's energy estimate, evolves for tau* = pi / (2 c |d_j|) (or a caller
    supplied tau, e.g. from a Rabi-scan fit) and projects onto the herald
    sector.  A refined peak (grid resolution at the 1e-3 level or better) is
    recommended; detuning costs success probability quadratically.
    """
    tuned = model.with_omega(peak.omega_center)
    eig = oracle_spectrum(model.system)
    j = int(np.argmin(np.abs(eig.values - peak.energy_estimate)))
    d_j = abs(transition_amplitudes(model.system, model.reference, model.transition)[j])
    if d_j < 1e-8:
        raise DarkTransitionError(
            f"transition to eigenstate {j} has amplitude |d|={d_j:.2e}; "
            f"this sweep operator cannot reach it (dark transition)"
        )
    if tau is None:
        tau = math.pi / (2.0 * model.coupling_c * d_j)

    h_static, h_int = split_hamiltonian(tuned)
    psi0 = initial_state(tuned)
    if engine == "exact":
        psi = hermitian_eig(h_static + h_int).propagate(tau, psi0)
    else:
        work = SplitPropagator(h_static, h_int)
        plan = trotter if trotter is not None else work.choose_steps(tau, trotter_target)
        psi = work.trotter(tau, plan) @ psi0
    return heralded_projection(psi, source_omega=peak.omega_center, source_tau=tau)


def chain_reference(state: HeraldedState, measured_energy: float) -> ReferenceState:
    """Turn a prepared state into the reference for a follow-up model.

    Sweeps against the new reference resolve gaps E_k - measured_energy, so
    levels that were dark from the original anchor can be reached in a
    second hop.  Note the prepared state's own level shows up as a response
    near omega = 0 whenever <psi|B|psi> != 0; exclude omega < 4c when
    detecting peaks in chained sweeps.
    """
    return ReferenceState(psi=normalize(state.psi_system), energy_e0=measured_energy)


def state_to_dict(
    state: HeraldedState,
    fidelity: float | None = None,
    target_j: int | None = None,
) -> dict:
    """JSON-ready dump; the amplitudes slot back into a model's reference."""
    return {
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.psi_system],
        "success_probability": float(state.success_probability),
        "herald_sector": state.herald_sector,
        "fidelity": None if fidelity is None else float(fidelity),
        "target_j": target_j,
        "omega": state.source_omega,
        "tau": state.source_tau,
    }

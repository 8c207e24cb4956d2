"""Composite simulator model: probe qubit + ancilla + system register.

The simulator Hamiltonian acts on probe (x) ancilla (x) n system qubits
(most-significant bit = probe) and reads

    H = -(omega/2) sz (x) I  +  I2 (x) H_R  +  c sx (x) sx (x) B

where the register part is block-diagonal over the ancilla,

    H_R = |0><0| (x) H_ref  +  |1><1| (x) H_S.

The ancilla-|0> block pins the reference state at energy E0; its orthogonal
complement is parked at E0 + complement_offset, far detuned from every
transition a sweep can probe, so those states never participate (see
``DEFAULT_COMPLEMENT_OFFSET``).  With sz|0> = +|0> the probe's excited
state |1> sits at +omega/2, so de-excitation releases omega into the
register and resonances appear at omega = E_j - E0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg
from .linalg import kron, kron_power, require_hermitian

# Energy offset of the unused ancilla-|0> complement relative to E0.  It must
# stay well outside [E0, E0 + omega_max] or the complement states pick up
# resonant leakage; keeping it only a few energy units away (rather than at
# some huge absolute energy) keeps split-step error constants small.  The
# default is safe for probe sweeps up to omega of roughly 4; widen it (and
# accept coarser step-count targets) for larger scan windows.
DEFAULT_COMPLEMENT_OFFSET = -4.0

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
I2 = np.eye(2, dtype=complex)

NORM_TOL = 1e-10


class CouplingWarning(UserWarning):
    """Probe-register coupling too strong relative to the level spacing."""


@dataclass(frozen=True)
class SystemHamiltonian:
    """The n-qubit physical Hamiltonian under study (energies in Hartree)."""

    n_qubits: int
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        m = require_hermitian(self.matrix, what=f"system Hamiltonian {self.label!r}")
        if m.shape[0] != 2**self.n_qubits:
            raise ValueError(
                f"system matrix is {m.shape[0]}-dimensional, expected 2^{self.n_qubits}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True)
class ReferenceState:
    """Known input state and its energy anchor E0."""

    psi: np.ndarray
    energy_e0: float

    def __post_init__(self):
        v = linalg.as_state(self.psi)
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ValueError(f"reference state norm {np.linalg.norm(v)} is not 1")
        object.__setattr__(self, "psi", v)

    @property
    def dim(self) -> int:
        return len(self.psi)


@dataclass(frozen=True)
class TransitionOperator:
    """Operator B whose matrix elements <E_j|B|ref> set transition strengths."""

    matrix_b: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "matrix_b", linalg.as_operator(self.matrix_b))

    @property
    def dim(self) -> int:
        return self.matrix_b.shape[0]

    def hermitian_part(self) -> np.ndarray:
        """B if already Hermitian, else (B + B†)/2 with a warning.

        The assembled Hamiltonian must be Hermitian, so a non-Hermitian B
        can only enter through its Hermitian part.
        """
        b = self.matrix_b
        defect, _, _ = linalg.hermiticity_defect(b)
        if defect <= linalg.HERMITICITY_TOL:
            return b
        warnings.warn(
            f"transition operator {self.label!r} is not Hermitian "
            f"(defect {defect:.2e}); using (B + B†)/2",
            UserWarning,
            stacklevel=2,
        )
        return (b + b.conj().T) / 2.0


@dataclass(frozen=True)
class SimulatorModel:
    """Everything needed to assemble the composite Hamiltonian."""

    system: SystemHamiltonian
    reference: ReferenceState
    transition: TransitionOperator
    omega: float
    coupling_c: float
    complement_offset: float = DEFAULT_COMPLEMENT_OFFSET
    label: str = field(default="")

    def __post_init__(self):
        if not self.coupling_c > 0:
            raise ValueError(f"coupling_c must be positive, got {self.coupling_c}")
        if self.omega < 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        d = self.system.dim
        if self.reference.dim != d:
            raise ValueError(
                f"reference state dim {self.reference.dim} != system dim {d}"
            )
        if self.transition.dim != d:
            raise ValueError(
                f"transition operator dim {self.transition.dim} != system dim {d}"
            )
        if not self.label:
            object.__setattr__(self, "label", self.system.label or "model")

    @property
    def total_dim(self) -> int:
        return 4 * self.system.dim

    def with_omega(self, omega: float) -> "SimulatorModel":
        return replace(self, omega=omega)

    def with_coupling(self, coupling_c: float) -> "SimulatorModel":
        return replace(self, coupling_c=coupling_c)


def water_preset(energy_e0: float = -84.20) -> SystemHamiltonian:
    """Two-qubit low-energy effective Hamiltonian of the water molecule.

    A 4x4 real symmetric matrix (Hartree) whose eigenvalues are
    -83.9731, -83.4010, -82.6604, -82.3763.  The ``energy_e0`` argument is
    accepted here only for symmetry with ``water_model``; the matrix itself
    does not depend on it.
    """
    m = np.array(
        [
            [-83.9566, -0.0820, 0.0458, 0.0594],
            [-0.0820, -83.4080, 0.0110, 0.0767],
            [0.0458, 0.0110, -82.5661, 0.1323],
            [0.0594, 0.0767, 0.1323, -82.4800],
        ]
    )
    return SystemHamiltonian(n_qubits=2, matrix=m, label="water")


def water_model(
    omega: float = 0.22,
    coupling_c: float = 0.006,
    energy_e0: float = -84.20,
) -> SimulatorModel:
    """The full water simulator model with its standard run parameters."""
    system = water_preset()
    return SimulatorModel(
        system=system,
        reference=basis_reference(2, 0, energy_e0),
        transition=hadamard_transition(2),
        omega=omega,
        coupling_c=coupling_c,
        label="water",
    )


def hadamard_transition(n_qubits: int) -> TransitionOperator:
    """Default transition operator: the n-fold Hadamard product.

    Unitary, Hermitian and involutory; maps any computational basis state to
    an equal-weight superposition over all basis states, so every eigenstate
    with nonzero overlap on that superposition is reachable in one sweep.
    """
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    return TransitionOperator(
        matrix_b=kron_power(HADAMARD, n_qubits), label=f"hadamard^{n_qubits}"
    )


def basis_reference(n_qubits: int, index: int, energy_e0: float) -> ReferenceState:
    """Computational basis state |index> with a given reference energy."""
    dim = 2**n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubit(s)")
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return ReferenceState(psi=psi, energy_e0=energy_e0)


def register_hamiltonian(model: SimulatorModel) -> np.ndarray:
    """The (n+1)-qubit register part H_R (ancilla block-diagonal)."""
    ref = model.reference
    proj = np.outer(ref.psi, ref.psi.conj())
    comp = np.eye(model.system.dim) - proj
    h_ref = ref.energy_e0 * proj + (ref.energy_e0 + model.complement_offset) * comp
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return kron(p0, h_ref) + kron(p1, model.system.matrix)


def split_hamiltonian(model: SimulatorModel) -> tuple[np.ndarray, np.ndarray]:
    """(static, interaction) parts of the composite Hamiltonian.

    The static part collects the probe term and H_R, which commute with each
    other; the interaction part is the probe-register coupling alone.  This
    is the natural partition for split-step propagators: only the coupling
    fails to commute with the rest.
    """
    n_register = model.system.n_qubits + 1
    probe = kron(-(model.omega / 2.0) * PAULI_Z, np.eye(2**n_register))
    static = probe + kron(I2, register_hamiltonian(model))
    b = model.transition.hermitian_part()
    interaction = model.coupling_c * kron(PAULI_X, kron(PAULI_X, b))
    return static, interaction


def build_hamiltonian(model: SimulatorModel) -> np.ndarray:
    """Assemble the full composite Hamiltonian (dimension 2^(n+2))."""
    static, interaction = split_hamiltonian(model)
    return static + interaction


def initial_state(model: SimulatorModel) -> np.ndarray:
    """Probe excited, ancilla |0>, system in the reference state."""
    probe_up = np.array([0.0, 1.0], dtype=complex)
    anc_down = np.array([1.0, 0.0], dtype=complex)
    psi = np.kron(probe_up, np.kron(anc_down, model.reference.psi))
    return linalg.normalize(psi)


def check_coupling_guardrail(system: SystemHamiltonian, coupling_c: float) -> None:
    """Warn when c is large enough to blur neighboring resonances.

    Off-resonant transitions are suppressed only while c is small compared
    to the level spacing; a tenth of the minimum gap is the documented
    comfort margin.  This is a warning, not an error: strong-coupling runs
    are legitimate for coarse first passes.
    """
    values = linalg.hermitian_eig(system.matrix).values
    if len(values) < 2:
        return
    gaps = np.diff(values)
    min_gap = float(np.min(gaps[gaps > 0])) if np.any(gaps > 0) else 0.0
    if min_gap > 0 and coupling_c >= min_gap / 10.0:
        warnings.warn(
            f"coupling c={coupling_c:g} is not small against the minimum level "
            f"spacing {min_gap:g}; expect broadened, possibly merged peaks",
            CouplingWarning,
            stacklevel=2,
        )

import warnings

import numpy as np
import pytest

from resonance import (
    ReferenceState,
    SimulatorModel,
    SystemHamiltonian,
    TransitionOperator,
    basis_reference,
    build_hamiltonian,
    hadamard_transition,
    initial_state,
    oracle_spectrum,
    split_hamiltonian,
    transition_amplitudes,
    water_model,
    water_preset,
)
from resonance.errors import HermiticityError
from resonance.model import CouplingWarning, check_coupling_guardrail

from conftest import E0, WATER_EIGENVALUES_PAPER


class TestWaterPreset:
    def test_printed_entries(self):
        m = water_preset().matrix
        assert m[0, 0] == -83.9566
        assert m[1, 1] == -83.4080
        assert m[2, 2] == -82.5661
        assert m[3, 3] == -82.4800
        assert m[0, 1] == -0.0820
        assert m[2, 3] == 0.1323
        assert m[2, 3] == m[3, 2]

    def test_symmetric(self):
        m = water_preset().matrix
        assert np.array_equal(m, m.T)

    def test_eigenvalues(self):
        eig = oracle_spectrum(water_preset())
        assert np.abs(eig.values - WATER_EIGENVALUES_PAPER).max() <= 1e-4


class TestHadamardTransition:
    def test_single_qubit_matrix(self):
        b = hadamard_transition(1).matrix_b
        s = 1 / np.sqrt(2)
        assert np.allclose(b, [[s, s], [s, -s]])

    def test_two_qubit_uniform_superposition(self):
        b = hadamard_transition(2).matrix_b
        psi = b @ np.array([1, 0, 0, 0], dtype=complex)
        assert np.allclose(psi, 0.5 * np.ones(4))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_involution(self, n):
        b = hadamard_transition(n).matrix_b
        assert np.abs(b @ b - np.eye(2**n)).max() <= 1e-12


class TestBasisReference:
    def test_paper_reference(self):
        ref = basis_reference(2, 0, -84.20)
        assert np.array_equal(ref.psi, [1, 0, 0, 0])
        assert ref.energy_e0 == -84.20

    def test_single_qubit_excited(self):
        assert np.array_equal(basis_reference(1, 1, 0.0).psi, [0, 1])

    def test_orthogonal_choice(self):
        a = basis_reference(2, 0, -84.20)
        b = basis_reference(2, 3, -84.20)
        assert np.vdot(a.psi, b.psi) == 0

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            basis_reference(2, 4, 0.0)


def _hand_built_water_hamiltonian(omega, c, e0, offset):
    """Independent assembly: loop over basis states and energy rules.

    Basis index = 8*probe + 4*ancilla + system (probe is the MSB).  The
    probe contributes -omega/2 for |0> and +omega/2 for |1>; ancilla |0>
    carries the reference projector block, ancilla |1> the system matrix;
    the coupling flips probe and ancilla while applying B to the system
    qubits.
    """
    hs = water_preset().matrix
    b = hadamard_transition(2).matrix_b
    h = np.zeros((16, 16), dtype=complex)
    for probe in (0, 1):
        sign = -1.0 if probe == 0 else 1.0
        for anc in (0, 1):
            base = 8 * probe + 4 * anc
            for s1 in range(4):
                h[base + s1, base + s1] += sign * omega / 2.0
                if anc == 1:
                    for s2 in range(4):
                        h[base + s1, base + s2] += hs[s1, s2]
                else:
                    h[base + s1, base + s1] += e0 + offset
            if anc == 0:
                h[base + 0, base + 0] += -offset  # reference |00> sits at e0
    for probe in (0, 1):
        for anc in (0, 1):
            row = 8 * (1 - probe) + 4 * (1 - anc)
            col = 8 * probe + 4 * anc
            for s1 in range(4):
                for s2 in range(4):
                    h[row + s1, col + s2] += c * b[s1, s2]
    return h


class TestBuildHamiltonian:
    def test_matches_independent_assembly(self, water):
        got = build_hamiltonian(water)
        want = _hand_built_water_hamiltonian(
            water.omega, water.coupling_c, E0, water.complement_offset
        )
        assert np.abs(got - want).max() <= 1e-12

    def test_probe_excited_diagonal_element(self, water):
        # <1,0,00| H |1,0,00> = +omega/2 + E0: the excited probe sits at
        # +omega/2 so that de-excitation can pay for a register excitation.
        h = build_hamiltonian(water)
        assert h[8, 8] == pytest.approx(water.omega / 2.0 + E0, abs=1e-12)

    def test_hermitian_and_dimension(self, water):
        h = build_hamiltonian(water)
        assert h.shape == (16, 16)
        assert np.abs(h - h.conj().T).max() <= 1e-10

    def test_coupling_elements_are_c_times_d(self, water, water_oracle):
        h = build_hamiltonian(water)
        d = transition_amplitudes(water.system, water.reference, water.transition)
        for j in range(4):
            bra = np.zeros(16, dtype=complex)
            bra[4:8] = water_oracle.vectors[:, j]  # probe 0, ancilla 1
            ket = np.zeros(16, dtype=complex)
            ket[8:12] = water.reference.psi  # probe 1, ancilla 0
            elem = np.vdot(bra, h @ ket)
            assert abs(elem - water.coupling_c * d[j]) <= 1e-12

    def test_decoupled_limit_block_structure(self, water):
        # with the coupling removed, |10> and |01> probe/ancilla sectors
        # must not talk to each other at all
        static, interaction = split_hamiltonian(water)
        assert np.abs(static[8:12, 4:8]).max() == 0.0
        assert np.abs(static[4:8, 8:12]).max() == 0.0
        # and the coupling term is the only bridge
        assert np.abs(interaction[8:12, 4:8] - water.coupling_c *
                      hadamard_transition(2).matrix_b).max() <= 1e-12

    def test_diagonal_system_with_zero_coupling_is_diagonal(self):
        sys_h = SystemHamiltonian(n_qubits=1, matrix=np.diag([0.0, 1.0]))
        model = SimulatorModel(
            system=sys_h,
            reference=basis_reference(1, 0, -0.5),
            transition=TransitionOperator(matrix_b=np.diag([1.0, -1.0])),
            omega=0.3,
            coupling_c=1e-30,
        )
        h = build_hamiltonian(model)
        off = h - np.diag(np.diagonal(h))
        assert np.abs(off).max() <= 1e-25

    def test_shift_covariance_of_matrix(self, water):
        s = 0.75
        shifted_sys = SystemHamiltonian(
            n_qubits=2, matrix=water.system.matrix + s * np.eye(4), label="water+s"
        )
        shifted = SimulatorModel(
            system=shifted_sys,
            reference=ReferenceState(psi=water.reference.psi, energy_e0=E0 + s),
            transition=water.transition,
            omega=water.omega,
            coupling_c=water.coupling_c,
        )
        h0 = build_hamiltonian(water)
        h1 = build_hamiltonian(shifted)
        assert np.abs(h1 - (h0 + s * np.eye(16))).max() <= 1e-10

    def test_non_hermitian_system_rejected(self):
        bad = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(HermiticityError):
            SystemHamiltonian(n_qubits=1, matrix=bad)

    def test_non_hermitian_transition_symmetrized_with_warning(self):
        b = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        op = TransitionOperator(matrix_b=b, label="raising")
        with pytest.warns(UserWarning, match="not Hermitian"):
            sym = op.hermitian_part()
        assert np.allclose(sym, (b + b.conj().T) / 2)


class TestInitialState:
    def test_water_index_eight(self, water):
        psi = initial_state(water)
        assert psi[8] == 1.0
        assert np.count_nonzero(psi) == 1

    def test_bit_layout_single_system_qubit(self):
        model = SimulatorModel(
            system=SystemHamiltonian(n_qubits=1, matrix=np.diag([0.0, 1.0])),
            reference=basis_reference(1, 1, 0.0),
            transition=hadamard_transition(1),
            omega=0.5,
            coupling_c=0.01,
        )
        psi = initial_state(model)
        assert psi[0b101] == 1.0

    def test_normalized(self, water):
        assert abs(np.linalg.norm(initial_state(water)) - 1.0) <= 1e-12


def test_coupling_guardrail_warns_on_strong_coupling(water):
    with pytest.warns(CouplingWarning):
        check_coupling_guardrail(water.system, 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        check_coupling_guardrail(water.system, 0.006)

import numpy as np
import pytest

from resonance import (
    SimulatorModel,
    SweepPlan,
    SystemHamiltonian,
    TransitionOperator,
    TrotterPlan,
    analytic_transition_probability,
    basis_reference,
    detect_peaks,
    fit_rabi,
    hadamard_transition,
    oracle_spectrum,
    probe_ground_probability,
    rabi_scan,
    refine_peak,
    run_sweep,
    transition_amplitudes,
)
from resonance.errors import FitError
from resonance.spectroscopy import Peak, SweepResult

from conftest import E0, PAPER_C, PAPER_TAU, random_hermitian


@pytest.fixture(scope="module")
def toy():
    """One system qubit; cheap enough for dense parameter scans."""
    system = SystemHamiltonian(
        n_qubits=1, matrix=np.array([[0.0, 0.3], [0.3, 1.0]]), label="toy"
    )
    return SimulatorModel(
        system=system,
        reference=basis_reference(1, 0, -0.2),
        transition=hadamard_transition(1),
        omega=0.0,
        coupling_c=0.01,
    )


class TestProbeGroundProbability:
    def test_decoupled_probe_stays_excited(self, water):
        p = probe_ground_probability(water.with_coupling(1e-30), 1000.0)
        assert p <= 1e-12

    def test_zero_time(self, water):
        assert probe_ground_probability(water, 0.0) <= 1e-30

    def test_water_at_grid_resonance(self, paper_sweep):
        # omega = 0.22 is the grid point nearest the lowest transition; the
        # hardware run measured 0.4531 there
        p = float(paper_sweep.probabilities[11])
        assert abs(paper_sweep.omegas[11] - 0.22) < 1e-12
        assert abs(p - 0.4531) <= 0.05

    def test_matches_two_level_formula_at_grid_resonance(self, water, paper_sweep):
        p_full = float(paper_sweep.probabilities[11])
        p_two_level = analytic_transition_probability(
            water.system, water.reference, water.transition,
            omega=0.22, coupling_c=PAPER_C, tau=PAPER_TAU, j=0,
        )
        assert abs(p_full - p_two_level) <= 0.01

    def test_matches_two_level_formula_on_resonance(self, water, water_oracle):
        omega_1 = float(water_oracle.values[0] - E0)
        p_full = probe_ground_probability(water.with_omega(omega_1), PAPER_TAU)
        p_two_level = analytic_transition_probability(
            water.system, water.reference, water.transition,
            omega=omega_1, coupling_c=PAPER_C, tau=PAPER_TAU, j=0,
        )
        assert abs(p_full - p_two_level) <= 5e-4

    def test_trotter_engine_agrees_with_exact(self, toy):
        model = toy.with_omega(0.43)
        exact = probe_ground_probability(model, 200.0)
        split = probe_ground_probability(
            model, 200.0, engine="trotter", trotter=TrotterPlan(order=2, steps_m=4096)
        )
        assert abs(exact - split) <= 1e-6


class TestAnalyticTransitionProbability:
    def test_on_resonance_reduces_to_sin_squared(self, water, water_oracle):
        d = transition_amplitudes(water.system, water.reference, water.transition)
        for j in range(4):
            omega_j = water_oracle.values[j] - E0
            got = analytic_transition_probability(
                water.system, water.reference, water.transition,
                omega=omega_j, coupling_c=PAPER_C, tau=PAPER_TAU, j=j,
            )
            want = np.sin(PAPER_C * abs(d[j]) * PAPER_TAU) ** 2
            assert abs(got - want) <= 1e-12

    def test_dark_transition_is_flat_zero(self):
        system = SystemHamiltonian(n_qubits=1, matrix=np.diag([0.0, 1.0]))
        reference = basis_reference(1, 0, -0.1)
        identity_b = hadamard_transition(1)
        # sigma_z transition operator: <1|B|0> = 0, so j=1 is dark
        dark_b = TransitionOperator(matrix_b=np.diag([1.0, -1.0]))
        for omega in (0.0, 0.5, 1.1):
            for tau in (10.0, 500.0):
                p = analytic_transition_probability(
                    system, reference, dark_b, omega, 0.01, tau, j=1
                )
                assert p == 0.0
        # sanity: the hadamard operator does reach it
        assert analytic_transition_probability(
            system, reference, identity_b, 1.1, 0.01, 500.0, j=1
        ) > 0.0

    def test_index_out_of_range(self, water):
        with pytest.raises(ValueError):
            analytic_transition_probability(
                water.system, water.reference, water.transition, 0.2, PAPER_C, 10.0, j=4
            )


class TestRunSweep:
    def test_paper_parameters_show_four_peaks(self, paper_peaks):
        assert len(paper_peaks) == 4

    def test_off_resonance_point_is_quiet(self, paper_sweep):
        k = int(np.argmin(np.abs(paper_sweep.omegas - 1.80)))
        assert paper_sweep.probabilities[k] < 0.02

    def test_probabilities_in_range(self, paper_sweep):
        assert paper_sweep.probabilities.min() >= 0.0
        assert paper_sweep.probabilities.max() <= 1.0 + 1e-9

    def test_deterministic_rerun(self, water, paper_plan, paper_sweep):
        again = run_sweep(water, paper_plan)
        assert np.array_equal(again.probabilities, paper_sweep.probabilities)
        assert np.array_equal(again.omegas, paper_sweep.omegas)

    def test_shift_invariance(self, toy):
        plan = SweepPlan(
            omega_min=0.05, omega_max=1.5, n_points=16, tau=60.0, coupling_c=0.02
        )
        base = run_sweep(toy, plan)
        s = 3.7
        shifted = SimulatorModel(
            system=SystemHamiltonian(
                n_qubits=1, matrix=toy.system.matrix + s * np.eye(2)
            ),
            reference=basis_reference(1, 0, toy.reference.energy_e0 + s),
            transition=toy.transition,
            omega=toy.omega,
            coupling_c=toy.coupling_c,
        )
        moved = run_sweep(shifted, plan)
        assert np.abs(moved.probabilities - base.probabilities).max() <= 1e-9


class TestDetectPeaks:
    def test_flat_input_gives_nothing(self, paper_plan):
        flat = SweepResult(
            omegas=np.linspace(0, 2, 101),
            probabilities=np.zeros(101),
            plan=paper_plan,
            model_label="flat",
            reference_energy=0.0,
        )
        assert detect_peaks(flat, threshold=0.1) == []

    def test_recovers_center_of_analytic_profile(self, toy, water_oracle):
        # sample the two-level line shape itself and ask for its center back
        eig = oracle_spectrum(toy.system)
        gap = eig.values[1] - toy.reference.energy_e0
        c = 0.01
        d = abs(transition_amplitudes(toy.system, toy.reference, toy.transition)[1])
        tau = np.pi / (2 * c * d)  # bright center
        plan = SweepPlan(
            omega_min=gap - 0.25, omega_max=gap + 0.25, n_points=51,
            tau=tau, coupling_c=c,
        )
        omegas = plan.omegas()
        probs = np.array([
            analytic_transition_probability(
                toy.system, toy.reference, toy.transition, w, c, tau, j=1
            )
            for w in omegas
        ])
        synthetic = SweepResult(
            omegas=omegas, probabilities=probs, plan=plan,
            model_label="synthetic", reference_energy=toy.reference.energy_e0,
        )
        peaks = detect_peaks(synthetic, threshold=0.5)
        assert len(peaks) == 1
        assert abs(peaks[0].omega_center - gap) <= plan.grid_step / 4

    def test_threshold_validation(self, paper_sweep):
        with pytest.raises(ValueError):
            detect_peaks(paper_sweep, threshold=0.0)

    def test_min_omega_drops_low_frequency_response(self, paper_sweep):
        kept = detect_peaks(paper_sweep, threshold=0.1, min_omega=1.0)
        assert all(p.omega_center >= 1.0 for p in kept)
        assert len(kept) == 2


class TestRefinePeak:
    def test_already_converged_peak_is_returned_unchanged(self, water):
        peak = Peak(
            omega_center=0.2269, p_max=0.4, width_estimate=0.001,
            energy_estimate=E0 + 0.2269, grid_resolution=5e-5,
        )
        trace = refine_peak(water, peak, 1e-4, tau=PAPER_TAU)
        assert trace.peak == peak
        assert trace.rounds == ()
        assert trace.total_evaluations == 0

    def test_refines_toy_peak_to_oracle(self, toy):
        eig = oracle_spectrum(toy.system)
        gap = eig.values[0] - toy.reference.energy_e0
        plan = SweepPlan(
            omega_min=max(gap - 0.2, 0.01), omega_max=gap + 0.2, n_points=21,
            tau=150.0, coupling_c=0.01,
        )
        result = run_sweep(toy, plan)
        peaks = detect_peaks(result, threshold=0.1)
        assert len(peaks) == 1
        trace = refine_peak(
            toy.with_coupling(0.01), peaks[0], 1e-3, tau=150.0
        )
        assert trace.peak.grid_resolution <= 1e-3
        assert abs(trace.peak.energy_estimate - eig.values[0]) <= 1e-3
        assert trace.total_evaluations == sum(r.n_evaluations for r in trace.rounds)


class TestRabi:
    def test_zero_time_zero_probability(self, toy):
        samples = rabi_scan(toy.with_omega(0.4), [0.0])
        assert samples[0, 1] <= 1e-30

    def test_on_resonance_oscillation_and_fit(self, toy):
        eig = oracle_spectrum(toy.system)
        gap = eig.values[0] - toy.reference.energy_e0
        c = 0.01
        d = abs(transition_amplitudes(toy.system, toy.reference, toy.transition)[0])
        period = np.pi / (c * d)
        model = toy.with_omega(gap).with_coupling(c)
        taus = np.linspace(0.0, 2.2 * period, 64)
        samples = rabi_scan(model, taus)
        # maximum transfer at tau* = period / 2, back near zero at the period
        k_star = int(np.argmin(np.abs(taus - period / 2)))
        k_full = int(np.argmin(np.abs(taus - period)))
        assert samples[k_star, 1] >= 0.95
        assert samples[k_full, 1] <= 0.05
        fit = fit_rabi(samples[:, 0], samples[:, 1])
        assert abs(fit.period - period) / period <= 0.02
        assert abs(fit.rabi_rate - c * d) / (c * d) <= 0.02

    def test_flat_signal_raises(self):
        with pytest.raises(FitError):
            fit_rabi(np.linspace(0, 10, 32), np.zeros(32))


def test_oracle_spectrum_diagonal_sorted():
    system = SystemHamiltonian(n_qubits=1, matrix=np.diag([2.0, -1.0]))
    eig = oracle_spectrum(system)
    assert np.allclose(eig.values, [-1.0, 2.0])


def test_water_transition_amplitudes_brute_force(water, water_oracle):
    """d_j from explicit inner products, frozen against an outside solver."""
    from resonance import overlap

    b_psi = water.transition.matrix_b @ water.reference.psi
    d = np.array([
        overlap(water_oracle.vectors[:, j], b_psi) for j in range(4)
    ])
    assert np.allclose(
        np.abs(d), [0.53180603, 0.38330395, 0.09660213, 0.74895157], atol=1e-6
    )
    assert abs(np.sum(np.abs(d) ** 2) - 1.0) <= 1e-10
    # helper agrees with the explicit computation
    helper = transition_amplitudes(water.system, water.reference, water.transition)
    assert np.allclose(helper, d, atol=1e-12)


def test_oracle_spectrum_reconstructs_random_system(rng):
    m = random_hermitian(rng, 8)
    system = SystemHamiltonian(n_qubits=3, matrix=m)
    eig = oracle_spectrum(system)
    rebuilt = (eig.vectors * eig.values) @ eig.vectors.conj().T
    assert np.linalg.norm(rebuilt - m) / np.linalg.norm(m) <= 1e-9

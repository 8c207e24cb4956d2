"""Probe-frequency sweeps, peak detection and refinement, Rabi scans.

The measurement protocol: prepare the probe excited and the register in the
reference state, evolve under the composite Hamiltonian for a time tau at
probe gap omega, then read the probability of finding the probe in |0>.
Peaks of that probability as a function of omega sit at omega = E_j - E0,
so each detected peak measures one eigenvalue E_j = E0 + omega_peak.

The two-level prediction for a single transition j is

    P_j(omega) = (2 c |d_j|)^2 / Omega^2 * sin^2(Omega tau / 2),
    Omega      = sqrt((2 c |d_j|)^2 + (E_j - E0 - omega)^2),
    d_j        = <E_j| B |ref>,

exact in the limit of vanishing coupling; the full state-vector simulation
is the ground truth it is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .errors import FitError, PeakLostError, RefinementError
from .evolve import SplitPropagator, TrotterPlan
from .linalg import EigenDecomposition, hermitian_eig
from .model import (
    ReferenceState,
    SimulatorModel,
    SystemHamiltonian,
    TransitionOperator,
    initial_state,
    split_hamiltonian,
)

DEFAULT_PEAK_THRESHOLD = 0.1
DEFAULT_REFINE_THRESHOLD = 0.05
DEFAULT_TROTTER_TARGET = 1e-6


@dataclass(frozen=True)
class SweepPlan:
    """Frequency grid and run parameters for one sweep."""

    omega_min: float
    omega_max: float
    n_points: int
    tau: float
    coupling_c: float
    engine: str = "exact"
    trotter: TrotterPlan | None = None
    trotter_target: float = DEFAULT_TROTTER_TARGET

    def __post_init__(self):
        if not self.omega_min < self.omega_max:
            raise ValueError(
                f"omega_min must be below omega_max, got [{self.omega_min}, {self.omega_max}]"
            )
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not self.coupling_c > 0:
            raise ValueError(f"coupling_c must be positive, got {self.coupling_c}")
        if self.engine not in ("exact", "trotter"):
            raise ValueError(f"engine must be 'exact' or 'trotter', got {self.engine!r}")

    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    @property
    def grid_step(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)


@dataclass(frozen=True)
class SweepResult:
    """Sampled probe de-excitation probability P(omega)."""

    omegas: np.ndarray
    probabilities: np.ndarray
    plan: SweepPlan
    model_label: str
    reference_energy: float

    def __post_init__(self):
        if len(self.omegas) != len(self.probabilities):
            raise ValueError("omegas and probabilities length mismatch")


@dataclass(frozen=True)
class Peak:
    """One detected resonance."""

    omega_center: float
    p_max: float
    width_estimate: float
    energy_estimate: float
    grid_resolution: float


@dataclass(frozen=True)
class RefinementRound:
    coupling_c: float
    tau: float
    grid_step: float
    window: tuple[float, float]
    center: float
    p_max: float
    n_evaluations: int


@dataclass(frozen=True)
class RefinementTrace:
    peak: Peak
    rounds: tuple[RefinementRound, ...] = field(default_factory=tuple)

    @property
    def total_evaluations(self) -> int:
        return sum(r.n_evaluations for r in self.rounds)


def _propagate(model: SimulatorModel, tau: float, engine: str,
               trotter: TrotterPlan | None, trotter_target: float,
               psi0: np.ndarray) -> np.ndarray:
    h_static, h_int = split_hamiltonian(model)
    if engine == "exact":
        return hermitian_eig(h_static + h_int).propagate(tau, psi0)
    work = SplitPropagator(h_static, h_int)
    plan = trotter if trotter is not None else work.choose_steps(tau, trotter_target)
    return work.trotter(tau, plan) @ psi0


def probe_ground_probability(
    model: SimulatorModel,
    tau: float,
    engine: str = "exact",
    trotter: TrotterPlan | None = None,
    trotter_target: float = DEFAULT_TROTTER_TARGET,
) -> float:
    """Probability of the probe qubit in |0> after evolving for tau.

    The probe is the most significant qubit, so this sums |amplitude|^2 over
    the lower half of the state vector.
    """
    psi0 = initial_state(model)
    psi = _propagate(model, tau, engine, trotter, trotter_target, psi0)
    half = len(psi) // 2
    return float(np.sum(np.abs(psi[:half]) ** 2))


def oracle_spectrum(system: SystemHamiltonian) -> EigenDecomposition:
    """Direct diagonalization of the system Hamiltonian (the ground truth)."""
    return hermitian_eig(system.matrix)


def transition_amplitudes(
    system: SystemHamiltonian,
    reference: ReferenceState,
    transition: TransitionOperator,
) -> np.ndarray:
    """d_j = <E_j| B |ref> for every oracle eigenstate, as a complex vector.

    Uses the Hermitian part of B, matching what the Hamiltonian builder
    couples into the simulator.
    """
    eig = oracle_spectrum(system)
    return eig.vectors.conj().T @ (transition.hermitian_part() @ reference.psi)


def analytic_transition_probability(
    system: SystemHamiltonian,
    reference: ReferenceState,
    transition: TransitionOperator,
    omega: float,
    coupling_c: float,
    tau: float,
    j: int,
) -> float:
    """Two-level (rotating-frame) prediction for transition j (0-based)."""
    eig = oracle_spectrum(system)
    if not 0 <= j < eig.dim:
        raise ValueError(f"eigenstate index {j} out of range for dim {eig.dim}")
    d_j = abs(transition_amplitudes(system, reference, transition)[j])
    if d_j == 0.0:
        return 0.0
    rabi = 2.0 * coupling_c * d_j
    detuning = eig.values[j] - reference.energy_e0 - omega
    big_omega = np.hypot(rabi, detuning)
    return float((rabi / big_omega) ** 2 * np.sin(big_omega * tau / 2.0) ** 2)


def run_sweep(model: SimulatorModel, plan: SweepPlan) -> SweepResult:
    """Evaluate P(omega) on the plan's grid.

    The model's own omega is ignored (each grid point sets its own) and its
    coupling is superseded by ``plan.coupling_c``.  Points are independent;
    they are evaluated in ascending omega order and the result is
    deterministic.
    """
    base = model.with_coupling(plan.coupling_c)
    omegas = plan.omegas()
    probs = np.empty_like(omegas)
    for k, w in enumerate(omegas):
        try:
            probs[k] = probe_ground_probability(
                base.with_omega(float(w)), plan.tau, plan.engine,
                plan.trotter, plan.trotter_target,
            )
        except Exception as exc:
            raise type(exc)(f"sweep aborted at omega={w:.9g}: {exc}") from exc
    return SweepResult(
        omegas=omegas,
        probabilities=probs,
        plan=plan,
        model_label=model.label,
        reference_energy=model.reference.energy_e0,
    )


def _half_max_width(omegas: np.ndarray, probs: np.ndarray, i: int, dw: float) -> float:
    """FWHM estimate around grid index i via linear interpolation."""
    half = probs[i] / 2.0
    li = i
    while li > 0 and probs[li] > half:
        li -= 1
    ri = i
    while ri < len(probs) - 1 and probs[ri] > half:
        ri += 1
    if probs[li] <= half < probs[li + 1]:
        left = omegas[li] + (half - probs[li]) / (probs[li + 1] - probs[li]) * dw
    else:
        left = omegas[li]
    if probs[ri] <= half < probs[ri - 1]:
        right = omegas[ri - 1] + (probs[ri - 1] - half) / (probs[ri - 1] - probs[ri]) * dw
    else:
        right = omegas[ri]
    return max(float(right - left), dw)


def detect_peaks(
    result: SweepResult,
    threshold: float = DEFAULT_PEAK_THRESHOLD,
    min_omega: float = 0.0,
) -> list[Peak]:
    """Local maxima of P(omega) at or above threshold.

    Centers are refined by three-point parabolic interpolation around the
    grid maximum; ``min_omega`` drops the near-zero self-response that
    appears when the reference state is itself close to an eigenstate
    (chained runs typically pass 4c here).
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    omegas = result.omegas
    probs = result.probabilities
    dw = result.plan.grid_step
    peaks: list[Peak] = []
    for i in range(1, len(omegas) - 1):
        if probs[i] < threshold or omegas[i] < min_omega:
            continue
        if not (probs[i] > probs[i - 1] and probs[i] >= probs[i + 1]):
            continue
        y0, y1, y2 = probs[i - 1], probs[i], probs[i + 1]
        denom = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom < 0 else 0.0
        shift = min(0.5, max(-0.5, shift))
        center = float(omegas[i] + shift * dw)
        peaks.append(
            Peak(
                omega_center=center,
                p_max=float(y1),
                width_estimate=_half_max_width(omegas, probs, i, dw),
                energy_estimate=result.reference_energy + center,
                grid_resolution=dw,
            )
        )
    return peaks


def refine_peak(
    model: SimulatorModel,
    peak: Peak,
    target_eps: float,
    *,
    tau: float,
    threshold: float = DEFAULT_REFINE_THRESHOLD,
    engine: str = "exact",
    trotter_target: float = DEFAULT_TROTTER_TARGET,
    max_rounds: int = 48,
) -> RefinementTrace:
    """Iteratively re-sweep around a peak until its center is pinned to eps.

    Each round halves the grid step and re-sweeps a window of +/- 4 widths
    around the current center.  The coupling is halved too (with tau doubled
    so c*tau, and with it the on-resonance response, stays fixed) - but only
    on rounds where the previous sweep actually resolved the line, otherwise
    a transition much narrower than the grid would shrink away before the
    grid catches up with it.  Iteration stops once the grid step is at most
    ``target_eps`` and the center has stopped moving at the eps/4 level,
    which pins the residual linewidth bias below eps as well.
    """
    if not target_eps > 0:
        raise ValueError(f"target_eps must be positive, got {target_eps}")
    if peak.grid_resolution <= target_eps:
        return RefinementTrace(peak=peak, rounds=())

    center = peak.omega_center
    width = peak.width_estimate
    spacing = peak.grid_resolution
    coupling = model.coupling_c
    tau_now = tau
    rounds: list[RefinementRound] = []

    for _ in range(max_rounds):
        resolved = width >= 2.0 * spacing
        spacing /= 2.0
        if resolved:
            coupling /= 2.0
            tau_now *= 2.0
        halfwin = 4.0 * max(width, 2.0 * spacing)
        n_side = int(np.ceil(halfwin / spacing))
        grid = center + spacing * np.arange(-n_side, n_side + 1)
        grid = grid[grid >= 0.0]  # the probe gap cannot go negative
        if len(grid) < 5:
            raise PeakLostError(
                f"refinement window around {center:.9g} collapsed at the omega=0 edge",
                window=(0.0, float(center + halfwin)),
            )
        window = (float(grid[0]), float(grid[-1]))
        local_plan = SweepPlan(
            omega_min=window[0],
            omega_max=window[1],
            n_points=len(grid),
            tau=tau_now,
            coupling_c=coupling,
            engine=engine,
            trotter_target=trotter_target,
        )
        local = run_sweep(model, local_plan)
        candidates = detect_peaks(local, threshold=threshold)
        if not candidates:
            raise PeakLostError(
                f"no local maximum above {threshold} in window "
                f"[{window[0]:.9g}, {window[1]:.9g}] at grid step {spacing:.3g}",
                window=window,
            )
        near = [p for p in candidates if abs(p.omega_center - center) <= 2.0 * width]
        pool = near if near else candidates
        best = max(pool, key=lambda p: p.p_max)
        move = abs(best.omega_center - center)
        center = best.omega_center
        width = best.width_estimate
        rounds.append(
            RefinementRound(
                coupling_c=coupling,
                tau=tau_now,
                grid_step=spacing,
                window=window,
                center=center,
                p_max=best.p_max,
                n_evaluations=len(grid),
            )
        )
        if spacing <= target_eps and move <= target_eps / 4.0:
            refined = Peak(
                omega_center=center,
                p_max=best.p_max,
                width_estimate=width,
                energy_estimate=model.reference.energy_e0 + center,
                grid_resolution=spacing,
            )
            return RefinementTrace(peak=refined, rounds=tuple(rounds))

    raise RefinementError(
        f"refinement did not converge to eps={target_eps:g} within {max_rounds} rounds"
    )


def rabi_scan(
    model: SimulatorModel,
    tau_grid,
    engine: str = "exact",
    trotter: TrotterPlan | None = None,
    trotter_target: float = DEFAULT_TROTTER_TARGET,
) -> np.ndarray:
    """P(tau) at the model's fixed omega; returns an (n, 2) array of (tau, p).

    With the exact engine the Hamiltonian is diagonalized once and each time
    point is a phase application.
    """
    taus = np.asarray(tau_grid, dtype=float).reshape(-1)
    psi0 = initial_state(model)
    half = model.total_dim // 2
    out = np.empty((len(taus), 2))
    out[:, 0] = taus
    if engine == "exact":
        h_static, h_int = split_hamiltonian(model)
        eig = hermitian_eig(h_static + h_int)
        for k, t in enumerate(taus):
            psi = eig.propagate(float(t), psi0)
            out[k, 1] = np.sum(np.abs(psi[:half]) ** 2)
    else:
        for k, t in enumerate(taus):
            out[k, 1] = probe_ground_probability(
                model, float(t), engine, trotter, trotter_target
            )
    return out


@dataclass(frozen=True)
class RabiFit:
    """Least-squares fit of P(tau) = amplitude * sin^2(pi tau / period)."""

    period: float
    amplitude: float

    @property
    def rabi_rate(self) -> float:
        """The fitted c|d_j| (the on-resonance half Rabi frequency)."""
        return float(np.pi / self.period)


def fit_rabi(taus, probs) -> RabiFit:
    """Fit a sin^2 oscillation to a uniformly sampled Rabi scan."""
    t = np.asarray(taus, dtype=float).reshape(-1)
    p = np.asarray(probs, dtype=float).reshape(-1)
    if len(t) != len(p) or len(t) < 8:
        raise FitError("rabi fit needs at least 8 samples")
    span = p.max() - p.min()
    if span < 1e-6:
        raise FitError(f"signal is flat (range {span:.2e}); nothing to fit")

    # sin^2 oscillates at frequency 1/period; seed the fit from the FFT.
    dt = t[1] - t[0]
    spectrum = np.abs(np.fft.rfft(p - p.mean()))
    freqs = np.fft.rfftfreq(len(p), dt)
    k = int(np.argmax(spectrum[1:])) + 1
    period0 = 1.0 / freqs[k]

    def model_fn(x, amplitude, period):
        return amplitude * np.sin(np.pi * x / period) ** 2

    try:
        popt, _ = curve_fit(
            model_fn, t, p,
            p0=[min(max(p.max(), 1e-3), 1.0), period0],
            bounds=([0.0, dt], [1.5, np.inf]),
            maxfev=10000,
        )
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"rabi fit failed: {exc}") from exc
    amplitude, period = popt
    residual = float(np.sqrt(np.mean((model_fn(t, *popt) - p) ** 2)))
    if residual > 0.2:
        raise FitError(f"rabi fit residual {residual:.3f} too large for a sin^2 profile")
    return RabiFit(period=float(period), amplitude=float(amplitude))

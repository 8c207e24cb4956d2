"""Matplotlib figures for sweep, Rabi and refinement reports.

Figures are rendered straight to files (Agg backend, no display); each CLI
report command drops one next to its delimited output unless asked not to.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .spectroscopy import Peak, RabiFit, RefinementTrace, SweepResult  # noqa: E402

DPI = 150


def plot_sweep(result: SweepResult, peaks: list[Peak] | None, path, threshold: float | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(result.omegas, result.probabilities, lw=1.2, color="tab:blue")
    if threshold is not None:
        ax.axhline(threshold, color="0.6", ls=":", lw=0.8, label="threshold")
    if peaks:
        ax.plot(
            [p.omega_center for p in peaks],
            [p.p_max for p in peaks],
            "v", color="tab:red", ms=7,
            label="peaks",
        )
        for p in peaks:
            ax.annotate(
                f"{p.energy_estimate:.4f}",
                (p.omega_center, p.p_max),
                textcoords="offset points", xytext=(0, 8),
                ha="center", fontsize=8,
            )
    ax.set_xlabel(r"probe gap $\omega$ (Hartree)")
    ax.set_ylabel(r"$P(\mathrm{probe}=|0\rangle)$")
    ax.set_ylim(-0.02, 1.02)
    title = result.model_label or "sweep"
    ax.set_title(f"{title}: c={result.plan.coupling_c:g}, tau={result.plan.tau:g}")
    if threshold is not None or peaks:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out


def plot_rabi(samples: np.ndarray, fit: RabiFit | None, path) -> Path:
    taus = samples[:, 0]
    probs = samples[:, 1]
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(taus, probs, "o", ms=3.5, color="tab:blue", label="simulation")
    if fit is not None:
        dense = np.linspace(taus.min(), taus.max(), 400)
        ax.plot(
            dense,
            fit.amplitude * np.sin(np.pi * dense / fit.period) ** 2,
            "-", lw=1.0, color="tab:orange",
            label=f"fit: T={fit.period:.4g}",
        )
    ax.set_xlabel(r"evolution time $\tau$ (Hartree$^{-1}$)")
    ax.set_ylabel(r"$P(\mathrm{probe}=|0\rangle)$")
    ax.set_ylim(-0.02, 1.05)
    ax.set_title("resonant Rabi oscillation")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out


def plot_refinement(trace: RefinementTrace, path) -> Path:
    rounds = np.arange(1, len(trace.rounds) + 1)
    centers = np.array([r.center for r in trace.rounds])
    steps = np.array([r.grid_step for r in trace.rounds])
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 5.5), sharex=True)
    ax1.plot(rounds, centers, "o-", ms=4, color="tab:blue")
    ax1.set_ylabel(r"peak center $\omega$")
    ax2.semilogy(rounds, steps, "s-", ms=4, color="tab:green")
    ax2.set_ylabel(r"grid step $\Delta\omega$")
    ax2.set_xlabel("refinement round")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out

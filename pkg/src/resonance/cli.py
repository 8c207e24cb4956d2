"""Command-line interface.

Subcommands: spectrum, sweep, refine, rabi, prepare, chain.  All energies
are Hartree and times Hartree^-1; outputs are CSV (full round-trip float
precision) and JSON (sorted keys, parameter echo for provenance), plus a
PNG figure next to each report unless --no-plot is given.  Runs are fully
deterministic: identical configuration gives byte-identical outputs.

Exit codes: 0 ok, 2 model/argument parse error, 3 I/O failure, 4 numeric or
detection failure, 5 herald failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    DarkTransitionError,
    DimensionLimitError,
    FitError,
    HeraldFailureError,
    HermiticityError,
    ModelFormatError,
    RefinementError,
    ResonanceError,
    StepLimitError,
)
from .evolve import TrotterPlan
from .model import SimulatorModel, check_coupling_guardrail, water_model
from .modelio import load_model, model_to_dict
from .prepare import (
    chain_reference,
    eigenstate_fidelity,
    prepare_eigenstate,
    state_to_dict,
)
from .spectroscopy import (
    DEFAULT_PEAK_THRESHOLD,
    Peak,
    SweepPlan,
    detect_peaks,
    fit_rabi,
    oracle_spectrum,
    rabi_scan,
    refine_peak,
    run_sweep,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4
EXIT_HERALD = 5


def _load(path: str) -> SimulatorModel:
    """Load a model file; the literal name 'water' selects the builtin preset."""
    if path == "water":
        return water_model()
    return load_model(path)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(repr(float(x)) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _provenance(args: argparse.Namespace) -> dict:
    skip = {"func"}
    return {
        "version": __version__,
        "parameters": {
            k: (str(v) if isinstance(v, Path) else v)
            for k, v in sorted(vars(args).items())
            if k not in skip
        },
    }


def _peak_dict(peak: Peak, rounds=None) -> dict:
    doc = {
        "omega_center": peak.omega_center,
        "energy_estimate": peak.energy_estimate,
        "p_max": peak.p_max,
        "width_estimate": peak.width_estimate,
        "grid_resolution": peak.grid_resolution,
    }
    if rounds is not None:
        doc["rounds"] = rounds
    return doc


def _sweep_plan(args: argparse.Namespace) -> SweepPlan:
    trotter = None
    if args.engine == "trotter" and args.trotter_steps is not None:
        trotter = TrotterPlan(order=args.trotter_order, steps_m=args.trotter_steps)
    return SweepPlan(
        omega_min=args.omega_min,
        omega_max=args.omega_max,
        n_points=args.points,
        tau=args.tau,
        coupling_c=args.coupling,
        engine=args.engine,
        trotter=trotter,
        trotter_target=args.trotter_target,
    )


def cmd_spectrum(args: argparse.Namespace) -> int:
    model = _load(args.model)
    eig = oracle_spectrum(model.system)
    payload = {
        "model_label": model.label,
        "eigenvalues": [float(v) for v in eig.values],
        **_provenance(args),
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    model = _load(args.model)
    plan = _sweep_plan(args)
    check_coupling_guardrail(model.system, plan.coupling_c)
    result = run_sweep(model, plan)
    peaks = detect_peaks(result, threshold=args.threshold, min_omega=args.min_omega)

    base = Path(args.out)
    csv_path = base.with_suffix(".csv")
    _write_csv(csv_path, "omega,p_probe_ground", zip(result.omegas, result.probabilities))
    payload = {
        "model_label": model.label,
        "e0": model.reference.energy_e0,
        "peaks": [_peak_dict(p) for p in peaks],
        **_provenance(args),
    }
    _write_json(base.with_suffix(".peaks.json"), payload)
    if not args.no_plot:
        from .plotting import plot_sweep

        plot_sweep(result, peaks, base.with_suffix(".png"), threshold=args.threshold)
    print(f"{len(peaks)} peak(s); wrote {csv_path}")
    for p in peaks:
        print(f"  omega={p.omega_center:.6f}  E={p.energy_estimate:.6f}  P={p.p_max:.4f}")
    return EXIT_OK


def cmd_refine(args: argparse.Namespace) -> int:
    model = _load(args.model)
    plan = _sweep_plan(args)
    check_coupling_guardrail(model.system, plan.coupling_c)
    result = run_sweep(model, plan)
    peaks = detect_peaks(result, threshold=args.threshold, min_omega=args.min_omega)
    if not peaks:
        raise RefinementError("no peaks detected in the initial sweep; nothing to refine")
    if args.peak is not None:
        if not 0 <= args.peak < len(peaks):
            raise RefinementError(
                f"--peak {args.peak} out of range; {len(peaks)} peak(s) detected"
            )
        selected = [peaks[args.peak]]
    else:
        selected = peaks

    work_model = model.with_coupling(plan.coupling_c)
    entries = []
    traces = []
    for peak in selected:
        trace = refine_peak(
            work_model, peak, args.eps,
            tau=plan.tau, engine=plan.engine, trotter_target=plan.trotter_target,
        )
        traces.append(trace)
        rounds = [
            {
                "c": r.coupling_c,
                "tau": r.tau,
                "grid_step": r.grid_step,
                "window": list(r.window),
                "center": r.center,
                "p_max": r.p_max,
                "n_evaluations": r.n_evaluations,
            }
            for r in trace.rounds
        ]
        entries.append(_peak_dict(trace.peak, rounds=rounds))

    base = Path(args.out)
    payload = {
        "model_label": model.label,
        "e0": model.reference.energy_e0,
        "peaks": entries,
        **_provenance(args),
    }
    _write_json(base.with_suffix(".refine.json"), payload)
    if not args.no_plot and traces:
        from .plotting import plot_refinement

        for k, trace in enumerate(traces):
            plot_refinement(trace, base.with_suffix(f".round{k}.png"))
    for e in entries:
        print(
            f"refined omega={e['omega_center']:.8f}  E={e['energy_estimate']:.8f}  "
            f"grid={e['grid_resolution']:.2e}  rounds={len(e['rounds'])}"
        )
    return EXIT_OK


def cmd_rabi(args: argparse.Namespace) -> int:
    model = _load(args.model)
    model = replace(model, omega=args.omega, coupling_c=args.coupling)
    taus = np.linspace(0.0, args.tau_max, args.points)
    samples = rabi_scan(model, taus, engine=args.engine,
                        trotter_target=args.trotter_target)
    fit = fit_rabi(samples[:, 0], samples[:, 1])

    base = Path(args.out)
    _write_csv(base.with_suffix(".csv"), "tau,p_probe_ground", samples)
    payload = {
        "model_label": model.label,
        "period": fit.period,
        "amplitude": fit.amplitude,
        "rabi_rate_c_d": fit.rabi_rate,
        "tau_star": fit.period / 2.0,
        **_provenance(args),
    }
    _write_json(base.with_suffix(".fit.json"), payload)
    if not args.no_plot:
        from .plotting import plot_rabi

        plot_rabi(samples, fit, base.with_suffix(".png"))
    print(f"period={fit.period:.6g}  c|d|={fit.rabi_rate:.6g}  tau*={fit.period / 2:.6g}")
    return EXIT_OK


def _prepare_state(args: argparse.Namespace):
    model = _load(args.model)
    model = replace(model, omega=args.omega, coupling_c=args.coupling)
    check_coupling_guardrail(model.system, model.coupling_c)
    j = args.target_state - 1
    eig = oracle_spectrum(model.system)
    if not 0 <= j < eig.dim:
        raise RefinementError(
            f"--target-state {args.target_state} out of range (1..{eig.dim})"
        )
    peak = Peak(
        omega_center=args.omega,
        p_max=0.0,
        width_estimate=0.0,
        energy_estimate=model.reference.energy_e0 + args.omega,
        grid_resolution=0.0,
    )
    state = prepare_eigenstate(model, peak, engine=args.engine,
                               trotter_target=args.trotter_target, tau=args.tau)
    fidelity = eigenstate_fidelity(state, model.system, j)
    return model, state, fidelity, j


def cmd_prepare(args: argparse.Namespace) -> int:
    model, state, fidelity, j = _prepare_state(args)
    payload = {
        "model_label": model.label,
        **state_to_dict(state, fidelity=fidelity, target_j=j + 1),
        **_provenance(args),
    }
    _write_json(Path(args.out), payload)
    print(
        f"prepared state {j + 1}: success={state.success_probability:.6f} "
        f"fidelity={fidelity:.6f}"
    )
    return EXIT_OK


def cmd_chain(args: argparse.Namespace) -> int:
    model, state, fidelity, j = _prepare_state(args)
    energy = args.energy if args.energy is not None else model.reference.energy_e0 + args.omega
    reference = chain_reference(state, energy)
    chained = replace(model, reference=reference, label=f"{model.label}-chain{j + 1}")
    doc = model_to_dict(chained)
    doc["provenance"] = _provenance(args)
    _write_json(Path(args.out), doc)
    print(
        f"chained model written to {args.out}: reference energy {energy:.6f}, "
        f"prep fidelity {fidelity:.6f}"
    )
    return EXIT_OK


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=("exact", "trotter"), default="exact",
                   help="propagator: exact diagonalization or split-step")
    p.add_argument("--trotter-order", type=int, choices=(1, 2), default=2)
    p.add_argument("--trotter-steps", type=int, default=None,
                   help="fixed step count M (default: chosen to meet --trotter-target)")
    p.add_argument("--trotter-target", type=float, default=1e-6,
                   help="propagator error target when M is auto-chosen")


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega-min", type=float, default=0.0)
    p.add_argument("--omega-max", type=float, default=2.0)
    p.add_argument("--points", type=int, default=101,
                   help="number of grid points, endpoints included")
    p.add_argument("--coupling", type=float, default=0.006)
    p.add_argument("--tau", type=float, default=1000.0)
    p.add_argument("--threshold", type=float, default=DEFAULT_PEAK_THRESHOLD)
    p.add_argument("--min-omega", type=float, default=0.0,
                   help="ignore peaks below this omega (use 4c on chained models)")
    _add_engine_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resonance",
        description="Probe-qubit resonant-transition eigensolver simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="direct diagonalization of the system Hamiltonian")
    p.add_argument("--model", required=True, help="model JSON path, or 'water'")
    p.add_argument("--out", default=None, help="optional JSON output path")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="scan the probe frequency and detect peaks")
    p.add_argument("--model", required=True)
    p.add_argument("--out", default="sweep", help="output base path (suffixes added)")
    p.add_argument("--no-plot", action="store_true")
    _add_sweep_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("refine", help="sweep, then refine peak positions to --eps")
    p.add_argument("--model", required=True)
    p.add_argument("--out", default="refine", help="output base path")
    p.add_argument("--eps", type=float, default=1e-4, help="target grid resolution")
    p.add_argument("--peak", type=int, default=None,
                   help="index of the peak to refine (default: all)")
    p.add_argument("--no-plot", action="store_true")
    _add_sweep_flags(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("rabi", help="time scan at fixed omega with a sin^2 fit")
    p.add_argument("--model", required=True)
    p.add_argument("--out", default="rabi", help="output base path")
    p.add_argument("--omega", type=float, required=True, help="resonant probe gap")
    p.add_argument("--coupling", type=float, default=0.006)
    p.add_argument("--tau-max", type=float, default=2000.0)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--no-plot", action="store_true")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_rabi)

    for name, help_text in (
        ("prepare", "herald an eigenstate at a resonant omega"),
        ("chain", "prepare, then emit a new model using the prepared state"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True)
        p.add_argument("--omega", type=float, required=True,
                       help="resonant probe gap (a refined peak center)")
        p.add_argument("--target-state", type=int, required=True,
                       help="eigenstate number, 1 = ground state")
        p.add_argument("--coupling", type=float, default=0.006)
        p.add_argument("--tau", type=float, default=None,
                       help="evolution time (default pi / (2 c |d_j|))")
        _add_engine_flags(p)
        if name == "prepare":
            p.add_argument("--out", default="prepared.json", help="state dump path")
            p.set_defaults(func=cmd_prepare)
        else:
            p.add_argument("--energy", type=float, default=None,
                           help="measured energy of the prepared level (default e0 + omega)")
            p.add_argument("--out", default="chained.json", help="new model path")
            p.set_defaults(func=cmd_chain)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (HeraldFailureError, DarkTransitionError) as exc:
        print(f"herald error: {exc}", file=sys.stderr)
        return EXIT_HERALD
    except (RefinementError, FitError, StepLimitError, DimensionLimitError,
            HermiticityError, ResonanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

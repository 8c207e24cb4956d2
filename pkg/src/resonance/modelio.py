"""Reading and writing simulator models as JSON documents.

Schema (all energies Hartree):

    {
      "label": "water",                      # optional
      "system": {
        "n_qubits": 2,
        "matrix": [[-83.9566, -0.0820, ...], ...]
      },
      "reference": {
        "index": 0,                          # or "amplitudes": [[re, im], ...]
        "energy_e0": -84.20
      },
      "transition": "hadamard",              # or {"matrix": [[...], ...]}
      "omega": 0.22,                         # optional, default 0.0
      "coupling_c": 0.006,
      "complement_offset": -8.0              # optional
    }

Matrix entries are either plain numbers (real) or two-element [re, im]
pairs; rows are row-major.  Parse and validation errors raise
ModelFormatError carrying the file path and, where known, the JSON path of
the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import HermiticityError, ModelFormatError
from .model import (
    DEFAULT_COMPLEMENT_OFFSET,
    ReferenceState,
    SimulatorModel,
    SystemHamiltonian,
    TransitionOperator,
    basis_reference,
    hadamard_transition,
)


def _entry_to_complex(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(x, (int, float)) for x in value
    ):
        return complex(value[0], value[1])
    raise ModelFormatError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _decode_matrix(rows, where: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ModelFormatError(f"{where}: expected a non-empty list of rows")
    n = len(rows)
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ModelFormatError(f"{where}[{i}]: expected a row of length {n}")
        for j, value in enumerate(row):
            out[i, j] = _entry_to_complex(value, f"{where}[{i}][{j}]")
    return out


def _encode_matrix(m: np.ndarray) -> list:
    if np.allclose(m.imag, 0.0, atol=0.0):
        return [[float(x) for x in row] for row in m.real]
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def _encode_amplitudes(psi: np.ndarray) -> list:
    return [[float(a.real), float(a.imag)] for a in psi]


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ModelFormatError(f"{where}: missing required field {key!r}")
    return doc[key]


def model_from_dict(doc: dict, where: str = "model") -> SimulatorModel:
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{where}: expected a JSON object")

    sys_doc = _require(doc, "system", where)
    if not isinstance(sys_doc, dict):
        raise ModelFormatError(f"{where}.system: expected an object")
    n_qubits = _require(sys_doc, "n_qubits", f"{where}.system")
    if not isinstance(n_qubits, int) or n_qubits < 1:
        raise ModelFormatError(f"{where}.system.n_qubits: expected a positive integer")
    matrix = _decode_matrix(_require(sys_doc, "matrix", f"{where}.system"), f"{where}.system.matrix")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ModelFormatError(f"{where}.label: expected a string")
    try:
        system = SystemHamiltonian(n_qubits=n_qubits, matrix=matrix, label=label)
    except HermiticityError as exc:
        raise ModelFormatError(
            f"{where}.system.matrix: {exc} (entry [{exc.row},{exc.col}])"
        ) from exc
    except ValueError as exc:
        raise ModelFormatError(f"{where}.system: {exc}") from exc

    ref_doc = _require(doc, "reference", where)
    if not isinstance(ref_doc, dict):
        raise ModelFormatError(f"{where}.reference: expected an object")
    energy_e0 = _require(ref_doc, "energy_e0", f"{where}.reference")
    if not isinstance(energy_e0, (int, float)):
        raise ModelFormatError(f"{where}.reference.energy_e0: expected a number")
    if "index" in ref_doc and "amplitudes" in ref_doc:
        raise ModelFormatError(f"{where}.reference: give either index or amplitudes, not both")
    if "index" in ref_doc:
        index = ref_doc["index"]
        if not isinstance(index, int):
            raise ModelFormatError(f"{where}.reference.index: expected an integer")
        try:
            reference = basis_reference(n_qubits, index, float(energy_e0))
        except ValueError as exc:
            raise ModelFormatError(f"{where}.reference.index: {exc}") from exc
    elif "amplitudes" in ref_doc:
        amps_doc = ref_doc["amplitudes"]
        if not isinstance(amps_doc, list) or len(amps_doc) != 2**n_qubits:
            raise ModelFormatError(
                f"{where}.reference.amplitudes: expected {2**n_qubits} entries"
            )
        amps = np.array(
            [_entry_to_complex(a, f"{where}.reference.amplitudes[{k}]") for k, a in enumerate(amps_doc)]
        )
        try:
            reference = ReferenceState(psi=amps, energy_e0=float(energy_e0))
        except ValueError as exc:
            raise ModelFormatError(f"{where}.reference.amplitudes: {exc}") from exc
    else:
        raise ModelFormatError(f"{where}.reference: needs index or amplitudes")

    trans_doc = _require(doc, "transition", where)
    if trans_doc == "hadamard":
        transition = hadamard_transition(n_qubits)
    elif isinstance(trans_doc, dict) and "matrix" in trans_doc:
        bmat = _decode_matrix(trans_doc["matrix"], f"{where}.transition.matrix")
        if bmat.shape[0] != 2**n_qubits:
            raise ModelFormatError(
                f"{where}.transition.matrix: dimension {bmat.shape[0]} != 2^{n_qubits}"
            )
        transition = TransitionOperator(matrix_b=bmat, label=str(trans_doc.get("label", "custom")))
    else:
        raise ModelFormatError(
            f"{where}.transition: expected \"hadamard\" or an object with a matrix"
        )

    coupling_c = _require(doc, "coupling_c", where)
    if not isinstance(coupling_c, (int, float)):
        raise ModelFormatError(f"{where}.coupling_c: expected a number")
    omega = doc.get("omega", 0.0)
    if not isinstance(omega, (int, float)):
        raise ModelFormatError(f"{where}.omega: expected a number")
    offset = doc.get("complement_offset", DEFAULT_COMPLEMENT_OFFSET)
    if not isinstance(offset, (int, float)):
        raise ModelFormatError(f"{where}.complement_offset: expected a number")

    try:
        return SimulatorModel(
            system=system,
            reference=reference,
            transition=transition,
            omega=float(omega),
            coupling_c=float(coupling_c),
            complement_offset=float(offset),
            label=label,
        )
    except ValueError as exc:
        raise ModelFormatError(f"{where}: {exc}") from exc


def model_to_dict(model: SimulatorModel) -> dict:
    ref: dict = {"energy_e0": float(model.reference.energy_e0)}
    psi = model.reference.psi
    hot = np.flatnonzero(np.abs(psi) > 0)
    if len(hot) == 1 and abs(psi[hot[0]] - 1.0) < 1e-15:
        ref["index"] = int(hot[0])
    else:
        ref["amplitudes"] = _encode_amplitudes(psi)

    if model.transition.label.startswith("hadamard^"):
        trans = "hadamard"
    else:
        trans = {
            "label": model.transition.label,
            "matrix": _encode_matrix(model.transition.matrix_b),
        }

    return {
        "label": model.label,
        "system": {
            "n_qubits": model.system.n_qubits,
            "matrix": _encode_matrix(model.system.matrix),
        },
        "reference": ref,
        "transition": trans,
        "omega": float(model.omega),
        "coupling_c": float(model.coupling_c),
        "complement_offset": float(model.complement_offset),
    }


def load_model(path) -> SimulatorModel:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError:
        raise
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return model_from_dict(doc, where=str(p))


def save_model(model: SimulatorModel, path) -> None:
    p = Path(path)
    p.write_text(json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n")

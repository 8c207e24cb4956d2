"""Dense complex linear algebra for small Hilbert spaces.

Everything here operates on plain numpy arrays: square ``complex128``
matrices for operators and 1-d ``complex128`` arrays for state vectors.
The eigensolver is a cyclic Jacobi iteration, chosen for unconditional
stability and orthonormal-by-construction eigenvectors at the matrix sizes
this package targets (dimension up to a few thousand for tensor products,
up to ~64 for eigenproblems).

All functions are pure: inputs are never mutated and identical inputs give
bitwise-identical outputs on one platform.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DimensionLimitError, HermiticityError

MAX_DIM_ENV = "RESONANCE_MAX_DIM"
DEFAULT_MAX_DIM = 2**14

HERMITICITY_TOL = 1e-10


def max_dim() -> int:
    """Largest allowed matrix dimension, overridable via RESONANCE_MAX_DIM."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise DimensionLimitError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}") from exc
    if value < 2:
        raise DimensionLimitError(f"{MAX_DIM_ENV} must be at least 2, got {value}")
    return value


def as_operator(a) -> np.ndarray:
    """Coerce to a finite complex square matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix contains non-finite entries")
    return m


def as_state(psi) -> np.ndarray:
    """Coerce to a finite complex vector."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError("state vector contains non-finite entries")
    return v


def kron(a, b) -> np.ndarray:
    """Kronecker product with a guard on the resulting dimension.

    The size cap (default 2^14, override with RESONANCE_MAX_DIM) keeps an
    accidental tensor blow-up from exhausting memory.
    """
    am = np.asarray(a, dtype=complex)
    bm = np.asarray(b, dtype=complex)
    cap = max_dim()
    rows = am.shape[0] * bm.shape[0]
    cols = am.shape[1] * bm.shape[1]
    if rows > cap or cols > cap:
        raise DimensionLimitError(
            f"kron result would be {rows}x{cols}, above the cap {cap} "
            f"(set {MAX_DIM_ENV} to raise it)"
        )
    return np.kron(am, bm)


def kron_power(a, n: int) -> np.ndarray:
    """n-fold Kronecker power of a matrix."""
    if n < 1:
        raise ValueError(f"kron_power needs n >= 1, got {n}")
    out = np.asarray(a, dtype=complex)
    for _ in range(n - 1):
        out = kron(out, a)
    return out


def hermiticity_defect(h) -> tuple[float, int, int]:
    """Max-entry deviation of h from h-dagger, with the offending index."""
    m = as_operator(h)
    d = np.abs(m - m.conj().T)
    idx = int(np.argmax(d))
    i, j = divmod(idx, m.shape[1])
    return float(d[i, j]), i, j


def require_hermitian(h, tol: float = HERMITICITY_TOL, what: str = "matrix") -> np.ndarray:
    """Validate Hermiticity, raising an error that names the worst entry."""
    m = as_operator(h)
    defect, i, j = hermiticity_defect(m)
    if defect > tol:
        raise HermiticityError(
            f"{what} is not Hermitian: |[{i},{j}] - conj([{j},{i}])| = {defect:.3e} "
            f"exceeds {tol:.1e}",
            row=i,
            col=j,
            defect=defect,
        )
    return m


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.values)

    def propagate(self, t: float, psi: np.ndarray) -> np.ndarray:
        """Apply exp(-i H t) to a state using this decomposition of H."""
        v = self.vectors
        return v @ (np.exp(-1j * self.values * t) * (v.conj().T @ as_state(psi)))

    def unitary(self, t: float) -> np.ndarray:
        """The propagator exp(-i H t) as a dense matrix."""
        v = self.vectors
        return (v * np.exp(-1j * self.values * t)) @ v.conj().T


def hermitian_eig(h, tol: float = 1e-12, max_sweeps: int = 100) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps row-major over the upper triangle, annihilating each off-diagonal
    element with a complex plane rotation, until the off-diagonal Frobenius
    norm is at most ``tol`` (or the machine-precision floor for large-norm
    input) or ``max_sweeps`` sweeps have run.  The accumulated rotations give
    orthonormal eigenvectors by construction.  The sweep order is fixed, so
    the output is deterministic.

    Ascending eigenvalue sort is stable: degenerate values keep the order in
    which the diagonal produced them.
    """
    a = require_hermitian(h).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return EigenDecomposition(values=a.real.reshape(1).copy(), vectors=v)

    for _ in range(max_sweeps):
        # summed directly over off-diagonal entries: the algebraically
        # equivalent fro^2 - diag^2 cancels catastrophically near convergence
        hollow = a.copy()
        np.fill_diagonal(hollow, 0.0)
        off = float(np.linalg.norm(hollow))
        fro = float(np.linalg.norm(a))
        if off <= tol or off <= 1e-15 * fro:
            break
        # Elements this small cannot move the off-norm past tol; skipping
        # them also avoids overflow when normalizing the rotation phase.
        skip = max(1e-300, 1e-18 * fro)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                phase = apq / r
                theta = 0.5 * math.atan2(2.0 * r, (a[p, p] - a[q, q]).real)
                c = math.cos(theta)
                s = math.sin(theta)
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp + s * np.conj(phase) * cq
                a[:, q] = -s * phase * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp + s * phase * rq
                a[q, :] = -s * np.conj(phase) * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + s * np.conj(phase) * vq
                v[:, q] = -s * phase * vp + c * vq

    values = np.real(np.diagonal(a)).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values=values[order], vectors=v[:, order])


def unitary_exp(h, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, exact via eigendecomposition."""
    return hermitian_eig(h).unitary(t)


def overlap(a, b) -> complex:
    """Inner product <a|b> (conjugate-linear in the first argument)."""
    av = as_state(a)
    bv = as_state(b)
    if av.shape != bv.shape:
        raise ValueError(f"state dimensions differ: {av.shape[0]} vs {bv.shape[0]}")
    return complex(np.vdot(av, bv))


def norm(psi) -> float:
    return float(np.linalg.norm(as_state(psi)))


def normalize(psi) -> np.ndarray:
    v = as_state(psi)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def state_fidelity(a, b) -> float:
    """|<a|b>|^2 for normalized states."""
    return abs(overlap(a, b)) ** 2


def unitarity_defect(u) -> float:
    """Max-entry deviation of u-dagger u from the identity."""
    m = as_operator(u)
    return float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max())

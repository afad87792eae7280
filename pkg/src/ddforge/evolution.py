"""Exact unitary composition of pulse schedules and a preservation fidelity.

Free segments are propagated with exp(-i H dt) through one Hermitian
eigendecomposition of H, reused across all segments of a schedule; ideal
pulses are bare Pauli factors on the qubit slot.  Everything stays dense;
dimensions of interest are 2d <= 128.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bath import SIGMA, BathOperators, total_hamiltonian
from .sequences import PauliAxis, PulseSequence

HERMITICITY_TOL = 1e-10


def _check_hermitian(h: np.ndarray) -> None:
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    if np.abs(h - h.conj().T).max() > HERMITICITY_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")


def expm_segment(h: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i h dt) for Hermitian h via eigendecomposition."""
    _check_hermitian(h)
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * dt)) @ evecs.conj().T


def pulse_unitary(axis: PauliAxis, d: int) -> np.ndarray:
    """Ideal pi pulse sigma_axis (x) I_d (bare Pauli phase convention)."""
    axis = PauliAxis(axis)
    if axis is PauliAxis.I:
        raise ValueError("no pulse about the identity")
    return np.kron(SIGMA[axis.value], np.eye(d, dtype=complex))


def control_product(seq: PulseSequence) -> np.ndarray:
    """Ordered 2x2 product of the ideal pulse factors alone.

    This is the net control rotation the schedule would apply with the bath
    switched off (phase included).  Odd pulse counts leave a net pi rotation
    that is control action, not decoherence; effective-generator extraction
    removes it first.
    """
    out = SIGMA["I"].copy()
    for p in seq.pulses:
        out = SIGMA[p.axis.value] @ out
    return out


UNITARITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class UnitaryResult:
    """Composed sequence unitary with schedule metadata; unitary to 1e-10."""

    u: np.ndarray
    total_duration: float
    pulse_count: int
    label: str = ""

    def __post_init__(self):
        defect = np.abs(self.u.conj().T @ self.u - np.eye(self.u.shape[0])).max()
        if defect > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary: defect {defect:.2e}")
        self.u.flags.writeable = False


def sequence_unitary(seq: PulseSequence, ops: BathOperators) -> UnitaryResult:
    """Time-ordered product of segment exponentials and pulse factors.

    Later factors multiply on the left; zero-length segments (boundary
    pulses) are skipped.  The result is unitary to 1e-10.
    """
    h = total_hamiltonian(ops)
    evals, evecs = np.linalg.eigh(h)
    evecs_h = evecs.conj().T
    d = ops.dim
    u = np.eye(2 * d, dtype=complex)
    prev = 0.0
    for p in seq.pulses:
        frac = p.t_frac
        if frac > prev:
            dt = (frac - prev) * seq.total_duration
            u = (evecs * np.exp(-1j * evals * dt)) @ (evecs_h @ u)
        u = pulse_unitary(p.axis, d) @ u
        prev = frac
    if prev < 1.0:
        dt = (1.0 - prev) * seq.total_duration
        u = (evecs * np.exp(-1j * evals * dt)) @ (evecs_h @ u)
    return UnitaryResult(u=u, total_duration=seq.total_duration, pulse_count=seq.pulse_count, label=seq.label)


def entanglement_fidelity(u: UnitaryResult | np.ndarray) -> float:
    """Qubit-preservation fidelity for a maximally mixed bath.

    With bath state I/d the Kraus operators are the 2x2 qubit blocks
    K_ij = <i|U|j>/sqrt(d) over bath basis states, and
    F_e = sum_ij |tr(K_ij)/2|^2.  Invariant under global phase.
    """
    mat = u.u if isinstance(u, UnitaryResult) else np.asarray(u)
    d = mat.shape[0] // 2
    traces = mat[:d, :d] + mat[d:, d:]
    fe = float(np.sum(np.abs(traces) ** 2) / (4 * d))
    return min(max(fe, 0.0), 1.0)

"""Extended-precision residual-coupling evaluation via mpmath.

Steep suppression orders push the residual couplings below the double
roundoff floor (about 1e-15 in the extracted generator) on the small-duration
grids used for order fits; a fifth-order family at alpha*t = 1e-3 sits at
1e-15 exactly.  This engine redoes the evolution and the principal log in
arbitrary precision and only then converts the tiny Pauli blocks to floats,
which represent them with full relative accuracy.

The log uses the Mercator series log(I + X) with X = U - I, valid while all
eigenphases stay below pi/3; scans run at alpha*t <= 0.1 where phases stay
below ~0.5.  Divergence is detected by growth of the term norms.
"""

from __future__ import annotations

import threading

import mpmath as mp
import numpy as np

from .bath import BathOperators, total_hamiltonian
from .effective import (
    BranchAmbiguityError,
    EffectiveHamiltonian,
    error_functionals,
    pauli_decompose,
)
from .evolution import control_product, pulse_unitary
from .sequences import PulseSequence

DEFAULT_DPS = 40

# mpmath's working precision is process-global state; concurrent scans must
# not interleave workdps blocks.
_MP_LOCK = threading.Lock()


def _to_mp(a: np.ndarray) -> mp.matrix:
    n, m = a.shape
    out = mp.matrix(n, m)
    for i in range(n):
        for j in range(m):
            v = complex(a[i, j])
            if v != 0:
                out[i, j] = mp.mpc(v.real, v.imag)
    return out


def _to_numpy(a: mp.matrix) -> np.ndarray:
    return np.array([[complex(a[i, j]) for j in range(a.cols)] for i in range(a.rows)])


def _series_log(u: mp.matrix, dps: int) -> mp.matrix:
    """Principal log of a unitary close to the identity, by Mercator series."""
    n = u.rows
    x = u - mp.eye(n)
    term = mp.eye(n)
    total = mp.matrix(n)
    floor = mp.mpf(10) ** (-(dps + 6))
    prev_norm = mp.inf
    for k in range(1, 1000):
        term = term * x
        norm = mp.mnorm(term, "f")
        if k > 3 and norm > prev_norm:
            raise BranchAmbiguityError(
                "series log diverging: eigenphases too large for the extended path; shrink the duration"
            )
        prev_norm = norm
        total += term * (mp.mpf(-1) ** (k + 1) / k)
        if norm < floor:
            return total
    raise BranchAmbiguityError("series log did not converge; shrink the duration")


def sequence_effective(seq: PulseSequence, ops: BathOperators, dps: int = DEFAULT_DPS) -> EffectiveHamiltonian:
    """High-precision effective generator of a schedule under a model.

    The net control rotation (ordered product of the ideal pulse factors) is
    removed before the log, exactly as in the double-precision pipeline.
    """
    d = ops.dim
    n2 = 2 * d
    with _MP_LOCK, mp.workdps(dps):
        h = _to_mp(total_hamiltonian(ops))
        evals, q = mp.eighe(h)
        q_h = q.transpose_conj()
        t = mp.mpf(seq.total_duration)

        def segment(dt):
            phases = mp.diag([mp.exp(-1j * evals[k] * dt) for k in range(n2)])
            return q * phases * q_h

        pulse_cache = {}
        u = mp.eye(n2)
        prev = mp.mpf(0)
        for p in seq.pulses:
            frac = (
                mp.mpf(p.instant.numerator) / p.instant.denominator
                if p.is_exact
                else mp.mpf(p.instant)
            )
            if frac > prev:
                u = segment((frac - prev) * t) * u
            if p.axis not in pulse_cache:
                pulse_cache[p.axis] = _to_mp(pulse_unitary(p.axis, d))
            u = pulse_cache[p.axis] * u
            prev = frac
        if prev < 1:
            u = segment((1 - prev) * t) * u

        ctrl = _to_mp(np.kron(control_product(seq), np.eye(d)))
        u = ctrl.transpose_conj() * u

        m = 1j * _series_log(u, dps)
        m = (m + m.transpose_conj()) * mp.mpf("0.5")
        m_np = _to_numpy(m)

    return pauli_decompose(m_np, seq.total_duration)


def sequence_error_functionals(seq: PulseSequence, ops: BathOperators, dps: int = DEFAULT_DPS) -> dict:
    """E_flip / E_dephase / E_total of a schedule, evaluated at high precision."""
    return error_functionals(sequence_effective(seq, ops, dps))

import math

import numpy as np
import pytest

from ddforge.bath import SIGMA, BathOperators, ModelSpec, build_model, total_hamiltonian
from ddforge.evolution import (
    UnitaryResult,
    control_product,
    entanglement_fidelity,
    expm_segment,
    pulse_unitary,
    sequence_unitary,
)
from ddforge.sequences import PauliAxis, PulseSequence, cpmg, spin_echo, udd_sequence

RNG = np.random.default_rng(2024)


def random_hermitian(d, scale=1.0):
    g = RNG.normal(size=(d, d)) + 1j * RNG.normal(size=(d, d))
    a = (g + g.conj().T) / 2
    return a * (scale / np.abs(np.linalg.eigvalsh(a)).max())


def series_expm(h, dt, terms=30):
    # Independent oracle: truncated Taylor series of exp(-i h dt).
    out = np.eye(h.shape[0], dtype=complex)
    term = np.eye(h.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ (-1j * dt * h) / k
        out = out + term
    return out


def dephasing_model(seed=3, with_a0=False):
    d = 4
    zero = np.zeros((d, d), dtype=complex)
    az = random_hermitian(d)
    a0 = random_hermitian(d) if with_a0 else zero.copy()
    return BathOperators(a0=a0, ax=zero.copy(), ay=zero.copy(), az=az)


class TestExpmSegment:
    def test_zero_duration(self):
        h = random_hermitian(5)
        assert np.allclose(expm_segment(h, 0.0), np.eye(5))

    def test_diagonal_pi(self):
        h = np.diag([1.0, -1.0]).astype(complex)
        assert np.allclose(expm_segment(h, math.pi), -np.eye(2), atol=1e-12)

    def test_matches_series(self):
        h = random_hermitian(6, scale=0.8)
        assert np.abs(expm_segment(h, 0.5) - series_expm(h, 0.5)).max() < 1e-12

    def test_semigroup(self):
        h = random_hermitian(6)
        u = expm_segment(h, 0.3)
        assert np.abs(u @ u - expm_segment(h, 0.6)).max() < 1e-11

    def test_unitarity(self):
        u = expm_segment(random_hermitian(8, scale=2.0), 1.3)
        assert np.abs(u.conj().T @ u - np.eye(8)).max() < 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            expm_segment(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)


class TestPulseUnitary:
    def test_involution(self):
        for axis in (PauliAxis.X, PauliAxis.Y, PauliAxis.Z):
            u = pulse_unitary(axis, 3)
            assert np.allclose(u @ u, np.eye(6))

    def test_pauli_algebra(self):
        zx = pulse_unitary(PauliAxis.Z, 2) @ pulse_unitary(PauliAxis.X, 2)
        assert np.allclose(zx, 1j * np.kron(SIGMA["Y"], np.eye(2)))

    def test_commutes_with_bath_operator(self):
        b = random_hermitian(4)
        lifted = np.kron(np.eye(2), b)
        u = pulse_unitary(PauliAxis.X, 4)
        assert np.abs(u @ lifted - lifted @ u).max() < 1e-12

    def test_rejects_identity(self):
        with pytest.raises(ValueError):
            pulse_unitary(PauliAxis.I, 2)


class TestSequenceUnitary:
    def test_empty_schedule_is_free_evolution(self):
        ops = build_model(ModelSpec(d=4, seed=5))
        t = 0.37
        seq = PulseSequence(t, ())
        res = sequence_unitary(seq, ops)
        assert np.abs(res.u - expm_segment(total_hamiltonian(ops), t)).max() < 1e-12
        assert res.pulse_count == 0 and res.total_duration == t

    def test_echo_on_static_dephasing(self):
        # X echo with H = sigma_z x A_z: the two halves cancel exactly and
        # only the bare pulse remains, so the sigma_z block of U vanishes.
        ops = dephasing_model()
        res = sequence_unitary(spin_echo(1.0, PauliAxis.X), ops)
        d = ops.dim
        assert np.abs(res.u - np.kron(SIGMA["X"], np.eye(d))).max() < 1e-12
        sigma_z_block = (res.u[:d, :d] - res.u[d:, d:]) / 2
        assert np.abs(sigma_z_block).max() < 1e-12

    def test_echo_effective_generator_has_no_dephasing(self):
        from ddforge.effective import sequence_effective

        ops = dephasing_model()
        eff = sequence_effective(spin_echo(1.0, PauliAxis.X), ops)
        assert np.abs(eff.az).max() < 1e-12

    def test_cpmg_refocuses_static_dephasing(self):
        ops = dephasing_model()
        res = sequence_unitary(cpmg(1.0, PauliAxis.X), ops)
        assert entanglement_fidelity(res) == pytest.approx(1.0, abs=1e-10)

    def test_reversal_identity(self):
        # Echo run under H composed with the echo run under -H is the identity.
        ops = dephasing_model(with_a0=True)
        flipped = BathOperators(a0=-ops.a0, ax=-ops.ax, ay=-ops.ay, az=-ops.az)
        seq = spin_echo(0.7, PauliAxis.X)
        forward = sequence_unitary(seq, ops).u
        backward = sequence_unitary(seq, flipped).u
        assert np.abs(backward @ forward - np.eye(2 * ops.dim)).max() < 1e-10

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_unitarity_random_models(self, seed):
        ops = build_model(ModelSpec(d=4, seed=seed))
        res = sequence_unitary(udd_sequence(4, 0.5), ops)
        assert np.abs(res.u.conj().T @ res.u - np.eye(8)).max() < 1e-10

    def test_boundary_pulse_skips_zero_segment(self):
        from ddforge.sequences import Pulse

        ops = build_model(ModelSpec(d=4, seed=5))
        seq = PulseSequence(0.2, (Pulse(0.0, PauliAxis.X),))
        res = sequence_unitary(seq, ops)
        expected = expm_segment(total_hamiltonian(ops), 0.2) @ pulse_unitary(PauliAxis.X, 4)
        assert np.abs(res.u - expected).max() < 1e-12


class TestUnitaryResultType:
    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="not unitary"):
            UnitaryResult(u=np.ones((4, 4), dtype=complex), total_duration=1.0, pulse_count=0)

    def test_result_is_read_only(self):
        ops = build_model(ModelSpec(d=4, seed=5))
        res = sequence_unitary(cpmg(0.1), ops)
        with pytest.raises(ValueError):
            res.u[0, 0] = 0.0


class TestControlProduct:
    def test_even_x_count_is_identity(self):
        assert np.allclose(control_product(cpmg(1.0, PauliAxis.X)), np.eye(2))

    def test_single_pulse(self):
        assert np.allclose(control_product(spin_echo()), SIGMA["Z"])

    def test_order_and_phase(self):
        from ddforge.sequences import Pulse

        seq = PulseSequence(1.0, (Pulse(0.25, PauliAxis.X), Pulse(0.75, PauliAxis.Z)))
        assert np.allclose(control_product(seq), SIGMA["Z"] @ SIGMA["X"])


class TestEntanglementFidelity:
    def test_identity(self):
        assert entanglement_fidelity(np.eye(8)) == pytest.approx(1.0)

    def test_bit_flip(self):
        assert entanglement_fidelity(np.kron(SIGMA["X"], np.eye(4))) == pytest.approx(0.0)

    @pytest.mark.parametrize("theta", [0.1, 0.7, 1.2])
    def test_z_rotation(self, theta):
        u = np.kron(np.diag([np.exp(-1j * theta), np.exp(1j * theta)]), np.eye(4))
        assert entanglement_fidelity(u) == pytest.approx(math.cos(theta) ** 2, abs=1e-12)

    def test_phase_invariance(self):
        ops = build_model(ModelSpec(d=4, seed=8))
        res = sequence_unitary(udd_sequence(2, 0.3), ops)
        shifted = UnitaryResult(
            u=np.exp(1j * 0.923) * res.u,
            total_duration=res.total_duration,
            pulse_count=res.pulse_count,
        )
        assert entanglement_fidelity(shifted) == pytest.approx(entanglement_fidelity(res), abs=1e-12)

    def test_infidelity_quadratic_at_small_t(self):
        ops = build_model(ModelSpec(d=4, seed=8))
        ts = np.geomspace(1e-4, 1e-3, 6)
        infidelity = []
        for t in ts:
            res = sequence_unitary(PulseSequence(float(t), ()), ops)
            infidelity.append(1.0 - entanglement_fidelity(res))
        slope = np.polyfit(np.log(ts), np.log(infidelity), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.05)

"""Qubit-bath Hamiltonians H = sum_g sigma_g (x) A_g with controlled norms.

Bath operators are dense Hermitian matrices with prescribed spectral norms,
drawn reproducibly from a seeded PCG64 generator (``numpy.random.default_rng``)
so a model is a pure function of its spec.  Energy units are set so that the
norm targets are dimensionless.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .sequences import PauliAxis

GAMMAS = ("0", "x", "y", "z")

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_GAMMA_SIGMA = {"0": "I", "x": "X", "y": "Y", "z": "Z"}

DEFAULT_DIM = 4
MAX_DIM = 64

_SPIN_BATH_RE = re.compile(r"^spin_bath\((\d+)\)$")


def spectral_norm(a: np.ndarray) -> float:
    """Largest |eigenvalue| of a Hermitian matrix."""
    if a.size == 0 or not np.any(a):
        return 0.0
    return float(np.abs(np.linalg.eigvalsh(a)).max())


@dataclass(frozen=True)
class ModelSpec:
    """Reproducible recipe for one bath model.

    preset is one of ``generic``, ``pure_dephasing``, ``anisotropic`` or
    ``spin_bath(k)``.  norm_targets overrides the preset defaults per
    coupling channel; presets validate their constraints (pure dephasing
    forces zero x/y targets, anisotropic keeps the z target at most a tenth
    of the smaller transverse one, spin_bath(k) pins d = 2^k).
    """

    d: int = DEFAULT_DIM
    seed: int = 0
    preset: str = "generic"
    norm_targets: dict = field(default_factory=dict)

    def __post_init__(self):
        targets = self.resolved_targets()
        if self.d < 1:
            raise ValueError("bath dimension must be at least 1")
        match = _SPIN_BATH_RE.match(self.preset)
        if match:
            k = int(match.group(1))
            if self.d != 2**k:
                raise ValueError(f"spin_bath({k}) requires d = {2**k}, got {self.d}")
        elif self.preset == "pure_dephasing":
            if targets["x"] != 0.0 or targets["y"] != 0.0:
                raise ValueError("pure_dephasing requires zero x and y norm targets")
        elif self.preset == "anisotropic":
            limit = 0.1 * min(targets["x"], targets["y"])
            if targets["z"] > limit + 1e-15:
                raise ValueError(f"anisotropic requires z target <= {limit}")
        elif self.preset != "generic":
            raise ValueError(f"unknown preset {self.preset!r}")
        object.__setattr__(self, "norm_targets", dict(targets))

    def resolved_targets(self) -> dict:
        defaults = {g: 1.0 for g in GAMMAS}
        if self.preset == "pure_dephasing":
            defaults["x"] = defaults["y"] = 0.0
        elif self.preset == "anisotropic":
            defaults["z"] = 0.1
        merged = dict(defaults)
        for key, value in self.norm_targets.items():
            key = str(key)
            if key not in GAMMAS:
                raise ValueError(f"unknown coupling channel {key!r}")
            if value < 0:
                raise ValueError("norm targets must be non-negative")
            merged[key] = float(value)
        return merged


@dataclass(frozen=True, eq=False)
class BathOperators:
    """Four Hermitian bath operators of common dimension, read-only."""

    a0: np.ndarray
    ax: np.ndarray
    ay: np.ndarray
    az: np.ndarray

    def __post_init__(self):
        d = self.a0.shape[0]
        for name, a in self.items():
            if a.shape != (d, d):
                raise ValueError("all bath operators must share one square shape")
            if np.abs(a - a.conj().T).max() > 1e-12:
                raise ValueError(f"A_{name} is not Hermitian")
            a.flags.writeable = False

    def items(self):
        return (("0", self.a0), ("x", self.ax), ("y", self.ay), ("z", self.az))

    @property
    def dim(self) -> int:
        return self.a0.shape[0]


def _random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return np.ascontiguousarray((g + g.conj().T) / 2)


def _spin_bath_hermitian(rng: np.random.Generator, k: int) -> np.ndarray:
    # Sum of single-spin Pauli terms with Gaussian coefficients over k bath spins.
    d = 2**k
    out = np.zeros((d, d), dtype=complex)
    for site in range(k):
        for pauli in ("X", "Y", "Z"):
            op = np.eye(1, dtype=complex)
            for j in range(k):
                op = np.kron(op, SIGMA[pauli] if j == site else SIGMA["I"])
            out += rng.normal() * op
    return out


def build_model(spec: ModelSpec, max_dim: int = MAX_DIM) -> BathOperators:
    """Draw the four bath operators for a spec, scaled to their norm targets.

    Deterministic for a given spec: one PCG64 stream drawn in the fixed
    channel order 0, x, y, z.
    """
    if spec.d > max_dim:
        raise ValueError(f"bath dimension {spec.d} exceeds the cap {max_dim}")
    rng = np.random.default_rng(spec.seed)
    match = _SPIN_BATH_RE.match(spec.preset)
    ops = {}
    for g in GAMMAS:
        target = spec.norm_targets[g]
        raw = _spin_bath_hermitian(rng, int(match.group(1))) if match else _random_hermitian(rng, spec.d)
        if target == 0.0:
            ops[g] = np.zeros((spec.d, spec.d), dtype=complex)
        else:
            ops[g] = raw * (target / spectral_norm(raw))
    return BathOperators(a0=ops["0"], ax=ops["x"], ay=ops["y"], az=ops["z"])


def total_hamiltonian(ops: BathOperators) -> np.ndarray:
    """Assemble sum_g sigma_g (x) A_g with the qubit factor first."""
    h = np.zeros((2 * ops.dim, 2 * ops.dim), dtype=complex)
    for g, a in ops.items():
        h += np.kron(SIGMA[_GAMMA_SIGMA[g]], a)
    return h


def alpha(ops: BathOperators) -> float:
    """Largest spectral norm over the four bath operators."""
    return max(spectral_norm(a) for _, a in ops.items())


def pulse_matrix(axis: PauliAxis) -> np.ndarray:
    """Bare 2x2 Pauli matrix of an ideal pi pulse."""
    axis = PauliAxis(axis)
    if axis is PauliAxis.I:
        raise ValueError("no pulse about the identity")
    return SIGMA[axis.value]


def spec_to_dict(spec: ModelSpec) -> dict:
    return {
        "d": spec.d,
        "seed": spec.seed,
        "preset": spec.preset,
        "norm_targets": {g: spec.norm_targets[g] for g in GAMMAS},
    }


def spec_from_dict(data: dict) -> ModelSpec:
    return ModelSpec(
        d=int(data.get("d", DEFAULT_DIM)),
        seed=int(data.get("seed", 0)),
        preset=str(data.get("preset", "generic")),
        norm_targets=dict(data.get("norm_targets", {})),
    )


def spec_to_json(spec: ModelSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2)


def spec_from_json(text: str) -> ModelSpec:
    return spec_from_dict(json.loads(text))
